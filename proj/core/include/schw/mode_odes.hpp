#pragma once

// Separated radial problem for the Jacobi operator of the plane through the origin.
// With u(r, theta) = sum_k u_k(r) e^{ik theta} and v = sqrt(r) u_k, each mode satisfies
//
//   v'' + Q(r) v = 0,   Q = 1/(4r^2) - k^2/r^2 + (m/r^3)(1 + m/2r)^-2 + lambda (1 + m/2r)^4,
//   v'(m/2) = v(m/2)/m,  v(R) = 0.
//
// gamma = v'/v turns this into a Riccati equation; closed-form solutions and barriers for
// it live here too. lambda is in physical units (1/length^2).

#include <optional>
#include <vector>

#include "schw/geometry.hpp"

namespace schw {

struct ModeParams {
    ModeParams(const SchwarzschildModel& model, int k, double lambda, double outer_radius);

    SchwarzschildModel model;
    int k;
    double lambda;
    double R;  ///< outer truncation radius (isotropic), R > m/2
};

/// (v, v') at one accepted integration node. The true solution value is v * exp(log_scale);
/// the integrator renormalizes on growth so that exponentially growing shots stay finite.
struct RadialNode {
    double r;
    double v;
    double v_prime;
    double log_scale;
};

struct RadialSolution {
    ModeParams params;
    std::vector<RadialNode> nodes;
    std::vector<double> zero_crossings;
    double tol;

    double r_min() const { return nodes.front().r; }
    double r_max() const { return nodes.back().r; }

    /// Dense output: quintic Hermite on the bracketing step, with v'' and v''' taken from the
    /// equation. Returned (v, v') share
    /// the returned log_scale.
    RadialNode evaluate(double r) const;

    /// Largest |v| over the nodes, in the scale of the first node. Only meaningful when
    /// no renormalization took place (log_scale == 0 throughout).
    double sup_abs_v() const;
    bool renormalized() const;
};

/// Q(r) in v'' + Q v = 0.
double v_coefficient(const ModeParams& params, double r);

/// Adaptive Dormand-Prince integration from (v, v')(m/2) = (1, 1/m) to r_max, with
/// absolute and relative local tolerance `tol`. Sign changes of v are refined to
/// width tol * m. Throws IntegrationError on step-size underflow.
RadialSolution integrate_v(const ModeParams& params, double r_max, double tol = 1e-10);

/// v_0(r) = sqrt(2r/m) (1 - (2r-m)/(2r+m) log sqrt(2r/m)); the k = 0, lambda = 0 shot.
double closed_form_v0(const SchwarzschildModel& model, double r);
double closed_form_v0_prime(const SchwarzschildModel& model, double r);

/// Barrier for k != 0: psi' + psi^2 = (k^2 - 3/4)/r^2 with psi(m/2) = 1/m.
double barrier_psi_k(const SchwarzschildModel& model, int k, double r);

/// log of exp(int_{m/2}^r psi_k), the lower envelope v >= v(m/2) exp(int psi_k) implied
/// by gamma >= psi_k.
double barrier_log_envelope(const SchwarzschildModel& model, int k, double r);

/// Smallest value over the nodes of log|v| - barrier_log_envelope (negative means the
/// shot dropped below the barrier envelope). Requires k != 0.
double barrier_margin(const RadialSolution& solution);

/// psi_c, the one-parameter family of solutions of the k = 0, lambda = 0 Riccati equation.
/// Throws SingularityError (carrying R_c) near the pole.
double psi_c(const SchwarzschildModel& model, double c, double r);

/// Pole of psi_c: the root R_c > m/2 of (2R - m)(4 log R + 8 + c) = 8(2R + m).
/// Residual is measured on the normalized relation and is <= tol.
double singularity_R_c(const SchwarzschildModel& model, double c, double tol = 1e-13);

/// c for which psi_c(m/2) = 1/m: -8 - 4 log(m/2).
double cbar(const SchwarzschildModel& model);

struct RiccatiProfile {
    double c;
    std::optional<double> singularity;
};

RiccatiProfile riccati_profile(const SchwarzschildModel& model, double c, double tol = 1e-13);

}  // namespace schw
