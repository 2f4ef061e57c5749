#pragma once

// Shooting eigensolver, oscillation counting and Morse index for the plane through the
// origin, plus the maximal stability radius and the Rayleigh quotient of the second
// variation of area restricted to radial functions.

#include <map>
#include <optional>
#include <vector>

#include "schw/geometry.hpp"
#include "schw/mode_odes.hpp"
#include "schw/spectrum.hpp"

namespace schw {

struct IndexReport {
    double R = 0.0;
    std::map<int, int> per_mode_negative_counts;
    int morse_index = 0;
};

/// Zeros of the shot v(.; lambda) in (m/2, R].
int count_zeros(const SchwarzschildModel& model, int k, double lambda, double R,
                double ode_tol = 1e-10);

/// Number of negative eigenvalues of mode k on the annulus of outer radius R: interior
/// zeros of the lambda = 0 shot on (m/2, R).
int negative_count(const SchwarzschildModel& model, int k, double R, double ode_tol = 1e-10);

/// Lowest `how_many` eigenvalues of mode k. The n-th eigenvalue is bracketed by oscillation
/// count (n-1 versus n zeros on (m/2, R]) and bisected to width tol / m^2.
/// Throws SearchError when the bracket cannot be established within 60 doublings.
Spectrum eigenvalues_shooting(const SchwarzschildModel& model, int k, double R, int how_many,
                              double tol = 1e-11, double ode_tol = 1e-11);

/// Sum of negative_count over k in {0, +-1, ..., +-kmax}.
IndexReport morse_index(const SchwarzschildModel& model, double R, int kmax = 5,
                        double ode_tol = 1e-10);

/// The R > m/2 with log sqrt(2R/m) = (2R + m)/(2R - m); |residual| <= tol.
double stability_radius(const SchwarzschildModel& model, double tol = 1e-13);

/// 1/2 log(2R/m) - (2R + m)/(2R - m).
double stability_residual(const SchwarzschildModel& model, double R);

/// A radial function sampled on an increasing grid from m/2 to R. du is optional; when
/// absent it is recovered by fourth-order finite differences.
struct RadialSamples {
    std::vector<double> r;
    std::vector<double> u;
    std::optional<std::vector<double>> du;
};

/// Q(u, u) / int u^2 dA_g for a radial u(r) e^{ik theta} on the annulus:
///   [int (u'^2 + k^2 u^2/r^2 - (m/r^3)(1+m/2r)^-2 u^2) r dr] / [int u^2 (1+m/2r)^4 r dr].
/// The horizon boundary term drops out because the horizon is totally geodesic.
/// Throws PreconditionError unless u(R) = 0 (relative to max |u|) and the grid spans [m/2, R].
double rayleigh_quotient(const SchwarzschildModel& model, double R, const RadialSamples& u,
                         int k = 0);

/// Eigenfunction u = v / sqrt(r) of the shot at lambda, sampled on the integrator nodes,
/// normalized to int u^2 (1+m/2r)^4 r dr = 1 with u(m/2) > 0.
RadialSamples eigenfunction(const SchwarzschildModel& model, int k, double R, double lambda,
                            double ode_tol = 1e-11);

}  // namespace schw
