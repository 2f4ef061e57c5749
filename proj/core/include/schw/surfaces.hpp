#pragma once

// Parametrized surfaces in the Schwarzschild manifold (isotropic Cartesian coordinates) and
// the quantities entering the monotonicity formula for free-boundary minimal surfaces:
// the f-weighted area mu, boundary length, density at infinity and the boundary-length
// bound |dSigma| <= 4 pi m Theta.
//
// Charts are evaluated concurrently by the quadrature routines only if the caller runs them
// concurrently; user-supplied charts must tolerate that.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "schw/geometry.hpp"

namespace schw {

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);

/// Proper rotation of R^3, row-major.
class Rotation {
public:
    Rotation();  // identity
    explicit Rotation(const std::array<double, 9>& rows);

    /// Uniformly distributed rotation; deterministic in `seed` on every platform.
    static Rotation random(std::uint64_t seed);

    Vec3 apply(const Vec3& v) const;
    const std::array<double, 9>& rows() const { return rows_; }

private:
    std::array<double, 9> rows_;
};

/// Arc-length parametrized curve on the unit sphere, periodic with period `length`.
struct SphereCurve {
    std::function<Vec3(double)> alpha;
    std::function<Vec3(double)> d1;
    std::function<Vec3(double)> d2;
    double length = 0.0;
    bool great_circle = false;  ///< known to be a great circle (built-ins only)

    static SphereCurve great_circle_curve(const Rotation& rotation = Rotation());
    /// Circle of colatitude theta0 about the rotated x3 axis; length 2 pi sin(theta0).
    static SphereCurve latitude_circle(double theta0, const Rotation& rotation = Rotation());
    /// Derivatives by fourth-order central differences.
    static SphereCurve from_function(std::function<Vec3(double)> alpha, double length);
};

enum class SurfaceKind { cone_over_curve, plane_through_origin, general };

struct ParamSurface {
    std::function<Vec3(double, double)> chart;
    /// Optional analytic (d/dt, d/ds); finite differences are used when empty.
    std::function<std::array<Vec3, 2>(double, double)> tangents;
    double t0 = 0.0;
    double t1 = 0.0;
    double s_period = 0.0;
    bool free_boundary = false;
    SurfaceKind kind = SurfaceKind::general;
    std::optional<SphereCurve> curve;  ///< set for cones

    std::array<Vec3, 2> tangent_vectors(double t, double s) const;
};

/// Cone t * alpha(s), t in [m/2, t_max]. Free boundary by construction.
ParamSurface make_cone(const SchwarzschildModel& model, const SphereCurve& curve, double t_max);

/// Plane through the origin: the cone over a (rotated) great circle.
ParamSurface make_plane(const SchwarzschildModel& model, double t_max,
                        const Rotation& rotation = Rotation());

/// General chart on [t0, t1] x [0, period). When `free_boundary` is set, the t = t0 edge is
/// checked to lie on the horizon (relative 1e-10); throws GeometryError otherwise.
ParamSurface make_surface(const SchwarzschildModel& model,
                          std::function<Vec3(double, double)> chart, double t0, double t1,
                          double period, bool free_boundary);

/// H(t alpha(s)) = delta(alpha ^ alpha'', alpha') / (t e^{phi(t)}), e^{phi} = (1 + m/2t)^2.
double cone_mean_curvature(const SchwarzschildModel& model, const SphereCurve& curve, double t,
                           double s);

/// Membership in B_a = {horizon distance <= a}. The returned predicate throws DomainError for
/// points inside the horizon.
std::function<bool(const Vec3&)> ball_filter(const SchwarzschildModel& model, HorizonDistance a);

struct QuadSpec {
    double rel_tol = 1e-8;
    int points = 32;
    int max_panels = 4096;
};

/// Isotropic radius of the sphere at horizon distance rho.
double level_radius(const SchwarzschildModel& model, HorizonDistance rho);

/// mu(Sigma cap B_rho) = int f dA_g.
double mu_integral(const SchwarzschildModel& model, const ParamSurface& surface,
                   HorizonDistance rho, const QuadSpec& quad = {});

/// area_g(Sigma cap B_rho).
double area_integral(const SchwarzschildModel& model, const ParamSurface& surface,
                     HorizonDistance rho, const QuadSpec& quad = {});

/// area of the plane through the origin inside B_rho: 2 pi int_0^rho h.
double reference_plane_area(const SchwarzschildModel& model, HorizonDistance rho,
                            const QuadSpec& quad = {});

/// |d_r^perp|^2_g in [0, 1] at chart(t, s). Throws GeometryError on a degenerate tangent plane.
double radial_normal_component(const SchwarzschildModel& model, const ParamSurface& surface,
                               double t, double s);

/// int over (B_rho \ B_sigma) cap Sigma of (f / h^2) |d_r^perp|^2_g. Identically 0 for cones.
double defect_integral(const SchwarzschildModel& model, const ParamSurface& surface,
                       HorizonDistance sigma, HorizonDistance rho, const QuadSpec& quad = {});

/// g-length of the t = t0 edge. Throws PreconditionError unless free_boundary.
/// 0 on the flat model (the horizon degenerates to a point).
double boundary_length(const SchwarzschildModel& model, const ParamSurface& surface,
                       const QuadSpec& quad = {});

struct MonotonicityReport {
    std::vector<double> rhos;
    std::vector<double> h_values;
    std::vector<double> mu_values;
    std::vector<double> ratios;  ///< mu / h(rho)^2
    double boundary_length = 0.0;
    bool monotone = false;
    double max_backstep = 0.0;
    /// LHS - RHS of the monotonicity identity between consecutive grid points
    /// (first entry 0 by convention).
    std::vector<double> pair_residuals;
    /// LHS - RHS with sigma = 0 at every grid point; empty on the flat model.
    std::vector<double> origin_residuals;
};

/// The caller asserts that the surface is minimal with free boundary.
MonotonicityReport monotonicity_report(const SchwarzschildModel& model,
                                       const ParamSurface& surface,
                                       const std::vector<double>& rho_grid,
                                       const QuadSpec& quad = {});

struct DensityEstimate {
    double theta = 0.0;            ///< extrapolated in 1/h(rho)
    double raw_tail = 0.0;         ///< ratio at rho_max
    double extrapolation_change = 0.0;
    bool finite = false;           ///< false means "no finite density detected"
    std::vector<double> rhos;
    std::vector<double> ratios;    ///< area(Sigma cap B_rho) / area(C cap B_rho)
};

DensityEstimate density_at_infinity(const SchwarzschildModel& model, const ParamSurface& surface,
                                    double rho_max, const QuadSpec& quad = {});

struct BoundaryBoundReport {
    double theta = 0.0;              ///< lhs: density at infinity
    double lhs = 0.0;                ///< Theta
    double rhs = 0.0;                ///< |dSigma| / (4 pi m)
    double equality_defect = 0.0;    ///< lhs - rhs
    double defect_integral = 0.0;    ///< (1/pi) int_{Sigma cap B_rho_max} (f/h^2)|d_r^perp|^2
    double tail_estimate = 0.0;      ///< (1/pi) of the same integral beyond rho_max
    double boundary_length = 0.0;
    bool holds = false;              ///< Theta >= |dSigma|/(4 pi m) - tolerance
};

BoundaryBoundReport boundary_bound_check(const SchwarzschildModel& model,
                                         const ParamSurface& surface, double rho_max,
                                         const QuadSpec& quad = {});

}  // namespace schw
