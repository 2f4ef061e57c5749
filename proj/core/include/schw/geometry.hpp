#pragma once

// The exterior Riemannian Schwarzschild manifold in three radial coordinates:
//   isotropic  rho : g = (1 + m/(2 rho))^4 (flat),            horizon rho = m/2
//   areal      s   : g = ds^2/(1 - 2m/s) + s^2 g_{S^2},        horizon s = 2m
//   distance   r   : g = dr^2 + h(r)^2 g_{S^2},                horizon r = 0
// and the static potential f = h'(r) = sqrt(1 - 2m/h(r)).
//
// m = 0 is accepted as the flat degenerate model; every conversion is then the identity.

#include "schw/errors.hpp"

namespace schw {

class SchwarzschildModel {
public:
    explicit SchwarzschildModel(double mass);

    double mass() const noexcept { return mass_; }
    bool flat() const noexcept { return mass_ == 0.0; }
    double horizon_isotropic() const noexcept { return 0.5 * mass_; }
    double horizon_areal() const noexcept { return 2.0 * mass_; }

    /// Throws DomainError unless m > 0; for operations built on the horizon.
    void require_horizon(const char* op) const;

private:
    double mass_;
};

/// Euclidean |x| in the conformally flat chart.
class IsotropicRadius {
public:
    IsotropicRadius(const SchwarzschildModel& model, double rho);
    double value() const noexcept { return rho_; }

private:
    double rho_;
};

/// Radius such that the centred sphere has area 4 pi s^2.
class ArealRadius {
public:
    ArealRadius(const SchwarzschildModel& model, double s);
    double value() const noexcept { return s_; }

private:
    double s_;
};

/// Geodesic distance to the horizon.
class HorizonDistance {
public:
    explicit HorizonDistance(double r);
    double value() const noexcept { return r_; }

private:
    double r_;
};

/// (1 + m/(2 rho))^4, the factor multiplying the flat metric.
double conformal_factor(const SchwarzschildModel& model, IsotropicRadius rho);
double conformal_factor(const SchwarzschildModel& model, double rho);

ArealRadius areal_from_isotropic(const SchwarzschildModel& model, IsotropicRadius rho);
IsotropicRadius isotropic_from_areal(const SchwarzschildModel& model, ArealRadius s);

/// r(s) = s sqrt(1 - 2m/s) + m log((1 + sqrt(1 - 2m/s)) / (1 - sqrt(1 - 2m/s))).
HorizonDistance distance_from_areal(const SchwarzschildModel& model, ArealRadius s);

/// h(r), the inverse of distance_from_areal. `tol` is relative: |r(h) - r| <= tol * r.
ArealRadius areal_from_distance(const SchwarzschildModel& model, HorizonDistance r,
                                double tol = 1e-12);

/// f = h'(r) = sqrt(1 - 2m/h(r)), in [0, 1).
double static_potential(const SchwarzschildModel& model, HorizonDistance r, double tol = 1e-12);

/// Horizon distance of the isotropic sphere |x| = rho (composition of the two maps above,
/// evaluated without cancellation near the horizon).
HorizonDistance distance_from_isotropic(const SchwarzschildModel& model, IsotropicRadius rho);

/// Static potential as a function of the isotropic radius: (rho - m/2) / (rho + m/2).
double static_potential_isotropic(const SchwarzschildModel& model, IsotropicRadius rho);

namespace detail {
/// r as a function of delta = s - 2m >= 0.
double distance_from_excess(double mass, double delta);
/// delta = h(r) - 2m.
double excess_from_distance(double mass, double r, double tol);
}  // namespace detail

}  // namespace schw
