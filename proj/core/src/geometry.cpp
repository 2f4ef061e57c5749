#include "schw/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "schw/numerics.hpp"

namespace schw {

SchwarzschildModel::SchwarzschildModel(double mass) : mass_(mass) {
    if (!(mass >= 0.0) || !std::isfinite(mass))
        throw DomainError("SchwarzschildModel: mass must be finite and >= 0, got " +
                          std::to_string(mass));
}

void SchwarzschildModel::require_horizon(const char* op) const {
    if (!(mass_ > 0.0))
        throw DomainError(std::string(op) + ": requires a horizon (mass > 0)");
}

IsotropicRadius::IsotropicRadius(const SchwarzschildModel& model, double rho) : rho_(rho) {
    if (!(rho >= model.horizon_isotropic()) || !std::isfinite(rho))
        throw DomainError("isotropic radius " + std::to_string(rho) + " lies inside the horizon");
}

ArealRadius::ArealRadius(const SchwarzschildModel& model, double s) : s_(s) {
    if (!(s >= model.horizon_areal()) || !std::isfinite(s))
        throw DomainError("areal radius " + std::to_string(s) + " lies inside the horizon");
}

HorizonDistance::HorizonDistance(double r) : r_(r) {
    if (!(r >= 0.0) || !std::isfinite(r))
        throw DomainError("horizon distance must be finite and >= 0, got " + std::to_string(r));
}

double conformal_factor(const SchwarzschildModel& model, double rho) {
    const double q = 1.0 + model.mass() / (2.0 * rho);
    const double q2 = q * q;
    return q2 * q2;
}

double conformal_factor(const SchwarzschildModel& model, IsotropicRadius rho) {
    if (model.flat()) return 1.0;
    return conformal_factor(model, rho.value());
}

ArealRadius areal_from_isotropic(const SchwarzschildModel& model, IsotropicRadius rho) {
    if (model.flat()) return ArealRadius(model, rho.value());
    const double p = rho.value();
    const double q = 1.0 + model.mass() / (2.0 * p);
    // Pin the horizon exactly; rounding could otherwise land a hair inside.
    return ArealRadius(model, std::max(p * q * q, model.horizon_areal()));
}

IsotropicRadius isotropic_from_areal(const SchwarzschildModel& model, ArealRadius s) {
    const double m = model.mass();
    if (model.flat()) return IsotropicRadius(model, s.value());
    const double sv = s.value();
    const double rho = 0.5 * ((sv - m) + std::sqrt(sv * (sv - 2.0 * m)));
    return IsotropicRadius(model, std::max(rho, model.horizon_isotropic()));
}

namespace detail {

double distance_from_excess(double mass, double delta) {
    if (mass == 0.0) return delta;
    if (delta <= 0.0) return 0.0;
    const double s = 2.0 * mass + delta;
    const double w = std::sqrt(delta / s);
    // log((1+w)/(1-w)) = 2 atanh(w); for w near 1 write 1-w = (2m/s)/(1+w).
    const double log_term =
        w < 0.5 ? 2.0 * std::atanh(w) : 2.0 * std::log1p(w) + std::log(s / (2.0 * mass));
    return std::sqrt(s * delta) + mass * log_term;
}

double excess_from_distance(double mass, double r, double tol) {
    if (mass == 0.0 || r == 0.0) return r;
    const double hi = r + 2.0 * mass * std::max(0.0, std::log1p(r / mass));
    auto f = [&](double d) { return distance_from_excess(mass, d) - r; };
    auto df = [&](double d) { return d > 0.0 ? std::sqrt((2.0 * mass + d) / d) : 0.0; };
    return num::newton_bisect(f, df, 0.0, hi, 0.0, tol * r, 400).x;
}

}  // namespace detail

HorizonDistance distance_from_areal(const SchwarzschildModel& model, ArealRadius s) {
    if (model.flat()) return HorizonDistance(s.value());
    return HorizonDistance(
        detail::distance_from_excess(model.mass(), s.value() - model.horizon_areal()));
}

ArealRadius areal_from_distance(const SchwarzschildModel& model, HorizonDistance r, double tol) {
    if (!(tol > 0.0)) throw DomainError("areal_from_distance: tol must be positive");
    const double delta = detail::excess_from_distance(model.mass(), r.value(), tol);
    return ArealRadius(model, model.horizon_areal() + delta);
}

double static_potential(const SchwarzschildModel& model, HorizonDistance r, double tol) {
    if (model.flat()) return 1.0;
    if (!(tol > 0.0)) throw DomainError("static_potential: tol must be positive");
    const double delta = detail::excess_from_distance(model.mass(), r.value(), tol);
    return std::sqrt(delta / (model.horizon_areal() + delta));
}

HorizonDistance distance_from_isotropic(const SchwarzschildModel& model, IsotropicRadius rho) {
    if (model.flat()) return HorizonDistance(rho.value());
    const double p = rho.value();
    const double gap = p - model.horizon_isotropic();
    return HorizonDistance(detail::distance_from_excess(model.mass(), gap * gap / p));
}

double static_potential_isotropic(const SchwarzschildModel& model, IsotropicRadius rho) {
    if (model.flat()) return 1.0;
    const double half = model.horizon_isotropic();
    return (rho.value() - half) / (rho.value() + half);
}

}  // namespace schw
