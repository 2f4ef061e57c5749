#include "schw/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "schw/numerics.hpp"

namespace schw {

namespace {

constexpr double kPi = std::numbers::pi;

double uniform01(std::mt19937_64& gen) {
    // 53 random mantissa bits; std::uniform_real_distribution is not specified bit-exactly.
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

Vec3 scale(const Vec3& a, double c) { return {a[0] * c, a[1] * c, a[2] * c}; }

// Fourth-order central difference of a vector-valued function.
template <class F>
Vec3 central_diff(const F& f, double x, double h) {
    const Vec3 a = f(x + 2 * h), b = f(x + h), c = f(x - h), d = f(x - 2 * h);
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[i] = (-a[i] + 8 * b[i] - 8 * c[i] + d[i]) / (12 * h);
    return out;
}

bool is_cone(const ParamSurface& s) { return s.curve.has_value(); }

double excess(const SchwarzschildModel& model, double rho) {
    return detail::excess_from_distance(model.mass(), rho, 1e-14);
}

// u = t - m/2 at horizon distance rho.
double level_offset(const SchwarzschildModel& model, double rho) {
    if (model.flat()) return rho;
    const double d = excess(model, rho);
    return 0.5 * (d + std::sqrt((2.0 * model.mass() + d) * d));
}

// dA_g density with respect to dt ds for a cone, divided by |alpha'| = 1:
// (1 + m/2t)^4 t, and the f-weighted variant (t - m/2)(t + m/2)^3 / t^3.
double cone_area_density(double m, double t) {
    const double q = t + 0.5 * m;
    const double q2 = q * q;
    return q2 * q2 / (t * t * t);
}

double cone_mu_density(double m, double u) {
    const double t = 0.5 * m + u;
    const double q = t + 0.5 * m;
    return u * q * q * q / (t * t * t);
}

double grading_for(const SchwarzschildModel& model) { return model.flat() ? 0.0 : model.mass(); }

// Upper t-limit of Sigma cap B_rho on the s-slice of a general chart.
double slice_level(const SchwarzschildModel& model, const ParamSurface& surf, double s,
                   double rho) {
    auto dist = [&](double t) {
        const double r = std::max(norm(surf.chart(t, s)), model.horizon_isotropic());
        return distance_from_isotropic(model, IsotropicRadius(model, r)).value() - rho;
    };
    if (dist(surf.t1) <= 0.0) return surf.t1;
    if (dist(surf.t0) > 0.0) return surf.t0;
    return num::bisect(dist, surf.t0, surf.t1, 1e-14 * (surf.t1 - surf.t0), 0.0).x;
}

// Tensor-product Gauss-Legendre over {(t, s): lower(s) <= t <= upper(s)}, doubling the
// panel counts until the estimate settles to rel_tol.
template <class Integrand, class Lower, class Upper>
double integrate_region(const ParamSurface& surf, const Integrand& g, const Lower& lower,
                        const Upper& upper, const QuadSpec& quad) {
    const auto& rule = num::gauss_legendre(quad.points);
    auto estimate = [&](int panels) {
        double total = 0.0;
        const double hs = surf.s_period / panels;
        for (int ps = 0; ps < panels; ++ps) {
            for (std::size_t qs = 0; qs < rule.nodes.size(); ++qs) {
                const double s = hs * (ps + 0.5 * (rule.nodes[qs] + 1.0));
                const double a = lower(s);
                const double b = upper(s);
                if (!(b > a)) continue;
                const double ht = (b - a) / panels;
                double inner = 0.0;
                for (int pt = 0; pt < panels; ++pt)
                    for (std::size_t qt = 0; qt < rule.nodes.size(); ++qt) {
                        const double t = a + ht * (pt + 0.5 * (rule.nodes[qt] + 1.0));
                        inner += 0.5 * ht * rule.weights[qt] * g(t, s);
                    }
                total += 0.5 * hs * rule.weights[qs] * inner;
            }
        }
        return total;
    };
    int panels = 1;
    double prev = estimate(panels);
    while (panels < quad.max_panels) {
        panels *= 2;
        const double cur = estimate(panels);
        if (std::abs(cur - prev) <= quad.rel_tol * std::max(std::abs(cur), std::abs(prev)) ||
            (cur == 0.0 && prev == 0.0))
            return cur;
        prev = cur;
    }
    throw AccuracyError("surface quadrature: panel refinement cap reached");
}

double area_element(const SchwarzschildModel& model, const ParamSurface& surf, double t,
                    double s, double& radius) {
    const Vec3 x = surf.chart(t, s);
    radius = std::max(norm(x), model.horizon_isotropic());
    const auto [xt, xs] = surf.tangent_vectors(t, s);
    const double conf = model.flat() ? 1.0 : conformal_factor(model, radius);
    return conf * norm(cross(xt, xs));
}

}  // namespace

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Rotation::Rotation() : rows_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}

Rotation::Rotation(const std::array<double, 9>& rows) : rows_(rows) {}

Rotation Rotation::random(std::uint64_t seed) {
    // Shoemake's uniform unit quaternion.
    std::mt19937_64 gen(seed);
    const double u1 = uniform01(gen), u2 = uniform01(gen), u3 = uniform01(gen);
    const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    const double w = a * std::sin(2 * kPi * u2), x = a * std::cos(2 * kPi * u2);
    const double y = b * std::sin(2 * kPi * u3), z = b * std::cos(2 * kPi * u3);
    return Rotation({1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w),
                     2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
                     2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)});
}

Vec3 Rotation::apply(const Vec3& v) const {
    const auto& r = rows_;
    return {r[0] * v[0] + r[1] * v[1] + r[2] * v[2], r[3] * v[0] + r[4] * v[1] + r[5] * v[2],
            r[6] * v[0] + r[7] * v[1] + r[8] * v[2]};
}

SphereCurve SphereCurve::great_circle_curve(const Rotation& rot) {
    SphereCurve c;
    c.alpha = [rot](double s) { return rot.apply({std::cos(s), std::sin(s), 0.0}); };
    c.d1 = [rot](double s) { return rot.apply({-std::sin(s), std::cos(s), 0.0}); };
    c.d2 = [rot](double s) { return rot.apply({-std::cos(s), -std::sin(s), 0.0}); };
    c.length = 2 * kPi;
    c.great_circle = true;
    return c;
}

SphereCurve SphereCurve::latitude_circle(double theta0, const Rotation& rot) {
    if (!(theta0 > 0.0 && theta0 < kPi))
        throw DomainError("latitude_circle: colatitude must lie in (0, pi)");
    const double st = std::sin(theta0), ct = std::cos(theta0);
    SphereCurve c;
    c.alpha = [=](double s) {
        const double p = s / st;
        return rot.apply({st * std::cos(p), st * std::sin(p), ct});
    };
    c.d1 = [=](double s) {
        const double p = s / st;
        return rot.apply({-std::sin(p), std::cos(p), 0.0});
    };
    c.d2 = [=](double s) {
        const double p = s / st;
        return rot.apply({-std::cos(p) / st, -std::sin(p) / st, 0.0});
    };
    c.length = 2 * kPi * st;
    c.great_circle = std::abs(theta0 - 0.5 * kPi) == 0.0;
    return c;
}

SphereCurve SphereCurve::from_function(std::function<Vec3(double)> alpha, double length) {
    if (!(length > 0.0)) throw DomainError("SphereCurve::from_function: length must be > 0");
    SphereCurve c;
    const double h1 = 1e-3 * length;
    c.alpha = alpha;
    c.d1 = [alpha, h1](double s) { return central_diff(alpha, s, h1); };
    c.d2 = [alpha, h1](double s) {
        const Vec3 a = alpha(s + 2 * h1), b = alpha(s + h1), m = alpha(s), d = alpha(s - h1),
                   e = alpha(s - 2 * h1);
        Vec3 out;
        for (int i = 0; i < 3; ++i)
            out[i] = (-a[i] + 16 * b[i] - 30 * m[i] + 16 * d[i] - e[i]) / (12 * h1 * h1);
        return out;
    };
    c.length = length;
    return c;
}

std::array<Vec3, 2> ParamSurface::tangent_vectors(double t, double s) const {
    if (tangents) return tangents(t, s);
    const double ht = 1e-5 * (t1 - t0);
    const double hs = 1e-5 * s_period;
    const Vec3 xt = central_diff([&](double x) { return chart(x, s); }, t, ht);
    const Vec3 xs = central_diff([&](double x) { return chart(t, x); }, s, hs);
    return {xt, xs};
}

ParamSurface make_cone(const SchwarzschildModel& model, const SphereCurve& curve, double t_max) {
    const double t0 = model.horizon_isotropic();
    if (!(t_max > t0)) throw DomainError("make_cone: t_max must exceed m/2");
    ParamSurface surf;
    surf.chart = [alpha = curve.alpha](double t, double s) { return scale(alpha(s), t); };
    surf.tangents = [alpha = curve.alpha, d1 = curve.d1](double t, double s) {
        return std::array<Vec3, 2>{alpha(s), scale(d1(s), t)};
    };
    surf.t0 = t0;
    surf.t1 = t_max;
    surf.s_period = curve.length;
    surf.free_boundary = true;
    surf.kind = SurfaceKind::cone_over_curve;
    surf.curve = curve;
    return surf;
}

ParamSurface make_plane(const SchwarzschildModel& model, double t_max, const Rotation& rotation) {
    ParamSurface surf = make_cone(model, SphereCurve::great_circle_curve(rotation), t_max);
    surf.kind = SurfaceKind::plane_through_origin;
    return surf;
}

ParamSurface make_surface(const SchwarzschildModel& model,
                          std::function<Vec3(double, double)> chart, double t0, double t1,
                          double period, bool free_boundary) {
    if (!(t1 > t0) || !(period > 0.0))
        throw DomainError("make_surface: empty parameter domain");
    ParamSurface surf;
    surf.chart = std::move(chart);
    surf.t0 = t0;
    surf.t1 = t1;
    surf.s_period = period;
    surf.free_boundary = free_boundary;
    surf.kind = SurfaceKind::general;
    const double horizon = model.horizon_isotropic();
    for (int i = 0; i < 64; ++i) {
        const double s = period * i / 64.0;
        const double r0 = norm(surf.chart(t0, s));
        if (r0 < horizon * (1.0 - 1e-10))
            throw GeometryError("make_surface: chart enters the horizon");
        if (free_boundary && std::abs(r0 - horizon) > 1e-10 * std::max(horizon, 1e-300))
            throw GeometryError("make_surface: free-boundary edge is not on the horizon");
    }
    return surf;
}

double cone_mean_curvature(const SchwarzschildModel& model, const SphereCurve& curve, double t,
                           double s) {
    if (!(t >= model.horizon_isotropic()) || !(t > 0.0))
        throw DomainError("cone_mean_curvature: t inside the horizon");
    const double ephi = model.flat() ? 1.0 : std::pow(1.0 + model.mass() / (2.0 * t), 2);
    return dot(cross(curve.alpha(s), curve.d2(s)), curve.d1(s)) / (t * ephi);
}

std::function<bool(const Vec3&)> ball_filter(const SchwarzschildModel& model, HorizonDistance a) {
    return [model, a](const Vec3& x) {
        const IsotropicRadius rho(model, norm(x));
        return distance_from_isotropic(model, rho).value() <= a.value();
    };
}

double level_radius(const SchwarzschildModel& model, HorizonDistance rho) {
    return model.horizon_isotropic() + level_offset(model, rho.value());
}

double mu_integral(const SchwarzschildModel& model, const ParamSurface& surf, HorizonDistance rho,
                   const QuadSpec& quad) {
    if (rho.value() == 0.0) return 0.0;
    const double m = model.mass();
    if (is_cone(surf)) {
        const double upper = std::min(level_offset(model, rho.value()), surf.t1 - surf.t0);
        auto g = [m](double u) { return cone_mu_density(m, u); };
        return surf.curve->length *
               num::integrate_adaptive(g, 0.0, upper, quad.rel_tol, quad.points,
                                       grading_for(model), quad.max_panels)
                   .value;
    }
    auto g = [&](double t, double s) {
        double r = 0.0;
        const double da = area_element(model, surf, t, s, r);
        return da * static_potential_isotropic(model, IsotropicRadius(model, r));
    };
    return integrate_region(
        surf, g, [&](double) { return surf.t0; },
        [&](double s) { return slice_level(model, surf, s, rho.value()); }, quad);
}

double area_integral(const SchwarzschildModel& model, const ParamSurface& surf,
                     HorizonDistance rho, const QuadSpec& quad) {
    if (rho.value() == 0.0) return 0.0;
    const double m = model.mass();
    if (is_cone(surf)) {
        const double upper = std::min(level_offset(model, rho.value()), surf.t1 - surf.t0);
        auto g = [m](double u) { return cone_area_density(m, 0.5 * m + u); };
        return surf.curve->length *
               num::integrate_adaptive(g, 0.0, upper, quad.rel_tol, quad.points,
                                       grading_for(model), quad.max_panels)
                   .value;
    }
    auto g = [&](double t, double s) {
        double r = 0.0;
        return area_element(model, surf, t, s, r);
    };
    return integrate_region(
        surf, g, [&](double) { return surf.t0; },
        [&](double s) { return slice_level(model, surf, s, rho.value()); }, quad);
}

double reference_plane_area(const SchwarzschildModel& model, HorizonDistance rho,
                            const QuadSpec& quad) {
    if (model.flat()) return kPi * rho.value() * rho.value();
    // h dr = 2 s^{3/2} du with s = 2m + u^2.
    const double m = model.mass();
    const double top = std::sqrt(excess(model, rho.value()));
    auto g = [m](double u) {
        const double s = 2.0 * m + u * u;
        return 2.0 * s * std::sqrt(s);
    };
    return 2.0 * kPi *
           num::integrate_adaptive(g, 0.0, top, quad.rel_tol, quad.points, 0.0, quad.max_panels)
               .value;
}

double radial_normal_component(const SchwarzschildModel& model, const ParamSurface& surf, double t,
                               double s) {
    const Vec3 x = surf.chart(t, s);
    const double r = norm(x);
    if (!(r > 0.0)) throw GeometryError("radial_normal_component: undefined at the origin");
    const auto [xt, xs] = surf.tangent_vectors(t, s);
    // g = e^{2 phi} delta and d_r = e^{-phi} x/|x|; the conformal factor cancels from the
    // g-orthogonal projection, so work with the Euclidean Gram matrix.
    const double e = dot(xt, xt), f = dot(xt, xs), g = dot(xs, xs);
    const double det = e * g - f * f;
    if (!(det > 1e-24 * e * g) || !(e > 0.0) || !(g > 0.0))
        throw GeometryError("radial_normal_component: degenerate tangent plane");
    const Vec3 dir = scale(x, 1.0 / r);
    const double p1 = dot(dir, xt), p2 = dot(dir, xs);
    const double tangential = (g * p1 * p1 - 2.0 * f * p1 * p2 + e * p2 * p2) / det;
    (void)model;
    return std::clamp(1.0 - tangential, 0.0, 1.0);
}

double defect_integral(const SchwarzschildModel& model, const ParamSurface& surf,
                       HorizonDistance sigma, HorizonDistance rho, const QuadSpec& quad) {
    if (is_cone(surf) || !(rho.value() > sigma.value())) return 0.0;
    auto g = [&](double t, double s) {
        double r = 0.0;
        const double da = area_element(model, surf, t, s, r);
        const IsotropicRadius iso(model, r);
        const double h = areal_from_isotropic(model, iso).value();
        return da * static_potential_isotropic(model, iso) / (h * h) *
               radial_normal_component(model, surf, t, s);
    };
    return integrate_region(
        surf, g, [&](double s) { return slice_level(model, surf, s, sigma.value()); },
        [&](double s) { return slice_level(model, surf, s, rho.value()); }, quad);
}

double boundary_length(const SchwarzschildModel& model, const ParamSurface& surf,
                       const QuadSpec& quad) {
    if (!surf.free_boundary)
        throw PreconditionError("boundary_length: surface has no free boundary on the horizon");
    if (model.flat()) return 0.0;
    // e^{phi} = (1 + m/2r)^2 = 4 on the horizon.
    if (is_cone(surf)) return 4.0 * surf.t0 * surf.curve->length;
    auto g = [&](double s) { return 4.0 * norm(surf.tangent_vectors(surf.t0, s)[1]); };
    return num::integrate_adaptive(g, 0.0, surf.s_period, quad.rel_tol, quad.points, 0.0,
                                   quad.max_panels)
        .value;
}

MonotonicityReport monotonicity_report(const SchwarzschildModel& model,
                                       const ParamSurface& surf,
                                       const std::vector<double>& rho_grid,
                                       const QuadSpec& quad) {
    if (rho_grid.empty()) throw DomainError("monotonicity_report: empty rho grid");
    for (std::size_t i = 1; i < rho_grid.size(); ++i)
        if (!(rho_grid[i] > rho_grid[i - 1]))
            throw DomainError("monotonicity_report: rho grid must be strictly increasing");
    if (model.flat() && !(rho_grid.front() > 0.0))
        throw DomainError("monotonicity_report: rho = 0 has h = 0 on the flat model");

    MonotonicityReport rep;
    const double m = model.mass();
    rep.boundary_length = surf.free_boundary ? boundary_length(model, surf, quad) : 0.0;
    for (double rho : rho_grid) {
        const HorizonDistance r(rho);
        const double h = areal_from_distance(model, r).value();
        const double mu = mu_integral(model, surf, r, quad);
        rep.rhos.push_back(rho);
        rep.h_values.push_back(h);
        rep.mu_values.push_back(mu);
        rep.ratios.push_back(mu / (h * h));
    }

    const double lb = rep.boundary_length;
    double peak = 0.0;
    for (double x : rep.ratios) peak = std::max(peak, std::abs(x));
    for (std::size_t i = 0; i < rep.rhos.size(); ++i) {
        const double h = rep.h_values[i];
        if (i == 0) {
            rep.pair_residuals.push_back(0.0);
        } else {
            const double hp = rep.h_values[i - 1];
            const double middle = defect_integral(model, surf, HorizonDistance(rep.rhos[i - 1]),
                                                  HorizonDistance(rep.rhos[i]), quad);
            const double rhs = rep.ratios[i - 1] + middle + m * (1.0 / (hp * hp) - 1.0 / (h * h)) * lb;
            rep.pair_residuals.push_back(rep.ratios[i] - rhs);
            rep.max_backstep = std::max(rep.max_backstep, rep.ratios[i - 1] - rep.ratios[i]);
        }
        if (!model.flat()) {
            const double middle =
                defect_integral(model, surf, HorizonDistance(0.0), HorizonDistance(rep.rhos[i]), quad);
            const double rhs = middle + m * (1.0 / (4.0 * m * m) - 1.0 / (h * h)) * lb;
            rep.origin_residuals.push_back(rep.ratios[i] - rhs);
        }
    }
    rep.monotone = rep.max_backstep <= quad.rel_tol * peak;
    return rep;
}

DensityEstimate density_at_infinity(const SchwarzschildModel& model, const ParamSurface& surf,
                                    double rho_max, const QuadSpec& quad) {
    if (!(rho_max > 0.0)) throw DomainError("density_at_infinity: rho_max must be positive");
    DensityEstimate est;
    constexpr int levels = 7;
    std::vector<double> hs;
    for (int j = levels - 1; j >= 0; --j) {
        const double rho = std::ldexp(rho_max, -j);
        const HorizonDistance r(rho);
        est.rhos.push_back(rho);
        est.ratios.push_back(area_integral(model, surf, r, quad) /
                             reference_plane_area(model, r, quad));
        hs.push_back(areal_from_distance(model, r).value());
    }
    auto extrapolate = [&](std::size_t i) {
        return (hs[i] * est.ratios[i] - hs[i - 1] * est.ratios[i - 1]) / (hs[i] - hs[i - 1]);
    };
    const std::size_t last = est.ratios.size() - 1;
    est.raw_tail = est.ratios[last];
    est.theta = extrapolate(last);
    est.extrapolation_change = std::abs(est.theta - extrapolate(last - 1));
    est.finite = std::isfinite(est.theta) &&
                 est.extrapolation_change <= 1e-3 * std::max(1.0, std::abs(est.theta));
    return est;
}

BoundaryBoundReport boundary_bound_check(const SchwarzschildModel& model,
                                         const ParamSurface& surf, double rho_max,
                                         const QuadSpec& quad) {
    model.require_horizon("boundary_bound_check");
    if (!surf.free_boundary)
        throw PreconditionError("boundary_bound_check: surface must have free boundary");
    const double m = model.mass();
    BoundaryBoundReport rep;
    const auto density = density_at_infinity(model, surf, rho_max, quad);
    rep.theta = density.theta;
    rep.lhs = density.theta;
    rep.boundary_length = boundary_length(model, surf, quad);
    rep.rhs = rep.boundary_length / (4.0 * kPi * m);
    rep.equality_defect = rep.lhs - rep.rhs;
    const HorizonDistance top(rho_max);
    rep.defect_integral = defect_integral(model, surf, HorizonDistance(0.0), top, quad) / kPi;
    // Beyond rho_max, from the monotonicity identity with sigma = rho_max, rho -> infinity.
    const double h = areal_from_distance(model, top).value();
    const double ratio = mu_integral(model, surf, top, quad) / (h * h);
    rep.tail_estimate =
        std::max(0.0, rep.theta - ratio / kPi - m * rep.boundary_length / (kPi * h * h));
    rep.holds = rep.lhs >= rep.rhs - (1e-6 + density.extrapolation_change);
    return rep;
}

}  // namespace schw
