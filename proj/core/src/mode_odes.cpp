#include "schw/mode_odes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "schw/numerics.hpp"
#include "schw/ode.hpp"

namespace schw {

namespace {

constexpr double kRescaleThreshold = 1e100;

// Quintic Hermite on one step from values, first and second derivatives at both ends.
struct Hermite {
    double r0, h;
    double y0, y1, d0, d1, s0, s1;

    double value(double r) const {
        const double t = (r - r0) / h;
        const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
        return (1 - 10 * t3 + 15 * t4 - 6 * t5) * y0 + (10 * t3 - 15 * t4 + 6 * t5) * y1 +
               h * ((t - 6 * t3 + 8 * t4 - 3 * t5) * d0 + (-4 * t3 + 7 * t4 - 3 * t5) * d1) +
               0.5 * h * h * ((t2 - 3 * t3 + 3 * t4 - t5) * s0 + (t3 - 2 * t4 + t5) * s1);
    }
};

double v_coefficient_prime(const ModeParams& p, double r) {
    const double m = p.model.mass();
    const double q = 1.0 + m / (2.0 * r);
    const double kk = static_cast<double>(p.k) * p.k;
    const double r2 = r * r;
    return -2.0 * (0.25 - kk) / (r2 * r) - 3.0 * m / (r2 * r2 * q * q) +
           m * m / (r2 * r2 * r * q * q * q) - 2.0 * p.lambda * m * q * q * q / r2;
}

// Interpolants of v and v' on the step [a, b], expressed in the scale of node a.
// Higher derivatives come from the equation: v'' = -Q v, v''' = -Q' v - Q v'.
std::pair<Hermite, Hermite> step_interpolants(const ModeParams& p, const RadialNode& a,
                                              const RadialNode& b) {
    const double conv = std::exp(b.log_scale - a.log_scale);
    const double vb = b.v * conv;
    const double db = b.v_prime * conv;
    const double h = b.r - a.r;
    const double qa = v_coefficient(p, a.r), qb = v_coefficient(p, b.r);
    const double sa = -qa * a.v, sb = -qb * vb;
    const double ta = -v_coefficient_prime(p, a.r) * a.v - qa * a.v_prime;
    const double tb = -v_coefficient_prime(p, b.r) * vb - qb * db;
    Hermite v{a.r, h, a.v, vb, a.v_prime, db, sa, sb};
    Hermite dv{a.r, h, a.v_prime, db, sa, sb, ta, tb};
    return {v, dv};
}

double refine_zero(const Hermite& v, const Hermite& dv, double lo, double hi, double width) {
    double flo = v.value(lo);
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = v.value(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double r = 0.5 * (lo + hi);
    const double d = dv.value(r);
    if (d != 0.0) {
        const double polished = r - v.value(r) / d;
        if (polished >= lo && polished <= hi) r = polished;
    }
    return r;
}

}  // namespace

ModeParams::ModeParams(const SchwarzschildModel& m, int k_, double lambda_, double outer_radius)
    : model(m), k(k_), lambda(lambda_), R(outer_radius) {
    model.require_horizon("ModeParams");
    if (!(R > model.horizon_isotropic()) || !std::isfinite(R))
        throw DomainError("ModeParams: outer radius must exceed m/2");
    if (!std::isfinite(lambda)) throw DomainError("ModeParams: lambda must be finite");
}

double v_coefficient(const ModeParams& p, double r) {
    const double m = p.model.mass();
    const double q = 1.0 + m / (2.0 * r);
    const double q2 = q * q;
    const double kk = static_cast<double>(p.k) * p.k;
    return (0.25 - kk) / (r * r) + m / (r * r * r * q2) + p.lambda * q2 * q2;
}

RadialNode RadialSolution::evaluate(double r) const {
    if (r < nodes.front().r || r > nodes.back().r)
        throw DomainError("RadialSolution::evaluate: r outside the integrated range");
    auto it = std::lower_bound(nodes.begin(), nodes.end(), r,
                               [](const RadialNode& n, double x) { return n.r < x; });
    if (it == nodes.begin()) return nodes.front();
    if (it->r == r) return *it;
    const RadialNode& a = *(it - 1);
    const auto [v, dv] = step_interpolants(params, a, *it);
    return {r, v.value(r), dv.value(r), a.log_scale};
}

double RadialSolution::sup_abs_v() const {
    double s = 0.0;
    for (const auto& n : nodes) s = std::max(s, std::abs(n.v) * std::exp(n.log_scale));
    return s;
}

bool RadialSolution::renormalized() const {
    return std::any_of(nodes.begin(), nodes.end(),
                       [](const RadialNode& n) { return n.log_scale != 0.0; });
}

RadialSolution integrate_v(const ModeParams& params, double r_max, double tol) {
    const double m = params.model.mass();
    const double r0 = 0.5 * m;
    if (!(r_max > r0)) throw DomainError("integrate_v: r_max must exceed m/2");
    if (!(tol > 0.0)) throw DomainError("integrate_v: tol must be positive");

    RadialSolution sol{params, {}, {}, tol};
    auto rhs = [&](double r, const ode::State<2>& y) -> ode::State<2> {
        return {y[1], -v_coefficient(params, r) * y[0]};
    };

    double r = r0;
    ode::State<2> y{1.0, 1.0 / m};
    double log_scale = 0.0;
    sol.nodes.push_back({r, y[0], y[1], log_scale});

    double h = std::min(1e-3 * m, r_max - r);
    constexpr std::size_t max_steps = 50'000'000;
    while (r < r_max) {
        if (sol.nodes.size() > max_steps)
            throw IntegrationError("integrate_v: step budget exhausted", r);
        bool last = false;
        if (r + h >= r_max || r_max - (r + h) < 1e-12 * r_max) {
            h = r_max - r;
            last = true;
        }
        const auto step = ode::dopri5_step<2>(rhs, r, y, h, tol, tol);
        if (!std::isfinite(step.error_norm))
            throw IntegrationError("integrate_v: non-finite state", r);
        if (step.error_norm > 1.0) {
            h = ode::next_step(h, step.error_norm);
            if (h < 1e-13 * std::max(r, m))
                throw IntegrationError("integrate_v: step size underflow", r);
            continue;
        }
        r = last ? r_max : r + h;
        y = step.y;
        const double mag = std::max(std::abs(y[0]), m * std::abs(y[1]));
        if (mag > kRescaleThreshold) {
            y[0] /= mag;
            y[1] /= mag;
            log_scale += std::log(mag);
        }
        const RadialNode& prev = sol.nodes.back();
        RadialNode node{r, y[0], y[1], log_scale};
        if (prev.v != 0.0 && (node.v == 0.0 || std::signbit(node.v) != std::signbit(prev.v))) {
            if (node.v == 0.0) {
                sol.zero_crossings.push_back(node.r);
            } else {
                const auto [vi, dvi] = step_interpolants(params, prev, node);
                sol.zero_crossings.push_back(refine_zero(vi, dvi, prev.r, node.r, tol * m));
            }
        }
        sol.nodes.push_back(node);
        h = ode::next_step(h, step.error_norm);
    }
    return sol;
}

double closed_form_v0(const SchwarzschildModel& model, double r) {
    model.require_horizon("closed_form_v0");
    const double x = 2.0 * r / model.mass();
    return std::sqrt(x) * (1.0 - (x - 1.0) / (x + 1.0) * 0.5 * std::log(x));
}

double closed_form_v0_prime(const SchwarzschildModel& model, double r) {
    model.require_horizon("closed_form_v0_prime");
    const double x = 2.0 * r / model.mass();
    const double half_log = 0.5 * std::log(x);
    const double g = (x - 1.0) / (x + 1.0) * half_log;
    const double dg = 2.0 / ((x + 1.0) * (x + 1.0)) * half_log + (x - 1.0) / ((x + 1.0) * 2.0 * x);
    const double dvdx = (1.0 - g) / (2.0 * std::sqrt(x)) - std::sqrt(x) * dg;
    return dvdx * 2.0 / model.mass();
}

double barrier_psi_k(const SchwarzschildModel& model, int k, double r) {
    model.require_horizon("barrier_psi_k");
    if (k == 0) throw DomainError("barrier_psi_k: k must be nonzero");
    const double a = std::sqrt(4.0 * k * k - 2.0);
    const double x = 2.0 * r / model.mass();
    return (1.0 - a * (2.0 / (1.0 + std::pow(x, a)) - 1.0)) / (2.0 * r);
}

double barrier_log_envelope(const SchwarzschildModel& model, int k, double r) {
    model.require_horizon("barrier_log_envelope");
    if (k == 0) throw DomainError("barrier_log_envelope: k must be nonzero");
    const double a = std::sqrt(4.0 * k * k - 2.0);
    const double lx = std::log(2.0 * r / model.mass());
    // int psi = (1-a)/2 log x + log((1 + x^a)/2), with log(1 + x^a) = a log x + log1p(x^-a).
    const double log1p_pow = lx > 0.0 ? a * lx + std::log1p(std::exp(-a * lx))
                                      : std::log1p(std::exp(a * lx));
    return 0.5 * (1.0 - a) * lx + log1p_pow - std::log(2.0);
}

double barrier_margin(const RadialSolution& solution) {
    const int k = solution.params.k;
    if (k == 0) throw DomainError("barrier_margin: defined for k != 0 only");
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& n : solution.nodes) {
        if (!(n.v > 0.0)) return -std::numeric_limits<double>::infinity();
        const double lv = std::log(n.v) + n.log_scale;
        margin = std::min(margin, lv - barrier_log_envelope(solution.params.model, k, n.r));
    }
    return margin;
}

double psi_c(const SchwarzschildModel& model, double c, double r) {
    model.require_horizon("psi_c");
    if (!(r >= model.horizon_isotropic())) throw DomainError("psi_c: r inside the horizon");
    const double m = model.mass();
    const double L = 4.0 * std::log(r) + c + 8.0;
    const double num = 4.0 * r * m * L + 16.0 * r * r - 4.0 * m * m;
    const double t1 = r * (4.0 * r * r - m * m) * L;
    const double t2 = 8.0 * r * (2.0 * r + m) * (2.0 * r + m);
    const double den = t1 - t2;
    if (std::abs(den) < 1e-9 * (std::abs(t1) + std::abs(t2)))
        throw SingularityError("psi_c: evaluation at the pole R_c", singularity_R_c(model, c));
    return 1.0 / (2.0 * r) + num / den;
}

double singularity_R_c(const SchwarzschildModel& model, double c, double tol) {
    model.require_horizon("singularity_R_c");
    if (!std::isfinite(c)) throw DomainError("singularity_R_c: c must be finite");
    if (!(tol > 0.0)) throw DomainError("singularity_R_c: tol must be positive");
    const double m = model.mass();
    // (2R - m)(4 log R + 8 + c) / (8(2R + m)) - 1, which is -1 at R = m/2.
    auto g = [&](double R) {
        return (2.0 * R - m) * (4.0 * std::log(R) + 8.0 + c) / (8.0 * (2.0 * R + m)) - 1.0;
    };
    auto dg = [&](double R) {
        const double L = 4.0 * std::log(R) + 8.0 + c;
        const double den = 8.0 * (2.0 * R + m);
        return (2.0 * L + 4.0 * (2.0 * R - m) / R) / den - (2.0 * R - m) * L * 16.0 / (den * den);
    };
    const double lo = 0.5 * m;
    double hi = m;
    while (!(g(hi) > 0.0)) {
        hi *= 2.0;
        if (hi > 1e300) throw SearchError("singularity_R_c: no singularity found for c = " +
                                          std::to_string(c));
    }
    const auto root = num::newton_bisect(g, dg, lo, hi, 0.0, tol, 400);
    return root.x;
}

double cbar(const SchwarzschildModel& model) {
    model.require_horizon("cbar");
    return -8.0 - 4.0 * std::log(0.5 * model.mass());
}

RiccatiProfile riccati_profile(const SchwarzschildModel& model, double c, double tol) {
    try {
        return {c, singularity_R_c(model, c, tol)};
    } catch (const SearchError&) {
        return {c, std::nullopt};
    }
}

}  // namespace schw
