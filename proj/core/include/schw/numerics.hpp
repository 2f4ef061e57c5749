#pragma once

// Small numerical kernels shared by the geometry, spectral and surface modules:
// safeguarded root finding and composite Gauss-Legendre quadrature.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "schw/errors.hpp"

namespace schw::num {

struct RootResult {
    double x = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Root of a continuous function on [lo, hi] whose endpoint values have opposite signs.
/// Newton steps from `df` are taken while they stay inside the current bracket; otherwise the
/// bracket is bisected. Stops when |f| <= ftol or the bracket is narrower than xtol.
template <class F, class DF>
RootResult newton_bisect(F&& f, DF&& df, double lo, double hi, double xtol, double ftol,
                         int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return {lo, 0.0, 0};
    if (fhi == 0.0) return {hi, 0.0, 0};
    if (std::signbit(flo) == std::signbit(fhi) || std::isnan(flo) || std::isnan(fhi))
        throw SearchError("newton_bisect: endpoints do not bracket a root");

    double x = 0.5 * (lo + hi);
    double fx = f(x);
    int it = 0;
    for (; it < max_iter; ++it) {
        if (std::abs(fx) <= ftol) break;
        if (std::signbit(fx) == std::signbit(flo)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        if (hi - lo <= xtol) break;
        const double d = df(x);
        double next = (d != 0.0 && std::isfinite(d)) ? x - fx / d : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) break;
        x = next;
        fx = f(x);
    }
    return {x, std::abs(fx), it};
}

/// Derivative-free variant: plain bisection down to xtol (or |f| <= ftol).
template <class F>
RootResult bisect(F&& f, double lo, double hi, double xtol, double ftol, int max_iter = 400) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return {lo, 0.0, 0};
    if (fhi == 0.0) return {hi, 0.0, 0};
    if (std::signbit(flo) == std::signbit(fhi) || std::isnan(flo) || std::isnan(fhi))
        throw SearchError("bisect: endpoints do not bracket a root");
    double x = 0.5 * (lo + hi);
    double fx = f(x);
    int it = 0;
    for (; it < max_iter; ++it) {
        if (std::abs(fx) <= ftol || hi - lo <= xtol) break;
        if (std::signbit(fx) == std::signbit(flo)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        const double mid = 0.5 * (lo + hi);
        if (mid == x) break;
        x = mid;
        fx = f(x);
    }
    return {x, std::abs(fx), it};
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached rules; thread-safe (function-local statics are built once per size).
const GaussLegendre& gauss_legendre(int n);

/// Composite Gauss-Legendre over the panels delimited by consecutive `breaks`.
double integrate_panels(const std::function<double(double)>& f, std::span<const double> breaks,
                        int points_per_panel);

struct AdaptiveQuad {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
};

/// Composite Gauss-Legendre on [a, b], doubling the panel count until two successive
/// estimates agree to rel_tol (relative to the larger magnitude, floor abs_floor).
/// `grading` > 0 clusters panels geometrically towards `a` (offset grading from a).
/// Throws AccuracyError after max_panels.
AdaptiveQuad integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                double rel_tol, int points_per_panel = 32, double grading = 0.0,
                                int max_panels = 1 << 12, double abs_floor = 0.0);

/// Breakpoints of `panels` panels on [a, b]; uniform when grading <= 0, otherwise
/// uniform in log(x - a + grading).
std::vector<double> panel_breaks(double a, double b, int panels, double grading);

}  // namespace schw::num
