#include "schw/numerics.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>

namespace schw::num {

namespace {

GaussLegendre build_rule(int n) {
    GaussLegendre rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Refresh the derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: need at least one point");
    static std::mutex mutex;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

double integrate_panels(const std::function<double(double)>& f, std::span<const double> breaks,
                        int points_per_panel) {
    const auto& rule = gauss_legendre(points_per_panel);
    double total = 0.0;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double a = breaks[p];
        const double b = breaks[p + 1];
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double panel = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            panel += rule.weights[i] * f(mid + half * rule.nodes[i]);
        total += half * panel;
    }
    return total;
}

std::vector<double> panel_breaks(double a, double b, int panels, double grading) {
    std::vector<double> br(static_cast<std::size_t>(panels) + 1);
    if (grading <= 0.0) {
        for (int i = 0; i <= panels; ++i) br[static_cast<std::size_t>(i)] = a + (b - a) * i / panels;
    } else {
        const double l0 = std::log(grading);
        const double l1 = std::log(b - a + grading);
        for (int i = 0; i <= panels; ++i)
            br[static_cast<std::size_t>(i)] = a + std::exp(l0 + (l1 - l0) * i / panels) - grading;
    }
    br.front() = a;
    br.back() = b;
    return br;
}

AdaptiveQuad integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                double rel_tol, int points_per_panel, double grading,
                                int max_panels, double abs_floor) {
    if (b == a) return {0.0, 0.0, 0};
    int panels = 1;
    auto br = panel_breaks(a, b, panels, grading);
    double prev = integrate_panels(f, br, points_per_panel);
    while (panels < max_panels) {
        panels *= 2;
        br = panel_breaks(a, b, panels, grading);
        const double cur = integrate_panels(f, br, points_per_panel);
        const double err = std::abs(cur - prev);
        if (err <= rel_tol * std::max({std::abs(cur), std::abs(prev), abs_floor}))
            return {cur, err, panels};
        prev = cur;
    }
    throw AccuracyError("integrate_adaptive: panel refinement cap reached");
}

}  // namespace schw::num
