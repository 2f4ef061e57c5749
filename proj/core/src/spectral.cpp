#include "schw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "schw/numerics.hpp"

namespace schw {

std::string_view to_string(SpectrumMethod method) {
    switch (method) {
        case SpectrumMethod::shooting:
            return "shooting";
        case SpectrumMethod::finite_difference:
            return "finite-difference";
    }
    return "unknown";
}

int count_zeros(const SchwarzschildModel& model, int k, double lambda, double R, double ode_tol) {
    const ModeParams params(model, k, lambda, R);
    return static_cast<int>(integrate_v(params, R, ode_tol).zero_crossings.size());
}

int negative_count(const SchwarzschildModel& model, int k, double R, double ode_tol) {
    const ModeParams params(model, k, 0.0, R);
    const auto sol = integrate_v(params, R, ode_tol);
    return static_cast<int>(std::count_if(sol.zero_crossings.begin(), sol.zero_crossings.end(),
                                          [R](double z) { return z < R; }));
}

Spectrum eigenvalues_shooting(const SchwarzschildModel& model, int k, double R, int how_many,
                              double tol, double ode_tol) {
    model.require_horizon("eigenvalues_shooting");
    if (how_many < 1) throw DomainError("eigenvalues_shooting: how_many must be >= 1");
    if (!(R > model.horizon_isotropic())) throw DomainError("eigenvalues_shooting: R <= m/2");
    if (!(tol > 0.0)) throw DomainError("eigenvalues_shooting: tol must be positive");

    const double unit = 1.0 / (model.mass() * model.mass());
    auto zeros = [&](double lambda) { return count_zeros(model, k, lambda, R, ode_tol); };

    Spectrum spec;
    spec.method = SpectrumMethod::shooting;
    spec.R = R;
    spec.tolerances.eigen_tol = tol;
    spec.tolerances.ode_tol = ode_tol;

    double lo = -10.0 * unit;
    double hi = 10.0 * unit;
    for (int n = 1; n <= how_many; ++n) {
        // lo keeps at most n-1 zeros, hi at least n.
        int doublings = 0;
        while (zeros(lo) >= n) {
            lo = lo < 0.0 ? 2.0 * lo : -10.0 * unit;
            if (++doublings > 60)
                throw SearchError("eigenvalues_shooting: lower bracket not found for n = " +
                                  std::to_string(n) + ", last lambda = " + std::to_string(lo));
        }
        doublings = 0;
        while (zeros(hi) < n) {
            hi = hi > 0.0 ? 2.0 * hi : 10.0 * unit;
            if (++doublings > 60)
                throw SearchError("eigenvalues_shooting: upper bracket not found for n = " +
                                  std::to_string(n) + ", last lambda = " + std::to_string(hi));
        }
        double a = lo;
        double b = hi;
        while (b - a > tol * unit) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            if (zeros(mid) >= n)
                b = mid;
            else
                a = mid;
        }
        const double lambda_n = 0.5 * (a + b);
        spec.entries.push_back({k, n, lambda_n});
        // a still has n-1 zeros, a valid lower end for the next search.
        lo = a;
        hi = std::max(hi, b);
    }
    return spec;
}

IndexReport morse_index(const SchwarzschildModel& model, double R, int kmax, double ode_tol) {
    if (kmax < 1) throw DomainError("morse_index: kmax must be >= 1");
    IndexReport report;
    report.R = R;
    for (int k = 0; k <= kmax; ++k) {
        // The mode equation depends on k^2 only, so -k mirrors k.
        const int count = negative_count(model, k, R, ode_tol);
        report.per_mode_negative_counts[k] = count;
        if (k != 0) report.per_mode_negative_counts[-k] = count;
    }
    for (const auto& [k, count] : report.per_mode_negative_counts) report.morse_index += count;
    return report;
}

double stability_residual(const SchwarzschildModel& model, double R) {
    const double x = 2.0 * R / model.mass();
    return 0.5 * std::log(x) - (x + 1.0) / (x - 1.0);
}

double stability_radius(const SchwarzschildModel& model, double tol) {
    model.require_horizon("stability_radius");
    if (!(tol > 0.0)) throw DomainError("stability_radius: tol must be positive");
    // Work in x = 2R/m, where the equation is free of m. R in [2m, 100m] <=> x in [4, 200].
    auto f = [](double x) { return 0.5 * std::log(x) - (x + 1.0) / (x - 1.0); };
    auto df = [](double x) { return 0.5 / x + 2.0 / ((x - 1.0) * (x - 1.0)); };
    const auto root = num::newton_bisect(f, df, 4.0, 200.0, 0.0, tol, 400);
    return 0.5 * root.x * model.mass();
}

namespace {

// Derivative at z of the Lagrange basis polynomials on the nodes x.
std::vector<double> first_derivative_weights(double z, std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l < n; ++l) {
            if (l == j) continue;
            double term = 1.0 / (x[j] - x[l]);
            for (std::size_t p = 0; p < n; ++p)
                if (p != j && p != l) term *= (z - x[p]) / (x[j] - x[p]);
            w[j] += term;
        }
    }
    return w;
}

std::vector<double> differentiate(const std::vector<double>& r, const std::vector<double>& u) {
    const std::size_t n = r.size();
    std::vector<double> du(n);
    const std::size_t width = std::min<std::size_t>(5, n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t start = i >= width / 2 ? i - width / 2 : 0;
        start = std::min(start, n - width);
        const std::span<const double> xs(r.data() + start, width);
        const auto w = first_derivative_weights(r[i], xs);
        double d = 0.0;
        for (std::size_t j = 0; j < width; ++j) d += w[j] * u[start + j];
        du[i] = d;
    }
    return du;
}

}  // namespace

double rayleigh_quotient(const SchwarzschildModel& model, double R, const RadialSamples& samples,
                         int k) {
    model.require_horizon("rayleigh_quotient");
    const auto& r = samples.r;
    const auto& u = samples.u;
    const double m = model.mass();
    if (r.size() < 2 || r.size() != u.size())
        throw PreconditionError("rayleigh_quotient: need matching r/u samples (>= 2)");
    if (samples.du && samples.du->size() != r.size())
        throw PreconditionError("rayleigh_quotient: du size mismatch");
    if (std::abs(r.front() - 0.5 * m) > 1e-10 * m || std::abs(r.back() - R) > 1e-10 * R)
        throw PreconditionError("rayleigh_quotient: grid must span [m/2, R]");
    if (!std::is_sorted(r.begin(), r.end()) ||
        std::adjacent_find(r.begin(), r.end()) != r.end())
        throw PreconditionError("rayleigh_quotient: grid must be strictly increasing");
    double umax = 0.0;
    for (double x : u) umax = std::max(umax, std::abs(x));
    if (umax == 0.0) throw PreconditionError("rayleigh_quotient: u vanishes identically");
    if (std::abs(u.back()) > 1e-6 * umax)
        throw PreconditionError("rayleigh_quotient: u does not vanish at R");

    const std::vector<double> du = samples.du ? *samples.du : differentiate(r, u);
    const auto& rule = num::gauss_legendre(16);
    const double kk = static_cast<double>(k) * k;
    double num_sum = 0.0;
    double den_sum = 0.0;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        const double a = r[i];
        const double h = r[i + 1] - a;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double t = 0.5 * (rule.nodes[q] + 1.0);
            const double x = a + h * t;
            const double t2 = t * t;
            const double t3 = t2 * t;
            const double uv = (2 * t3 - 3 * t2 + 1) * u[i] + (t3 - 2 * t2 + t) * h * du[i] +
                              (-2 * t3 + 3 * t2) * u[i + 1] + (t3 - t2) * h * du[i + 1];
            const double duv = ((6 * t2 - 6 * t) * u[i] + (-6 * t2 + 6 * t) * u[i + 1]) / h +
                               (3 * t2 - 4 * t + 1) * du[i] + (3 * t2 - 2 * t) * du[i + 1];
            const double qf = 1.0 + m / (2.0 * x);
            const double potential = m / (x * x * x * qf * qf);
            const double w = 0.5 * h * rule.weights[q];
            num_sum += w * (duv * duv + (kk / (x * x) - potential) * uv * uv) * x;
            den_sum += w * uv * uv * qf * qf * qf * qf * x;
        }
    }
    return num_sum / den_sum;
}

RadialSamples eigenfunction(const SchwarzschildModel& model, int k, double R, double lambda,
                            double ode_tol) {
    const ModeParams params(model, k, lambda, R);
    const auto sol = integrate_v(params, R, ode_tol);
    if (sol.renormalized())
        throw NumericalError("eigenfunction: shot required renormalization; R too large");
    RadialSamples out;
    std::vector<double> du;
    for (const auto& node : sol.nodes) {
        const double sr = std::sqrt(node.r);
        out.r.push_back(node.r);
        out.u.push_back(node.v / sr);
        du.push_back((node.v_prime - node.v / (2.0 * node.r)) / sr);
    }
    out.du = std::move(du);

    const auto& rule = num::gauss_legendre(16);
    double norm2 = 0.0;
    for (std::size_t i = 0; i + 1 < out.r.size(); ++i) {
        const double a = out.r[i];
        const double b = out.r[i + 1];
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double x = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[q];
            const auto node = sol.evaluate(x);
            const double uu = node.v / std::sqrt(x);
            norm2 += 0.5 * (b - a) * rule.weights[q] * uu * uu * conformal_factor(model, x) * x;
        }
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& x : out.u) x *= scale;
    for (auto& x : *out.du) x *= scale;
    return out;
}

}  // namespace schw
