#include "schw/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace schw {

namespace {

struct Reduced {
    std::vector<double> d;  // diagonal of M^-1/2 K M^-1/2
    std::vector<double> e;  // off-diagonal
};

Reduced reduce(const DiscreteModeProblem& p) {
    Reduced out;
    const auto n = static_cast<std::size_t>(p.n);
    out.d.resize(n);
    out.e.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) out.d[i] = p.diagonal[i] / p.mass_weights[i];
    for (std::size_t i = 0; i + 1 < n; ++i)
        out.e[i] = p.off_diagonal[i] / std::sqrt(p.mass_weights[i] * p.mass_weights[i + 1]);
    return out;
}

int sturm_count(const Reduced& t, double x) {
    int negatives = 0;
    double q = t.d[0] - x;
    const double tiny = std::numeric_limits<double>::min();
    for (std::size_t i = 0;; ++i) {
        if (q == 0.0) q = -tiny;
        if (q < 0.0) ++negatives;
        if (i + 1 == t.d.size()) break;
        q = (t.d[i + 1] - x) - t.e[i] * t.e[i] / q;
    }
    return negatives;
}

}  // namespace

std::vector<double> DiscreteModeProblem::dense_stiffness() const {
    const auto nn = static_cast<std::size_t>(n);
    std::vector<double> a(nn * nn, 0.0);
    for (std::size_t i = 0; i < nn; ++i) {
        a[i * nn + i] = diagonal[i];
        if (i + 1 < nn) {
            a[i * nn + i + 1] = off_diagonal[i];
            a[(i + 1) * nn + i] = off_diagonal[i];
        }
    }
    return a;
}

DiscreteModeProblem assemble(const SchwarzschildModel& model, int k, double R, int n) {
    const double m = model.mass();
    const double r0 = 0.5 * m;
    if (n < 16) throw DomainError("assemble: grid size must be >= 16");
    if (!(R > r0)) throw DomainError("assemble: R must exceed m/2");
    if (model.flat() && k != 0)
        throw DomainError("assemble: the flat disc supports k = 0 only");

    DiscreteModeProblem p{model, k, R, n, {}, {}, {}, {}};
    const double h = (R - r0) / n;
    const auto nn = static_cast<std::size_t>(n);
    p.grid.resize(nn + 1);
    for (std::size_t i = 0; i <= nn; ++i) p.grid[i] = r0 + h * static_cast<double>(i);
    p.grid[nn] = R;

    const double kk = static_cast<double>(k) * k;
    auto potential = [&](double r) {
        if (model.flat()) return 0.0;
        const double q = 1.0 + m / (2.0 * r);
        return m / (r * r * r * q * q);
    };
    auto weight = [&](double r) { return model.flat() ? 1.0 : conformal_factor(model, r); };

    p.diagonal.resize(nn);
    p.off_diagonal.resize(nn - 1);
    p.mass_weights.resize(nn);
    for (std::size_t i = 0; i < nn; ++i) {
        const double r = p.grid[i];
        const double flux_right = r + 0.5 * h;
        if (i == 0) {
            // Zero flux through r0: half cell [r0, r0 + h/2], sampled at its midpoint.
            const double rq = r0 + 0.25 * h;
            p.diagonal[i] = flux_right / h + 0.5 * h * (kk / rq - rq * potential(rq));
            p.mass_weights[i] = 0.5 * h * rq * weight(rq);
        } else {
            const double flux_left = r - 0.5 * h;
            p.diagonal[i] = (flux_left + flux_right) / h + h * (kk / r - r * potential(r));
            p.mass_weights[i] = h * r * weight(r);
        }
        if (i + 1 < nn) p.off_diagonal[i] = -flux_right / h;
    }
    return p;
}

int count_below(const DiscreteModeProblem& problem, double x) {
    return sturm_count(reduce(problem), x);
}

Spectrum lowest_eigenvalues(const DiscreteModeProblem& problem, int how_many) {
    if (how_many < 1 || how_many >= problem.n)
        throw DomainError("lowest_eigenvalues: need 1 <= how_many < n");
    const Reduced t = reduce(problem);

    // Gershgorin enclosure.
    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (std::size_t i = 0; i < t.d.size(); ++i) {
        double rad = 0.0;
        if (i > 0) rad += std::abs(t.e[i - 1]);
        if (i < t.e.size()) rad += std::abs(t.e[i]);
        lo = std::min(lo, t.d[i] - rad);
        hi = std::max(hi, t.d[i] + rad);
    }

    Spectrum spec;
    spec.method = SpectrumMethod::finite_difference;
    spec.R = problem.R;
    spec.tolerances.grid_size = problem.n;
    spec.tolerances.eigen_tol = 4.0 * std::numeric_limits<double>::epsilon();
    double floor = lo;
    for (int j = 0; j < how_many; ++j) {
        // Smallest x with count_below(x) > j.
        double a = floor;
        double b = hi;
        for (int it = 0; it < 400; ++it) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            if (b - a <= spec.tolerances.eigen_tol * std::max(std::abs(a), std::abs(b))) break;
            if (sturm_count(t, mid) > j)
                b = mid;
            else
                a = mid;
        }
        spec.entries.push_back({problem.k, j + 1, 0.5 * (a + b)});
        floor = a;
    }
    return spec;
}

double richardson_eigenvalue(const SchwarzschildModel& model, int k, double R, int n, int index) {
    const double coarse = lowest_eigenvalues(assemble(model, k, R, n), index)
                              .entries[static_cast<std::size_t>(index - 1)]
                              .lambda;
    const double fine = lowest_eigenvalues(assemble(model, k, R, 2 * n), index)
                            .entries[static_cast<std::size_t>(index - 1)]
                            .lambda;
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace schw
