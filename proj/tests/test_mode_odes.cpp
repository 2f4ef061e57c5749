#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "schw/mode_odes.hpp"

using namespace schw;
using oracle::rel_err;

namespace {

const SchwarzschildModel kM2(2.0);
const double kRstar = oracle::kStabilityRatio * 2.0;

// Right-hand side of the k = 0, lambda = 0 Riccati equation written out independently.
double riccati_rhs(double m, double r, double g) {
    const double q = 1.0 + m / (2.0 * r);
    return -g * g - 1.0 / (4.0 * r * r) - m / (r * r * r * q * q);
}

}  // namespace

TEST_CASE("v coefficient") {
    CHECK(v_coefficient(ModeParams(kM2, 0, 0.0, 10.0), 1.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(v_coefficient(ModeParams(kM2, 1, 0.0, 10.0), 1.0) == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(v_coefficient(ModeParams(kM2, 0, -0.1, 10.0), 1.0) ==
          doctest::Approx(-0.85).epsilon(1e-15));
    CHECK_THROWS_AS(ModeParams(kM2, 0, 0.0, 1.0), DomainError);
}

TEST_CASE("v coefficient scales as 1/mu^2 (random samples)") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> mass(0.1, 10.0), x(0.5, 200.0), lam(-5.0, 5.0),
        mu(0.2, 5.0);
    for (int i = 0; i < 200; ++i) {
        const double m = mass(gen), r = x(gen) * m, l = lam(gen) / (m * m), s = mu(gen);
        const int k = static_cast<int>(gen() % 5);
        const double a = v_coefficient(ModeParams(SchwarzschildModel(m), k, l, 2 * r), r);
        const double b =
            v_coefficient(ModeParams(SchwarzschildModel(s * m), k, l / (s * s), 2 * s * r), s * r);
        CHECK(std::abs(b * s * s - a) <= 1e-12 * (std::abs(a) + 1.0 / (r * r)));
    }
}

TEST_CASE("closed-form v0") {
    CHECK(closed_form_v0(kM2, 1.0) == 1.0);
    CHECK(std::abs(closed_form_v0(kM2, kRstar)) < 1e-8);
    CHECK(closed_form_v0(kM2, 50.0) < 0.0);
    CHECK(closed_form_v0_prime(kM2, 1.0) == doctest::Approx(0.5).epsilon(1e-15));

    auto v0 = [](double r) { return closed_form_v0(kM2, r); };
    const double h = 1e-4 * 2.0;
    double sup = 0.0;
    for (double r : oracle::lin_grid(1.0 + 2 * h, 100.0, 400)) {
        const double q = 1.0 + 1.0 / r;
        const double Q = 0.25 / (r * r) + 2.0 / (r * r * r * q * q);
        sup = std::max(sup, std::abs(oracle::d2(v0, r, h) + Q * v0(r)));
        CHECK(std::abs(oracle::d1(v0, r, h) - closed_form_v0_prime(kM2, r)) < 1e-8);
    }
    CHECK(sup <= 1e-6);
}

TEST_CASE("integrate_v reproduces v0 and its single zero") {
    const auto sol = integrate_v(ModeParams(kM2, 0, 0.0, 50.0), 50.0, 1e-10);
    CHECK(sol.nodes.front().r == 1.0);
    CHECK(sol.nodes.front().v == 1.0);
    CHECK(sol.nodes.front().v_prime == 0.5);
    CHECK_FALSE(sol.renormalized());
    double err = 0.0, sup = 0.0;
    for (const auto& nd : sol.nodes) {
        err = std::max(err, std::abs(nd.v - closed_form_v0(kM2, nd.r)));
        sup = std::max(sup, std::abs(closed_form_v0(kM2, nd.r)));
    }
    // Dense output between nodes too.
    for (double r : oracle::lin_grid(1.0, 50.0, 997))
        err = std::max(err, std::abs(sol.evaluate(r).v - closed_form_v0(kM2, r)));
    CHECK(err / sup <= 1e-8);
    REQUIRE(sol.zero_crossings.size() == 1);
    CHECK(std::abs(sol.zero_crossings[0] - kRstar) <= 1e-6 * kRstar);

    for (std::size_t i = 1; i < sol.nodes.size(); ++i) CHECK(sol.nodes[i].r > sol.nodes[i - 1].r);
}

TEST_CASE("zero crossings are transversal") {
    for (double lambda : {0.0, 0.02, 0.1}) {
        const auto sol = integrate_v(ModeParams(kM2, 0, lambda, 60.0), 60.0, 1e-10);
        for (double z : sol.zero_crossings) {
            auto it = std::lower_bound(sol.nodes.begin(), sol.nodes.end(), z,
                                       [](const RadialNode& n, double r) { return n.r < r; });
            REQUIRE(it != sol.nodes.begin());
            REQUIRE(it != sol.nodes.end());
            const auto& a = *(it - 1);
            const auto& b = *it;
            const double s = std::max(std::abs(a.v_prime), std::abs(b.v_prime));
            const auto at = sol.evaluate(z);
            CHECK(std::abs(at.v_prime) * std::exp(at.log_scale - a.log_scale) >= 1e-3 * s);
            CHECK(std::abs(at.v) <= 1e-6 * s * 2.0);
        }
    }
}

TEST_CASE("barrier psi_k") {
    for (int k : {1, 2, 3, -2})
        CHECK(barrier_psi_k(kM2, k, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    const double r = 1e8;
    CHECK(rel_err(barrier_psi_k(kM2, 1, r) * 2.0 * r, 1.0 + std::sqrt(2.0)) < 1e-6);
    CHECK(barrier_psi_k(kM2, 1, r) > 0.0);
    CHECK_THROWS_AS(barrier_psi_k(kM2, 0, 1.0), DomainError);

    const double h = 2e-4;
    for (int k : {1, 2, 3}) {
        auto psi = [k](double x) { return barrier_psi_k(kM2, k, x); };
        double sup = 0.0;
        for (double x : oracle::lin_grid(1.0 + 2 * h, 100.0, 300))
            sup = std::max(sup, std::abs(oracle::d1(psi, x, h) + psi(x) * psi(x) -
                                         (k * k - 0.75) / (x * x)));
        CHECK(sup <= 1e-6);
        // Envelope is the integral of psi_k.
        auto env = [k](double x) { return barrier_log_envelope(kM2, k, x); };
        for (double x : {1.5, 7.0, 300.0})
            CHECK(std::abs(oracle::d1(env, x, h) - psi(x)) < 1e-8);
        CHECK(env(1.0) == doctest::Approx(0.0));
    }
}

TEST_CASE("no zeros for k != 0 and non-positive lambda; barrier dominates") {
    for (int k : {1, 2, 3})
        for (double l : {0.0, -0.1, -1.0, -10.0}) {
            const auto sol = integrate_v(ModeParams(kM2, k, l / 4.0, 2000.0), 2000.0, 1e-10);
            CHECK(sol.zero_crossings.empty());
            CHECK(barrier_margin(sol) >= -1e-8);
        }
}

TEST_CASE("at most one zero for small negative lambda at k = 0") {
    for (double l : {-0.01, -0.05}) {
        const auto sol = integrate_v(ModeParams(kM2, 0, l / 4.0, 2000.0), 2000.0, 1e-10);
        CHECK(sol.zero_crossings.size() <= 1);
    }
}

TEST_CASE("cbar") {
    CHECK(cbar(kM2) == -8.0);
    CHECK(cbar(SchwarzschildModel(2.0 * std::numbers::e)) == doctest::Approx(-12.0).epsilon(1e-15));
    CHECK(rel_err(cbar(SchwarzschildModel(1.0)), -5.227411277760218762) < 1e-15);
    CHECK_THROWS_AS(cbar(SchwarzschildModel(0.0)), DomainError);
}

TEST_CASE("psi_c") {
    CHECK(psi_c(kM2, -8.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(psi_c(kM2, -8.0, kRstar), SingularityError);
    try {
        psi_c(kM2, -8.0, kRstar);
    } catch (const SingularityError& e) {
        CHECK(rel_err(e.location(), kRstar) < 1e-8);
    }

    const double ode = oracle::rk4([](double r, double g) { return riccati_rhs(2.0, r, g); }, 1.0,
                                   0.5, 2.0, 20000);
    CHECK(rel_err(psi_c(kM2, -8.0, 2.0), ode) < 1e-6);

    // Each member of the family solves the Riccati equation away from its pole.
    const double h = 2e-4;
    for (double c : {-20.0, -8.0, 0.0, 5.0}) {
        const double Rc = singularity_R_c(kM2, c);
        auto psi = [c](double r) { return psi_c(kM2, c, r); };
        double sup = 0.0;
        for (double r : oracle::lin_grid(1.0 + 2 * h, 200.0, 500)) {
            if (std::abs(r - Rc) < 0.05 * Rc) continue;
            const double res = oracle::d1(psi, r, h) - riccati_rhs(2.0, r, psi(r));
            sup = std::max(sup, std::abs(res));
        }
        CHECK(sup <= 1e-6);
    }
}

TEST_CASE("R_c") {
    const double base = singularity_R_c(kM2, -8.0);
    CHECK(rel_err(base, kRstar) < 1e-12);
    CHECK(singularity_R_c(kM2, -20.0) > base);
    CHECK(singularity_R_c(kM2, 0.0) < base);

    const auto prof = riccati_profile(kM2, -8.0);
    REQUIRE(prof.singularity.has_value());
    CHECK(rel_err(*prof.singularity, kRstar) < 1e-12);

    // Strictly decreasing in c on random samples, and the defining relation holds.
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> cdist(-60.0, 20.0);
    for (int i = 0; i < 50; ++i) {
        double a = cdist(gen), b = cdist(gen);
        if (a > b) std::swap(a, b);
        if (b - a < 1e-6) continue;
        const double Ra = singularity_R_c(kM2, a), Rb = singularity_R_c(kM2, b);
        CHECK(Ra > Rb);
        const double lhs = (2 * Ra - 2.0) * (4 * std::log(Ra) + 8 + a);
        const double rhs = 8 * (2 * Ra + 2.0);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * rhs);
    }
    // R_c grows without bound as c decreases.
    CHECK(singularity_R_c(kM2, -200.0) > 1e10);
}

TEST_CASE("shooting recovers psi_cbar as v'/v") {
    const auto sol = integrate_v(ModeParams(kM2, 0, 0.0, 50.0), 50.0, 1e-11);
    CHECK(sol.nodes.front().v_prime / sol.nodes.front().v == 0.5);
    const double c = cbar(kM2);
    for (double r : oracle::lin_grid(1.0, 50.0, 400)) {
        if (std::abs(r - kRstar) < 0.1 * kRstar) continue;
        const auto nd = sol.evaluate(r);
        CHECK(rel_err(nd.v_prime / nd.v, psi_c(kM2, c, r)) < 1e-6);
    }
}

TEST_CASE("integration failure reports the last good radius") {
    // A hopeless tolerance cannot be met in double precision.
    CHECK_THROWS_AS(integrate_v(ModeParams(kM2, 0, 0.0, 50.0), 50.0, 1e-30), NumericalError);
    CHECK_THROWS_AS(integrate_v(ModeParams(kM2, 0, 0.0, 50.0), 0.5), DomainError);
}
