#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "schw/fd_oracle.hpp"
#include "schw/spectral.hpp"

using namespace schw;
using oracle::rel_err;

namespace {

const SchwarzschildModel kM2(2.0);
const double kRstar = oracle::kStabilityRatio * 2.0;

double lambda1(const SchwarzschildModel& model, int k, double R, int n) {
    return lowest_eigenvalues(assemble(model, k, R, n), 1).entries[0].lambda;
}

}  // namespace

TEST_CASE("assembly invariants") {
    const auto p = assemble(kM2, 0, 20.0, 64);
    CHECK(p.grid.size() == 65);
    CHECK(p.grid.front() == 1.0);
    CHECK(p.grid.back() == 20.0);
    for (double w : p.mass_weights) CHECK(w > 0.0);
    const auto a = p.dense_stiffness();
    const std::size_t n = 64;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) CHECK(a[i * n + j] == a[j * n + i]);

    // Without the potential term the k = 0 stiffness is a weighted graph Laplacian plus the
    // Dirichlet row, so its Sturm count below zero is 0.
    const auto flat = assemble(SchwarzschildModel(0.0), 0, 3.0, 64);
    CHECK(count_below(flat, 0.0) == 0);

    CHECK_THROWS_AS(assemble(kM2, 0, 20.0, 15), DomainError);
    CHECK_THROWS_AS(assemble(kM2, 0, 1.0, 64), DomainError);
    CHECK_THROWS_AS(assemble(SchwarzschildModel(0.0), 1, 1.0, 64), DomainError);
    CHECK_THROWS_AS(lowest_eigenvalues(p, 64), DomainError);
    CHECK_THROWS_AS(lowest_eigenvalues(p, 0), DomainError);
}

TEST_CASE("flat disc matches the first Bessel zero") {
    CHECK(std::abs(std::cyl_bessel_j(0.0, oracle::kBesselJ0Zero)) < 1e-15);
    const double want = oracle::kBesselJ0Zero * oracle::kBesselJ0Zero / 4.0;  // R = 2
    CHECK(rel_err(lambda1(SchwarzschildModel(0.0), 0, 2.0, 2048), want) < 1e-3);
    CHECK(rel_err(richardson_eigenvalue(SchwarzschildModel(0.0), 0, 2.0, 1024), want) < 1e-6);
}

TEST_CASE("lambda_1 at R* converges to zero at second order") {
    const double e1 = lambda1(kM2, 0, kRstar, 512);
    const double e2 = lambda1(kM2, 0, kRstar, 1024);
    const double e3 = lambda1(kM2, 0, kRstar, 2048);
    CHECK(std::abs(e3) < std::abs(e2));
    CHECK(std::abs(e2) < std::abs(e1));
    const double order = std::log2(std::abs(e1 - e2) / std::abs(e2 - e3));
    CHECK(order > 1.8);
    CHECK(order < 2.2);
    CHECK(std::abs(richardson_eigenvalue(kM2, 0, kRstar, 1024)) < 1e-7);
}

TEST_CASE("signs of the spectrum") {
    const auto k1 = lowest_eigenvalues(assemble(kM2, 1, 20.0, 1024), 5);
    for (const auto& e : k1.entries) CHECK(e.lambda > 0.0);

    CHECK(lambda1(kM2, 0, 3.0, 1024) > 0.0);

    const auto k0 = lowest_eigenvalues(assemble(kM2, 0, 20.0, 1024), 5);
    int neg = 0;
    for (const auto& e : k0.entries) neg += e.lambda < 0.0;
    CHECK(neg == 1);
    for (std::size_t i = 1; i < k0.entries.size(); ++i)
        CHECK(k0.entries[i].lambda > k0.entries[i - 1].lambda);
}

TEST_CASE("Richardson value agrees with shooting") {
    for (double R : {6.0, 20.0}) {
        const auto sp = eigenvalues_shooting(kM2, 0, R, 2);
        for (int idx : {1, 2})
            CHECK(rel_err(richardson_eigenvalue(kM2, 0, R, 512, idx),
                          sp.entries[static_cast<std::size_t>(idx - 1)].lambda) < 1e-3);
    }
}

TEST_CASE("Sturm count agrees with the oscillation count") {
    for (int k : {0, 1, 2})
        for (double R : {2.0, 6.0, 10.8, 11.3, 20.0, 200.0}) {
            const auto p = assemble(kM2, k, R, 1024);
            CHECK(count_below(p, 0.0) == negative_count(kM2, k, R));
        }
}
