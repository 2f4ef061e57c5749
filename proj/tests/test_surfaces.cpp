#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "schw/surfaces.hpp"

using namespace schw;
using oracle::rel_err;
using std::numbers::pi;

namespace {

const SchwarzschildModel kM2(2.0);

double plane_mu(double rho) {
    const double h = areal_from_distance(kM2, HorizonDistance(rho)).value();
    return pi * (h * h - 16.0);
}

// H of the cone t alpha(s) recomputed from scratch: the Euclidean curvature of the cone's
// cross-section read off by finite differences of alpha, with the conformal rescaling.
double brute_force_H(const SphereCurve& c, double m, double t, double s) {
    const double h = 1e-3;
    auto a = [&](double x) { return c.alpha(x); };
    Vec3 d1, d2;
    for (int i = 0; i < 3; ++i) {
        auto comp = [&](double x) { return a(x)[static_cast<std::size_t>(i)]; };
        d1[static_cast<std::size_t>(i)] = oracle::d1(comp, s, h);
        d2[static_cast<std::size_t>(i)] = oracle::d2(comp, s, h);
    }
    const double e = std::pow(1 + m / (2 * t), 2);
    return dot(cross(a(s), d2), d1) / (t * e);
}

}  // namespace

TEST_CASE("rotations are orthogonal and reproducible") {
    const auto r = Rotation::random(42);
    const auto r2 = Rotation::random(42);
    CHECK(r.rows() == r2.rows());
    CHECK(Rotation::random(43).rows() != r.rows());
    const auto& a = r.rows();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += a[static_cast<std::size_t>(3 * i + k)] * a[static_cast<std::size_t>(3 * j + k)];
            CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-14);
        }
    const double det = a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
                       a[2] * (a[3] * a[7] - a[4] * a[6]);
    CHECK(det == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sphere curves are unit speed on the unit sphere") {
    for (const auto& c : {SphereCurve::great_circle_curve(Rotation::random(3)),
                          SphereCurve::latitude_circle(pi / 3, Rotation::random(4))}) {
        for (double s : oracle::lin_grid(0.0, c.length, 37)) {
            CHECK(std::abs(norm(c.alpha(s)) - 1) < 1e-8);
            CHECK(std::abs(norm(c.d1(s)) - 1) < 1e-8);
            CHECK(std::abs(dot(c.alpha(s), c.d1(s))) < 1e-8);
        }
    }
    CHECK_THROWS_AS(SphereCurve::latitude_circle(0.0), DomainError);
}

TEST_CASE("cone mean curvature dichotomy") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto c = SphereCurve::great_circle_curve(Rotation::random(seed));
        for (double t : {1.0, 2.0, 37.0})
            for (double s : oracle::lin_grid(0.0, c.length, 13))
                CHECK(std::abs(cone_mean_curvature(kM2, c, t, s)) <= 1e-10);
    }
    // Example at theta0 = pi/3, t = m.
    {
        const auto c = SphereCurve::latitude_circle(pi / 3);
        CHECK(rel_err(cone_mean_curvature(kM2, c, 2.0, 0.3), -1.0 / std::tan(pi / 3) / (2.0 * 2.25)) <
              1e-12);
    }
    for (double th : {pi / 6, pi / 3, 4 * pi / 9}) {
        const auto c = SphereCurve::latitude_circle(th, Rotation::random(99));
        for (double t : {1.0, 3.0, 50.0})
            for (double s : oracle::lin_grid(0.0, c.length, 7)) {
                const double H = cone_mean_curvature(kM2, c, t, s);
                const double want = 1.0 / std::tan(th) / (t * std::pow(1 + 1.0 / t, 2));
                CHECK(rel_err(std::abs(H), want) < 1e-8);
                CHECK(rel_err(H, brute_force_H(c, 2.0, t, s)) < 1e-6);
            }
    }
    // H decays like 1/t.
    const auto c = SphereCurve::latitude_circle(pi / 4);
    CHECK(rel_err(cone_mean_curvature(kM2, c, 1e6, 0.0) * 1e6, -1.0) < 1e-5);
}

TEST_CASE("ball filter") {
    const auto in0 = ball_filter(kM2, HorizonDistance(0.0));
    CHECK(in0({1.0, 0.0, 0.0}));
    CHECK_FALSE(in0({100.0, 0.0, 0.0}));
    const double a = distance_from_areal(kM2, areal_from_isotropic(kM2, IsotropicRadius(kM2, 100.0))).value();
    CHECK(ball_filter(kM2, HorizonDistance(a))({0.0, 100.0, 0.0}));
    CHECK_THROWS_AS(in0({0.5, 0.0, 0.0}), DomainError);
    // level_radius sits on the boundary of the ball.
    const double rl = level_radius(kM2, HorizonDistance(30.0));
    CHECK(ball_filter(kM2, HorizonDistance(30.0))({rl * (1 - 1e-12), 0, 0}));
    CHECK_FALSE(ball_filter(kM2, HorizonDistance(30.0))({rl * (1 + 1e-9), 0, 0}));
}

TEST_CASE("f-weighted area") {
    const auto plane = make_plane(kM2, 1e6);
    CHECK(mu_integral(kM2, plane, HorizonDistance(0.0)) == 0.0);
    for (double rho : oracle::log_grid(1e-3, 2000.0, 25))
        CHECK(rel_err(mu_integral(kM2, plane, HorizonDistance(rho)), plane_mu(rho)) < 1e-8);
    for (double th : {pi / 6, pi / 3}) {
        const auto cone = make_cone(kM2, SphereCurve::latitude_circle(th), 1e6);
        CHECK(rel_err(mu_integral(kM2, cone, HorizonDistance(40.0)), std::sin(th) * plane_mu(40.0)) <
              1e-8);
    }
    // A general chart of the same plane goes through the 2-D path.
    const auto chart = make_surface(
        kM2, [](double t, double s) { return Vec3{t * std::cos(s), t * std::sin(s), 0.0}; }, 1.0,
        1e6, 2 * pi, true);
    CHECK(rel_err(mu_integral(kM2, chart, HorizonDistance(10.0), {1e-8, 32, 4096}), plane_mu(10.0)) <
          1e-6);
    CHECK(rel_err(area_integral(kM2, chart, HorizonDistance(10.0)),
                  area_integral(kM2, plane, HorizonDistance(10.0))) < 1e-6);
    // Area of the plane is the reference area.
    CHECK(rel_err(area_integral(kM2, plane, HorizonDistance(77.0)),
                  reference_plane_area(kM2, HorizonDistance(77.0))) < 1e-8);
}

TEST_CASE("radial normal component") {
    const auto plane = make_plane(kM2, 100.0, Rotation::random(5));
    CHECK(radial_normal_component(kM2, plane, 3.0, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    const auto cone = make_cone(kM2, SphereCurve::latitude_circle(0.4), 100.0);
    CHECK(radial_normal_component(kM2, cone, 3.0, 0.2) == doctest::Approx(0.0).epsilon(1e-12));

    const SchwarzschildModel flat(0.0);
    for (double c : {0.5, 2.0}) {
        const auto graph = make_surface(
            flat, [c](double t, double s) { return Vec3{t * std::cos(s), t * std::sin(s), c}; }, 0.1,
            10.0, 2 * pi, false);
        for (double t : {0.3, 1.0, 4.0})
            CHECK(std::abs(radial_normal_component(flat, graph, t, 0.7) - c * c / (t * t + c * c)) <
                  1e-8);
    }
    const auto cart = make_surface(
        flat, [](double t, double s) { return Vec3{t, s, 1.5}; }, -1.0, 1.0, 2.0, false);
    CHECK(radial_normal_component(flat, cart, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-10));

    const auto degenerate = make_surface(
        flat, [](double t, double) { return Vec3{t, 0.0, 1.0}; }, 0.1, 1.0, 1.0, false);
    CHECK_THROWS_AS(radial_normal_component(flat, degenerate, 0.5, 0.5), GeometryError);
}

TEST_CASE("boundary length") {
    CHECK(rel_err(boundary_length(kM2, make_plane(kM2, 10.0)), 8 * pi) < 1e-15);
    const SchwarzschildModel m3(3.0);
    CHECK(rel_err(boundary_length(m3, make_plane(m3, 10.0)), 12 * pi) < 1e-15);
    const double th = 0.7;
    CHECK(rel_err(boundary_length(kM2, make_cone(kM2, SphereCurve::latitude_circle(th), 10.0)),
                  8 * pi * std::sin(th)) < 1e-14);
    const auto chart = make_surface(
        kM2, [](double t, double s) { return Vec3{t * std::cos(s), 0.0, t * std::sin(s)}; }, 1.0,
        10.0, 2 * pi, true);
    CHECK(rel_err(boundary_length(kM2, chart), 8 * pi) < 1e-8);
    const auto closed = make_surface(
        kM2, [](double t, double s) { return Vec3{t * std::cos(s), t * std::sin(s), 0.0}; }, 2.0,
        10.0, 2 * pi, false);
    CHECK_THROWS_AS(boundary_length(kM2, closed), PreconditionError);
    CHECK_THROWS_AS(make_surface(
                        kM2, [](double t, double s) { return Vec3{t * std::cos(s), t * std::sin(s), 0.0}; },
                        2.0, 10.0, 2 * pi, true),
                    GeometryError);
}

TEST_CASE("monotonicity of the plane") {
    const auto plane = make_plane(kM2, 1e9);
    const auto grid = oracle::log_grid(1e-2, 2000.0, 40);
    const auto rep = monotonicity_report(kM2, plane, grid);
    CHECK(rep.monotone);
    CHECK(rep.max_backstep <= 0.0);
    REQUIRE(rep.ratios.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double h = rep.h_values[i];
        CHECK(rel_err(rep.ratios[i], pi * (1 - 16.0 / (h * h))) < 1e-8);
        CHECK(std::abs(rep.pair_residuals[i]) <= 1e-7);
        CHECK(std::abs(rep.origin_residuals[i]) <= 1e-7);
        if (i > 0) CHECK(rep.ratios[i] > rep.ratios[i - 1]);
    }
    CHECK(rep.boundary_length == doctest::Approx(8 * pi));
    const auto far = monotonicity_report(kM2, plane, {1e7});
    CHECK(rel_err(far.ratios[0], pi) < 1e-5);
}

TEST_CASE("flat degeneration") {
    const SchwarzschildModel flat(0.0);
    const auto plane = make_plane(flat, 1e6);
    const auto rep = monotonicity_report(flat, plane, oracle::log_grid(0.1, 100.0, 10));
    for (double x : rep.ratios) CHECK(rel_err(x, pi) < 1e-10);
    CHECK(rep.origin_residuals.empty());
    CHECK(boundary_length(flat, plane) == 0.0);
    CHECK(rel_err(density_at_infinity(flat, plane, 100.0).theta, 1.0) < 1e-8);
    CHECK_THROWS_AS(monotonicity_report(flat, plane, {0.0, 1.0}), DomainError);
}

TEST_CASE("density at infinity") {
    const auto plane = make_plane(kM2, 1e9);
    const auto d = density_at_infinity(kM2, plane, 1000.0);
    CHECK(d.finite);
    CHECK(std::abs(d.theta - 1.0) < 1e-6);
    for (double th : {pi / 6, pi / 3}) {
        const auto cone = make_cone(kM2, SphereCurve::latitude_circle(th), 1e9);
        CHECK(std::abs(density_at_infinity(kM2, cone, 1000.0).theta - std::sin(th)) < 1e-6);
    }
}

TEST_CASE("boundary-length bound") {
    const auto plane = make_plane(kM2, 1e9);
    const auto rep = boundary_bound_check(kM2, plane, 1000.0);
    CHECK(rep.holds);
    CHECK(std::abs(rep.lhs - 1.0) < 1e-4);
    CHECK(rel_err(rep.rhs, 1.0) < 1e-14);
    CHECK(std::abs(rep.equality_defect) < 1e-4);
    CHECK(std::abs(rep.defect_integral) <= 1e-6);
    CHECK(rel_err(rep.boundary_length, 4 * pi * 2.0 * rep.rhs) < 1e-15);
    CHECK_THROWS_AS(boundary_bound_check(SchwarzschildModel(0.0), plane, 10.0), DomainError);
}

TEST_CASE("scalar outputs are rotation invariant") {
    const auto a = make_plane(kM2, 1e9);
    const auto ra = boundary_bound_check(kM2, a, 500.0);
    const double mu_a = mu_integral(kM2, a, HorizonDistance(25.0));
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto b = make_plane(kM2, 1e9, Rotation::random(seed));
        const auto rb = boundary_bound_check(kM2, b, 500.0);
        CHECK(rel_err(rb.lhs, ra.lhs) < 1e-9);
        CHECK(rel_err(rb.boundary_length, ra.boundary_length) < 1e-9);
        CHECK(rel_err(mu_integral(kM2, b, HorizonDistance(25.0)), mu_a) < 1e-9);
    }
    // A rotated general chart exercises the non-cone code path.
    const auto rot = Rotation::random(8);
    const auto gen = make_surface(
        kM2,
        [rot](double t, double s) { return rot.apply({t * std::cos(s), t * std::sin(s), 0.0}); },
        1.0, 1e6, 2 * pi, true);
    CHECK(rel_err(area_integral(kM2, gen, HorizonDistance(25.0)),
                  area_integral(kM2, a, HorizonDistance(25.0))) < 1e-6);
}
