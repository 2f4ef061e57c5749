#include <benchmark/benchmark.h>

#include <cmath>

#include "schw/fd_oracle.hpp"
#include "schw/geometry.hpp"
#include "schw/mode_odes.hpp"
#include "schw/spectral.hpp"
#include "schw/surfaces.hpp"

namespace {

const schw::SchwarzschildModel kModel(2.0);

void BM_AreaFromDistance(benchmark::State& state) {
    double r = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(schw::areal_from_distance(kModel, schw::HorizonDistance(r)));
        r = r < 1e5 ? r * 1.37 : 0.5;
    }
}
BENCHMARK(BM_AreaFromDistance);

void BM_IntegrateV(benchmark::State& state) {
    const double r_max = static_cast<double>(state.range(0));
    const schw::ModeParams params(kModel, 1, -0.025, r_max);
    for (auto _ : state) benchmark::DoNotOptimize(schw::integrate_v(params, r_max, 1e-10));
}
BENCHMARK(BM_IntegrateV)->Arg(100)->Arg(2000);

void BM_EigenvaluesShooting(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(schw::eigenvalues_shooting(kModel, 0, 40.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EigenvaluesShooting)->Arg(1)->Arg(4);

void BM_MorseIndex(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(schw::morse_index(kModel, 2000.0));
}
BENCHMARK(BM_MorseIndex);

void BM_FdLowestEigenvalues(benchmark::State& state) {
    const auto problem = schw::assemble(kModel, 0, 40.0, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(schw::lowest_eigenvalues(problem, 3));
}
BENCHMARK(BM_FdLowestEigenvalues)->Arg(512)->Arg(4096);

void BM_MuIntegralPlane(benchmark::State& state) {
    const auto plane = schw::make_plane(kModel, 1e9);
    for (auto _ : state)
        benchmark::DoNotOptimize(schw::mu_integral(kModel, plane, schw::HorizonDistance(1000.0)));
}
BENCHMARK(BM_MuIntegralPlane);

void BM_MuIntegralGeneralChart(benchmark::State& state) {
    const auto chart = schw::make_surface(
        kModel, [](double t, double s) { return schw::Vec3{t * std::cos(s), t * std::sin(s), 0.0}; },
        1.0, 1e6, 2 * 3.141592653589793, true);
    for (auto _ : state)
        benchmark::DoNotOptimize(schw::mu_integral(kModel, chart, schw::HorizonDistance(10.0), {1e-6, 32, 4096}));
}
BENCHMARK(BM_MuIntegralGeneralChart);

}  // namespace

BENCHMARK_MAIN();
