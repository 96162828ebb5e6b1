#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "fvcs/fock.hpp"
#include "fvcs/free_particle.hpp"
#include "fvcs/rotator.hpp"
#include "fvcs/spectrum.hpp"
#include "fvcs/wigner.hpp"

using namespace fvcs;

static void BM_EpsChi(benchmark::State& state) {
  const auto kind = SpectrumKind::rotator(1.0);
  for (auto _ : state) {
    double s = 0.0;
    for (int n = 1; n <= 1000; ++n) s += eps_chi(kind, n).eps;
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_EpsChi);

static void BM_BuildState(benchmark::State& state) {
  const auto kind = SpectrumKind::rotator(8.0);
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_state({{1.0, 1.0}}, kind, n_max));
}
BENCHMARK(BM_BuildState)->Arg(64)->Arg(256);

static void BM_MeanVelocityQuad(benchmark::State& state) {
  const auto s = make_free_state({{0.0, 1.0}}, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(mean_velocity_quad(s, 1e-12));
}
BENCHMARK(BM_MeanVelocityQuad);

static void BM_MeanVelocitySeries(benchmark::State& state) {
  const auto s = make_free_state({{0.0, 1.0}}, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(mean_velocity_series(s));
}
BENCHMARK(BM_MeanVelocitySeries);

static void BM_CommutatorCheck(benchmark::State& state) {
  const auto kind = SpectrumKind::rotator(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(commutator_check_32(kind, 128));
}
BENCHMARK(BM_CommutatorCheck);

static void BM_EvolveMeanA(benchmark::State& state) {
  const auto s = build_state({{1.0, 0.0}}, SpectrumKind::rotator(0.1), 48);
  std::vector<double> t(1301);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_mean_a(s, t));
}
BENCHMARK(BM_EvolveMeanA);

static void BM_WignerFree(benchmark::State& state) {
  const auto s = make_free_state({{0.0, 1.0 / std::numbers::sqrt2}}, 8.0);
  const auto grid = grid_around(0.0, 1.0, 5.0, 5.0, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(wigner_free(s, grid));
}
BENCHMARK(BM_WignerFree)->Unit(benchmark::kMillisecond);

static void BM_WignerRotator(benchmark::State& state) {
  const auto s = build_state({{std::numbers::sqrt2, std::numbers::sqrt2}}, SpectrumKind::rotator(8.0), 64);
  const auto grid = grid_around(2.0, 2.0, 5.0, 5.0, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(wigner_rotator(s, grid));
}
BENCHMARK(BM_WignerRotator)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
