#include <benchmark/benchmark.h>

#include "hpencil/epi.hpp"
#include "hpencil/pencil.hpp"
#include "hpencil/presets.hpp"
#include "hpencil/prufer.hpp"
#include "hpencil/wkb.hpp"

using namespace hpencil;

static void BM_ParseEval(benchmark::State& state) {
  auto e = coeffs::parse_expr("0.2 + cos(x)^2");
  double x = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(e.eval(x));
    x += 1e-3;
  }
}
BENCHMARK(BM_ParseEval);

static void BM_AssembleLinearization(benchmark::State& state) {
  auto p = presets::example39();
  pencil::DiscreteGrid g(p, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pencil::assemble_linearization(p, g));
}
BENCHMARK(BM_AssembleLinearization)->Arg(50)->Arg(100)->Arg(200);

static void BM_DenseSpectrum(benchmark::State& state) {
  auto p = presets::example39();
  pencil::DiscreteGrid g(p, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pencil::solve_spectrum(p, g));
}
BENCHMARK(BM_DenseSpectrum)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_LeftmostEigenvalue(benchmark::State& state) {
  auto p = epi::build_stability_pencil(presets::rabies_vaccine());
  pencil::DiscreteGrid g(p, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pencil::leftmost_eigenvalue(p, g));
}
BENCHMARK(BM_LeftmostEigenvalue)->Arg(200)->Arg(400);

static void BM_PruferIntegrate(benchmark::State& state) {
  auto p = presets::example39();
  for (auto _ : state)
    benchmark::DoNotOptimize(prufer::integrate_prufer(p, 1.0, 1e-9));
}
BENCHMARK(BM_PruferIntegrate)->Unit(benchmark::kMillisecond);

static void BM_WkbPhase(benchmark::State& state) {
  auto p = presets::example39();
  for (auto _ : state) benchmark::DoNotOptimize(wkb::wkb_phase(p, 4.88));
}
BENCHMARK(BM_WkbPhase);

static void BM_VaccinePoint(benchmark::State& state) {
  auto rp = presets::rabies_vaccine();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        epi::principal_growth_rate(epi::with_vaccine(rp, {0.44, 0.16, 0.68}), 200));
}
BENCHMARK(BM_VaccinePoint);

BENCHMARK_MAIN();
