#include <benchmark/benchmark.h>

#include <limits>
#include <optional>

#include "strato/conormal.hpp"
#include "strato/initdata.hpp"
#include "strato/littlewood_paley.hpp"
#include "strato/rankine.hpp"
#include "strato/solver.hpp"
#include "strato/spectral.hpp"

using namespace strato;

namespace {

ScalarField disc(int n) { return init::rasterize_patch(init::PatchSpec{}, GridSpec(n, 4.0)); }

void BM_ForwardTransform(benchmark::State& state) {
  const auto f = disc(static_cast<int>(state.range(0)));
  const std::vector<double> values(f.values().begin(), f.values().end());
  for (auto _ : state) {
    const ScalarField fresh(f.grid(), values);
    benchmark::DoNotOptimize(fresh.spectrum());
  }
}
BENCHMARK(BM_ForwardTransform)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_InverseTransform(benchmark::State& state) {
  const auto spectrum = disc(static_cast<int>(state.range(0))).spectrum();
  for (auto _ : state) benchmark::DoNotOptimize(ScalarField::from_spectrum(spectrum).values().data());
}
BENCHMARK(BM_InverseTransform)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_BiotSavart(benchmark::State& state) {
  const auto w = disc(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectral::biot_savart(w));
}
BENCHMARK(BM_BiotSavart)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_SolverStep(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)), 4.0);
  init::DensitySpec density;
  density.kind = init::DensityKind::gaussian;
  density.amplitude = 1.0;
  density.width = 0.25;
  const solver::SimState s{init::rasterize_patch(init::PatchSpec{}, g), init::make_density(density, g).rho, 0.0};
  solver::SimParams params;
  params.mu = 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(solver::advance(s, params, 1e-3));
}
BENCHMARK(BM_SolverStep)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_FamilyAdvection(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)), 4.0);
  const solver::SimState s{init::rasterize_patch(init::PatchSpec{}, g), ScalarField::zeros(g), 0.0};
  std::optional<solver::StepRecord> record;
  solver::advance(s, solver::SimParams{}, 1e-3, [&](const solver::StepRecord& r) { record = r; });
  const auto family = conormal::make_family(init::initial_vector_family(init::PatchSpec{}, g));
  for (auto _ : state) benchmark::DoNotOptimize(conormal::advect_family(family, *record));
}
BENCHMARK(BM_FamilyAdvection)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_RankineProfile(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rankine::vorticity_lp_error(rankine::radial_profile(1e-3), 2.0));
}
BENCHMARK(BM_RankineProfile)->Unit(benchmark::kMillisecond);

void BM_RankinePoint(benchmark::State& state) {
  double r = 0.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rankine::exact_vorticity(1e-2, r));
    r = r < 1.1 ? r + 1e-3 : 0.9;
  }
}
BENCHMARK(BM_RankinePoint)->Unit(benchmark::kMicrosecond);

void BM_BesovNorm(benchmark::State& state) {
  const auto f = disc(static_cast<int>(state.range(0)));
  const lp::DyadicPartition part(f.grid());
  const double inf = std::numeric_limits<double>::infinity();
  for (auto _ : state) benchmark::DoNotOptimize(lp::besov_norm(f, {0.5, 2.0, inf, true}, part));
}
BENCHMARK(BM_BesovNorm)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
