#include <benchmark/benchmark.h>

#include "pmflow/operators.hpp"
#include "pmflow/pm_norms.hpp"
#include "pmflow/spectral_grid.hpp"
#include "pmflow/detail/rng.hpp"

namespace {

using namespace pmflow;

GridSpec bench_grid(int n) { return GridSpec{n, 2.0 * pi, 2.0 / 3.0}; }

FourierVectorField random_field(const GridSpec& g, std::uint64_t seed) {
  FourierVectorField u = FourierVectorField::zeros(g);
  detail::Rng rng(seed);
  for (int c = 0; c < 3; ++c)
    for (auto& v : u.c[c]) v = cplx(rng.normal(), rng.normal());
  dealias(u);
  return leray_project(std::move(u));
}

void BM_FftRoundtrip(benchmark::State& state) {
  const GridSpec g = bench_grid(int(state.range(0)));
  FourierVectorField u = random_field(g, 11);
  for (auto _ : state) {
    PhysicalVectorField p = to_physical(u);
    FourierVectorField back = to_fourier(p);
    benchmark::DoNotOptimize(back.c[0][1]);
  }
}
BENCHMARK(BM_FftRoundtrip)->Arg(32)->Arg(64);

void BM_NonlinearTerm(benchmark::State& state) {
  const GridSpec g = bench_grid(int(state.range(0)));
  FourierVectorField u = random_field(g, 12);
  for (auto _ : state) {
    FourierVectorField n = nonlinear_term(u, u);
    benchmark::DoNotOptimize(n.c[0][1]);
  }
}
BENCHMARK(BM_NonlinearTerm)->Arg(32)->Arg(64);

void BM_DuhamelSweep(benchmark::State& state) {
  const GridSpec g = bench_grid(32);
  const TimeGrid times = TimeGrid::geometric(0.05, 5.0, std::pow(2.0, 0.25));
  FourierVectorField u = random_field(g, 13);
  SpaceTimeField hist;
  hist.times = times;
  hist.snaps.assign(times.nodes.size(), u);
  for (auto _ : state) {
    SpaceTimeField b = duhamel_nonlinear_history(hist, hist);
    benchmark::DoNotOptimize(b.snaps.back().c[0][1]);
  }
}
BENCHMARK(BM_DuhamelSweep);

void BM_PmNorm(benchmark::State& state) {
  const GridSpec g = bench_grid(int(state.range(0)));
  FourierVectorField u = random_field(g, 14);
  const NormBand band = NormBand::default_for(g);
  for (auto _ : state) {
    double v = pm_norm(u, 2.0, band);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_PmNorm)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
