#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "odeclass/odeclass.hpp"

using namespace odeclass;

namespace {

const ForcingExpr& smooth_forcing() {
  static const ForcingExpr f = parse_forcing("sin(3*t)*exp(-0.1*t) + 0.5*cos(0.7*t)");
  return f;
}

void BM_Integrate(benchmark::State& state) {
  const double horizon = static_cast<double>(state.range(0));
  for (auto _ : state) {
    Trajectory tr = integrate(SystemParams{3, 2, 0, 0}, smooth_forcing(), horizon, 1e-10);
    benchmark::DoNotOptimize(tr.x().back());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(horizon / 0.01));
}
BENCHMARK(BM_Integrate)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_IntegrateChirp(benchmark::State& state) {
  const ForcingExpr f = chirp_forcing(parse_forcing("exp(t)"));
  for (auto _ : state) {
    Trajectory tr = integrate(SystemParams{5, 6, 0, 0}, f, 10, 1e-10);
    benchmark::DoNotOptimize(tr.y2().back());
  }
}
BENCHMARK(BM_IntegrateChirp)->Unit(benchmark::kMillisecond);

void BM_FunctionalField(benchmark::State& state) {
  const Trajectory tr = integrate(SystemParams{3, 2, 0, 0}, smooth_forcing(), 50, 1e-10);
  const auto n = static_cast<std::size_t>(state.range(0));
  const ThetaGrid grid = ThetaGrid::uniform(n, n);
  const FunctionalEvaluator ev = FunctionalEvaluator::from_trajectory(tr);
  for (auto _ : state) {
    FunctionalField field = functional_field(ev, grid, tr.grid());
    benchmark::DoNotOptimize(field.sup().back());
  }
}
BENCHMARK(BM_FunctionalField)->Arg(5)->Arg(11)->Unit(benchmark::kMillisecond);

void BM_KernelConvolution(benchmark::State& state) {
  const auto grid = uniform_grid(static_cast<double>(state.range(0)), 0.01);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = smooth_forcing()(grid[i]);
  const SampledSeries s(grid, v);
  const Kernel k(3, 2);
  for (auto _ : state) {
    SampledSeries out = convolve_kernel(k, 0, s);
    benchmark::DoNotOptimize(out.values().back());
  }
}
BENCHMARK(BM_KernelConvolution)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_IdentitySuite(benchmark::State& state) {
  const SystemParams p{3, 2, 0, 0};
  const Trajectory tr = integrate(p, smooth_forcing(), 20, 1e-12);
  const Kernel k(p.a, p.b);
  for (auto _ : state) {
    benchmark::DoNotOptimize(residual_x0_vs_y2(tr, k).max_abs);
    benchmark::DoNotOptimize(residual_F_vs_x(tr, 0.7, 0.4).max_abs);
    benchmark::DoNotOptimize(residual_x0_vs_F(tr, k).max_abs);
  }
}
BENCHMARK(BM_IdentitySuite)->Unit(benchmark::kMillisecond);

void BM_ParseForcing(benchmark::State& state) {
  for (auto _ : state) {
    ForcingExpr f = parse_forcing("-4*exp(3*t)*sin(exp(2*t)-1) + 10*exp(t)*cos(exp(2*t)-1) + 2*exp(-t)*sin(exp(2*t)-1)");
    benchmark::DoNotOptimize(f(1.0));
  }
}
BENCHMARK(BM_ParseForcing);

}  // namespace
BENCHMARK_MAIN();
