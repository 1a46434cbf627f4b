#include <benchmark/benchmark.h>

#include <cmath>

#include "flexscat/postprocess.hpp"
#include "flexscat/specfun.hpp"

using namespace flexscat;

namespace {

IcePreset bump_ice() {
  IcePreset ice;
  ice.omega = omega_for_wavenumber(ice, 1.0, 1.05);
  return ice;
}

const DispersionData& bump_dispersion() {
  static const DispersionData d = solve_dispersion(derive_params(bump_ice(), 1.0));
  return d;
}

}  // namespace

static void BM_StruveK(benchmark::State& st) {
  const cdouble z(std::pow(10.0, double(st.range(0)) / 2), 0.3);
  for (auto _ : st) benchmark::DoNotOptimize(specfun::struve_K(0, z));
}
BENCHMARK(BM_StruveK)->DenseRange(-2, 4);

static void BM_Hankel1(benchmark::State& st) {
  const cdouble z(std::pow(10.0, double(st.range(0)) / 2), 0.3);
  for (auto _ : st) benchmark::DoNotOptimize(specfun::hankel1(1, z));
}
BENCHMARK(BM_Hankel1)->DenseRange(-2, 4);

static void BM_SolveDispersion(benchmark::State& st) {
  const PhysicalParams p = derive_params(bump_ice(), 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(solve_dispersion(p));
}
BENCHMARK(BM_SolveDispersion);

static void BM_EvalRadial(benchmark::State& st) {
  const DispersionData& d = bump_dispersion();
  double r = 0.1;
  for (auto _ : st) {
    benchmark::DoNotOptimize(eval_radial(d, r));
    r = r < 40 ? r * 1.1 : 0.1;
  }
}
BENCHMARK(BM_EvalRadial);

static void BM_BuildCorrections(benchmark::State& st) {
  const DispersionData& d = bump_dispersion();
  build_corrections(d, 0.5);  // zeta moments are computed once per process
  for (auto _ : st) benchmark::DoNotOptimize(build_corrections(d, 0.25));
}
BENCHMARK(BM_BuildCorrections)->Unit(benchmark::kMillisecond);

static void BM_KernelArrays(benchmark::State& st) {
  const DispersionData& d = bump_dispersion();
  const CorrectionTable t = build_corrections(d, 0.25);
  const int n = int(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(kernel_arrays(d, t, n, n, {0, 1, 2, 3, 4, 5, 6, 7}));
  st.SetComplexityN(n);
}
BENCHMARK(BM_KernelArrays)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

// one LHS application on an n x n support
static void BM_ApplyLhs(benchmark::State& st) {
  const int n = int(st.range(0));
  const double h = 48.0 / (n - 1);
  const IcePreset ice = bump_ice();
  const CoefficientField f = build_field(GaussianBump{1.0, 2.0, 4.0}, ice, square_grid(h, 24.0));
  const DispersionData d = solve_dispersion(f.params());
  const LsOperator op(f, d, build_corrections(d, h));
  std::vector<cdouble> mu(op.size());
  for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = cdouble(std::cos(0.01 * double(i)), 0.5);
  for (auto _ : st) benchmark::DoNotOptimize(op.apply(mu));
  st.counters["unknowns"] = double(op.size());
}
BENCHMARK(BM_ApplyLhs)->Arg(97)->Arg(193)->Arg(385)->Unit(benchmark::kMillisecond);

static void BM_SolveBump(benchmark::State& st) {
  ScatterProblem p;
  p.profile = GaussianBump{1.0, 2.0, 4.0};
  p.ice = bump_ice();
  p.grid = square_grid(double(st.range(0)) / 8, 38.0);
  p.incident.k = 1.05;
  int it = 0;
  for (auto _ : st) it = solve_scatter(p).stats.iterations;
  st.counters["iterations"] = it;
}
BENCHMARK(BM_SolveBump)->Arg(8)->Arg(4)->Unit(benchmark::kSecond)->Iterations(1);

static void BM_FftInterpolate(benchmark::State& st) {
  DensityGrid g(square_grid(0.5, 40.0));
  for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = std::exp(-1e-5 * double(i));
  for (auto _ : st) benchmark::DoNotOptimize(fft_interpolate(g, int(st.range(0))));
}
BENCHMARK(BM_FftInterpolate)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
