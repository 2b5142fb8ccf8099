#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "nhkubo/greens.hpp"
#include "nhkubo/quadrature.hpp"
#include "nhkubo/response.hpp"
#include "nhkubo/spectral.hpp"
#include "nhkubo/tachyon.hpp"

namespace {

using namespace nhkubo;

ComplexMatrix random_matrix(Eigen::Index n) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
  return m;
}

void BM_EigBiortho(benchmark::State& state) {
  const ComplexMatrix m = random_matrix(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eig_biortho(m));
}
BENCHMARK(BM_EigBiortho)->Arg(2)->Arg(8)->Arg(32);

void BM_PseudoMetric(benchmark::State& state) {
  tachyon::TachyonParams p;
  p.m = 0.6;
  const ComplexMatrix h = tachyon::hamiltonian(0.7, p);
  for (auto _ : state) benchmark::DoNotOptimize(pseudo_metric_of(h));
}
BENCHMARK(BM_PseudoMetric);

// Lorentzian with the default tail map: the inner frequency integral's typical shape.
void BM_QuadratureLorentzian(benchmark::State& state) {
  const double width = 1.0 / static_cast<double>(state.range(0));
  const ComplexIntegrand f = [width](double x) { return cplx(width / (x * x + width * width), 0.0); };
  const QuadratureSpec spec{1e-10, 1e-13, 4000, TailMap::Tangent};
  const double cut = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(integrate(f, -INFINITY, INFINITY, spec, {&cut, 1}));
}
BENCHMARK(BM_QuadratureLorentzian)->Arg(1)->Arg(100)->Arg(10000);

void BM_SigmaDc(benchmark::State& state) {
  tachyon::TachyonParams p;
  p.m = 0.6;
  p.gamma = 1.5;
  const auto approach = static_cast<tachyon::Approach>(state.range(0));
  const KuboProblem problem = tachyon::kubo_problem(p, approach);
  for (auto _ : state) benchmark::DoNotOptimize(sigma_dc(problem));
  state.SetLabel(std::string(tachyon::to_string(approach)));
}
BENCHMARK(BM_SigmaDc)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_SigmaOptical(benchmark::State& state) {
  tachyon::TachyonParams p;
  p.m = 0.6;
  p.gamma = 1.5;
  const KuboProblem problem = tachyon::kubo_problem(p, tachyon::Approach::Standard);
  for (auto _ : state) benchmark::DoNotOptimize(sigma_optical(problem, 1.0));
}
BENCHMARK(BM_SigmaOptical)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
