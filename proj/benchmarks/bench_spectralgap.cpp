#include <algorithm>
#include <variant>
#include <benchmark/benchmark.h>

#include "spectralgap/gapbound.hpp"
#include "spectralgap/modelfun.hpp"
#include "spectralgap/spaces.hpp"
#include "spectralgap/tridiag_eigen.hpp"

using namespace spectralgap;

namespace {

// (K, N, d) picked to exercise each drift family once.
constexpr double kCases[][3] = {{1.0, 3.0, 2.0}, {-1.0, 4.0, 1.5}, {2.0, 3.0, 3.14159}};

}  // namespace

static void BM_HatLambdaShooting(benchmark::State& state) {
  const auto& c = kCases[state.range(0)];
  const SymmetricModel model(CurvatureDimension(c[0], c[1]), c[2]);
  for (auto _ : state) benchmark::DoNotOptimize(shoot_hat_lambda(model, 1e-9).lambda);
}
BENCHMARK(BM_HatLambdaShooting)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

static void BM_HatLambdaDiscretization(benchmark::State& state) {
  const auto& c = kCases[state.range(0)];
  const SymmetricModel model(CurvatureDimension(c[0], c[1]), c[2]);
  for (auto _ : state) benchmark::DoNotOptimize(discretize_hat_lambda(model).lambda);
}
BENCHMARK(BM_HatLambdaDiscretization)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_EigenvalueK(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SymmetricModel model(CurvatureDimension(1.0, 3.0), 2.0);
  const auto pencil = assemble_neumann([&](double x) { return model.weight(x); }, model.left(),
                                       model.right(), n);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalue_k(pencil, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EigenvalueK)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

static void BM_ModelProfile(benchmark::State& state) {
  // R > 0, = 0, < 0 with the same l.
  const double R = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(m_value(R, 3.0, 5.0));
}
BENCHMARK(BM_ModelProfile)->Arg(1)->Arg(0)->Arg(-1)->Unit(benchmark::kMicrosecond);

static void BM_MatchInterval(benchmark::State& state) {
  const auto& catalog = builtin_catalog();
  const auto it = std::find_if(catalog.begin(), catalog.end(),
                               [](const ModelSpace& s) { return s.name == "cos2-sym-1"; });
  const auto eig = first_neumann_eigenpair(std::get<WeightedInterval>(it->kind), 1024);
  const double max_f = std::min(1.0, *std::max_element(eig.f.begin(), eig.f.end()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        match_interval(it->declared_K, it->declared_N, eig.lambda1_extrapolated, max_f).b);
  }
}
BENCHMARK(BM_MatchInterval)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
