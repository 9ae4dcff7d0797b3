// Matvec and eigensolver cost of the regularized operators as n grows.

#include <benchmark/benchmark.h>

#include "regspec/community.hpp"
#include "regspec/eigensolver.hpp"
#include "regspec/graph_model.hpp"
#include "regspec/spectral_core.hpp"

using namespace regspec;

namespace {

SparseAdjacency er_graph(Index n, double d) {
  return sample_graph(ProbabilityMatrix::constant(n, d / static_cast<double>(n)), 1);
}

void BM_Sample(benchmark::State& state) {
  const Index n = state.range(0);
  const auto p = ProbabilityMatrix::constant(n, 10.0 / static_cast<double>(n));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_graph(p, ++seed));
  state.SetComplexityN(n);
}
BENCHMARK(BM_Sample)->RangeMultiplier(10)->Range(1000, 1'000'000)->Complexity()->Unit(benchmark::kMillisecond);

void BM_LaplacianMatvec(benchmark::State& state) {
  const Index n = state.range(0);
  const auto a = er_graph(n, 10.0);
  const auto op = make_operator(a, auto_tau(a), Regularization::Full, OperatorKind::Laplacian);
  Vector x = Vector::Ones(n), y(n);
  for (auto _ : state) {
    op.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetComplexityN(n);
  state.SetItemsProcessed(state.iterations() * (a.nnz() + n));
}
BENCHMARK(BM_LaplacianMatvec)->RangeMultiplier(10)->Range(1000, 1'000'000)->Complexity(benchmark::oN);

void BM_ExpectedMatvec(benchmark::State& state) {
  const Index n = state.range(0);
  const auto p = sbm_prob_matrix(make_sbm_config(n, 12, 4));
  const auto op = make_expected_operator(p, 8.0 / static_cast<double>(n), Regularization::Full,
                                         OperatorKind::Averaging);
  Vector x = Vector::Ones(n), y(n);
  for (auto _ : state) {
    op.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_ExpectedMatvec)->RangeMultiplier(10)->Range(1000, 1'000'000)->Complexity(benchmark::oN);

void BM_SecondEigenvector(benchmark::State& state) {
  const Index n = state.range(0);
  const auto cfg = make_sbm_config(n, 20, 4);
  const auto a = sample_graph(sbm_prob_matrix(cfg), 2);
  const double tau = auto_tau(a);
  for (auto _ : state) benchmark::DoNotOptimize(second_eigenvector_laplacian(a, tau));
  state.SetComplexityN(n);
}
BENCHMARK(BM_SecondEigenvector)->RangeMultiplier(4)->Range(1000, 64'000)->Complexity()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
