#include "hermiflow/catalog.hpp"
#include "hermiflow/flow_tensors.hpp"
#include "hermiflow/integrator.hpp"
#include "hermiflow/random_pairs.hpp"

#include <benchmark/benchmark.h>

using namespace hermiflow;

static void BM_Contract(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(1);
  const Matrix a = random_matrix(dim, dim, rng);
  const Metric m(a * a.transpose() + 0.1 * Matrix::Identity(dim, dim));
  const Tensor t = random_tensor(dim, {Variance::Lower, Variance::Lower, Variance::Lower, Variance::Lower}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(contract(t, 0, 3, m));
}
BENCHMARK(BM_Contract)->Arg(4)->Arg(6)->Arg(8);

static void BM_OracleContract(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(1);
  const Matrix a = random_matrix(dim, dim, rng);
  const Metric m(a * a.transpose() + 0.1 * Matrix::Identity(dim, dim));
  const Tensor t = random_tensor(dim, {Variance::Lower, Variance::Lower, Variance::Lower, Variance::Lower}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_contract(t, 0, 3, m));
}
BENCHMARK(BM_OracleContract)->Arg(4)->Arg(6)->Arg(8);

static void BM_FlowRhs(benchmark::State& state) {
  const Scenario s = builtin("kodaira_thurston");
  for (auto _ : state) benchmark::DoNotOptimize(flow_rhs(s.pair, s.algebra));
}
BENCHMARK(BM_FlowRhs);

static void BM_FlowRhsRandom6(benchmark::State& state) {
  Rng rng(2);
  const auto alg = LieAlgebraSpec::from_brackets("iwasawa", 6,
                                                 {{0, 2, 4, -1.0}, {1, 3, 4, 1.0}, {0, 3, 5, -1.0}, {1, 2, 5, -1.0}});
  const auto pair = random_compatible_pair(6, rng);
  for (auto _ : state) benchmark::DoNotOptimize(flow_rhs(pair, alg));
}
BENCHMARK(BM_FlowRhsRandom6);

static void BM_Rk4Step(benchmark::State& state) {
  const Scenario s = builtin("kodaira_thurston");
  const FlowState st{0.0, s.pair};
  for (auto _ : state) benchmark::DoNotOptimize(step(st, 1e-3, s.algebra));
}
BENCHMARK(BM_Rk4Step);

BENCHMARK_MAIN();
