#include <benchmark/benchmark.h>

#include "pcaq/algorithms.hpp"
#include "pcaq/instance.hpp"
#include "pcaq/oracle.hpp"
#include "pcaq/rng.hpp"

using namespace pcaq;

static void BM_SampleGoe(benchmark::State& st) {
  const auto d = static_cast<Eigen::Index>(st.range(0));
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(sample_goe(d, seed++));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_SampleGoe)->RangeMultiplier(2)->Range(256, 2048)->Complexity(benchmark::oNSquared);

static void BM_OracleQuery(benchmark::State& st) {
  const auto d = static_cast<Eigen::Index>(st.range(0));
  const SpikedInstance inst = make_spiked(d, 3.0, 1);
  const int budget = 32;
  std::uint64_t seed = 0;
  for (auto _ : st) {
    st.PauseTiming();
    QuerySession s(inst, budget);
    std::vector<Vec> qs;
    for (int i = 0; i < budget; ++i) qs.push_back(sample_uniform_sphere(d, seed++));
    st.ResumeTiming();
    for (const Vec& q : qs) benchmark::DoNotOptimize(s.query(q));
  }
  st.SetItemsProcessed(st.iterations() * budget);
}
BENCHMARK(BM_OracleQuery)->Arg(500)->Arg(2000);

static void BM_Algorithm(benchmark::State& st) {
  const auto kind = static_cast<AlgorithmKind>(st.range(0));
  const SpikedInstance inst = make_spiked(2000, 3.0, 2);
  AlgorithmConfig cfg;
  cfg.kind = kind;
  cfg.budget = 20;
  for (auto _ : st) {
    QuerySession s(inst, cfg.budget);
    benchmark::DoNotOptimize(run_algorithm(s, cfg));
    ++cfg.seed;
  }
  st.SetLabel(to_string(kind));
}
BENCHMARK(BM_Algorithm)->DenseRange(0, 2);

static void BM_DenseSpectrum(benchmark::State& st) {
  const SymmetricMatrix w = sample_goe(static_cast<Eigen::Index>(st.range(0)), 3);
  for (auto _ : st) benchmark::DoNotOptimize(eigenvalues_desc(w));
}
BENCHMARK(BM_DenseSpectrum)->Arg(256)->Arg(1024);

static void BM_OpNormKrylov(benchmark::State& st) {
  const SymmetricMatrix w = sample_goe(static_cast<Eigen::Index>(st.range(0)), 4);
  for (auto _ : st) benchmark::DoNotOptimize(op_norm(w));
}
BENCHMARK(BM_OpNormKrylov)->Arg(1024)->Arg(4096);
BENCHMARK_MAIN();
