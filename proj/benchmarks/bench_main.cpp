#include <benchmark/benchmark.h>

#include <random>

#include "ksubdiv/certify.hpp"
#include "ksubdiv/construction.hpp"
#include "ksubdiv/identities.hpp"
#include "ksubdiv/multipoly.hpp"

using namespace ksubdiv;

namespace {

void BM_Census(benchmark::State& state) {
  Graph g(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(census(g));
  state.counters["vertices"] = static_cast<double>(g.vertex_count());
}
BENCHMARK(BM_Census)->Arg(29)->Arg(59)->Arg(101)->Unit(benchmark::kMillisecond);

void BM_CountSequences(benchmark::State& state) {
  Graph g(static_cast<std::uint64_t>(state.range(0)));
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> pick(0, g.vertex_count() - 1);
  std::vector<Triple> ts;
  while (ts.size() < 256) {
    Triple t{g.vertex_at(pick(rng)), g.vertex_at(pick(rng)), g.vertex_at(pick(rng))};
    if (t[0] != t[1] && t[0] != t[2] && t[1] != t[2]) ts.push_back(t);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& t = ts[i++ % ts.size()];
    benchmark::DoNotOptimize(count_sequences(g, t[0], t[1], t[2]).count);
  }
}
BENCHMARK(BM_CountSequences)->Arg(23)->Arg(29)->Arg(47);

void BM_SequenceCensus(benchmark::State& state) {
  Graph g(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(certify_sequence_bound(g).per_triple_max);
}
BENCHMARK(BM_SequenceCensus)->Arg(23)->Arg(29)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_Resultant(benchmark::State& state) {
  const auto& t = identity_table();
  auto f = MPolynomial::parse(t, "a2 - w2 - x1^2*(a1 - w1)");
  auto g = MPolynomial::parse(t, "b2 - w2 - y1^2*(b1 - w1)");
  auto h = resultant(f, MPolynomial::parse(t, "a3 - w3 - x1*(a1^2 - w1^2)"), "x1");
  for (auto _ : state) benchmark::DoNotOptimize(resultant(h, g - f, "w2"));
}
BENCHMARK(BM_Resultant)->Unit(benchmark::kMicrosecond);

void BM_IdentityCatalog(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run_catalog().size());
}
BENCHMARK(BM_IdentityCatalog)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
