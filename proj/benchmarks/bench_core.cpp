#include <benchmark/benchmark.h>

#include "homeo/embedding.hpp"
#include "homeo/experiments.hpp"
#include "homeo/family.hpp"
#include "homeo/oracle.hpp"
#include "homeo/subdivision.hpp"

namespace {

using namespace homeo;

SimplicialComplex simplex(int k) {
  Edge facet;
  for (int v = 0; v <= k; ++v) facet.push_back(static_cast<Vertex>(v));
  return SimplicialComplex::from_facets(k, {facet});
}

void BM_Subdivide(benchmark::State& state) {
  SimplicialComplex s = simplex(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto result = canonical_subdivide(s);
    benchmark::DoNotOptimize(result.partition.edges().size());
  }
}
BENCHMARK(BM_Subdivide)->Arg(2)->Arg(3)->Arg(4);

void BM_FamilyEnumeration(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto classes = enumerate_family(r, d);
    benchmark::DoNotOptimize(classes.size());
  }
}
BENCHMARK(BM_FamilyEnumeration)->Args({2, 4})->Args({2, 6})->Args({3, 3});

void BM_CanonicalForm(benchmark::State& state) {
  // Two overlapping rainbow edges plus a pendant: a mid-size pattern.
  PartitionedHypergraph p(
      Hypergraph::with_vertices(3, {0, 1, 2, 3, 4, 5, 6},
                                {{0, 2, 4}, {0, 3, 5}, {1, 3, 6}}),
      {{0, 1}, {2, 3}, {4, 5, 6}});
  for (auto _ : state) {
    auto c = canonical_form(p);
    benchmark::DoNotOptimize(c.cls.code.size());
  }
}
BENCHMARK(BM_CanonicalForm);

void BM_OracleFourCycle(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  PartitionedHypergraph c4(
      Hypergraph::with_vertices(2, {0, 1, 2, 3}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}),
      {{0, 1}, {2, 3}});
  PartitionedHypergraph host = random_partite_edges(2, n, 3 * n, 20240817);
  for (auto _ : state) {
    auto found = find_embedding(c4, host);
    benchmark::DoNotOptimize(found.has_value());
  }
}
BENCHMARK(BM_OracleFourCycle)->Arg(16)->Arg(32);

void BM_PipelinePath(benchmark::State& state) {
  SimplicialComplex path = SimplicialComplex::from_facets(1, {{0, 1}, {1, 2}});
  PartitionedHypergraph target = homeomorph_target(path);
  PartitionedHypergraph host = random_partite(2, 24, 0.6, 777);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto out = run_pipeline(host.base(), target, 2, ++seed);
    benchmark::DoNotOptimize(std::holds_alternative<EmbeddingMap>(out));
  }
}
BENCHMARK(BM_PipelinePath);

}  // namespace

BENCHMARK_MAIN();
