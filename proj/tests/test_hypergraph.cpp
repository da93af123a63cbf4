#include <doctest.h>

#include <algorithm>
#include <set>

#include "homeo/hypergraph.hpp"

using namespace homeo;

TEST_CASE("edges are normalized and deduplicated") {
  Hypergraph g = Hypergraph::from_edges(2, {{3, 1}, {1, 3}, {2, 1}});
  CHECK(g.edge_count() == 2);
  CHECK(g.edges()[0] == Edge{1, 2});
  CHECK(g.edges()[1] == Edge{1, 3});
  CHECK(g.vertices() == std::vector<Vertex>{1, 2, 3});
  CHECK(g.has_edge({3, 1}));
  CHECK_FALSE(g.has_edge({2, 3}));
  CHECK_THROWS_AS(Hypergraph::from_edges(2, {{1, 1}}), DomainError);
  CHECK_THROWS_AS(Hypergraph::from_edges(2, {{1, 2, 3}}), DomainError);
  CHECK_THROWS_AS(Hypergraph::with_vertices(2, {1, 2}, {{1, 3}}), DomainError);
}

TEST_CASE("link and degree") {
  Hypergraph g = Hypergraph::from_edges(3, {{0, 1, 2}, {0, 1, 3}, {1, 2, 3}});
  Hypergraph l = link(g, 0);
  CHECK(l.uniformity() == 2);
  CHECK(l.edges() == SetFamily{{1, 2}, {1, 3}});
  CHECK(degree(g, 1) == 3);
  CHECK(degree(g, 3) == 2);
  CHECK_THROWS_AS(degree(g, 9), DomainError);
  Hypergraph iso = Hypergraph::with_vertices(2, {0, 1, 5}, {{0, 1}});
  CHECK(degree(iso, 5) == 0);
  CHECK(link(iso, 5).edge_count() == 0);
}

TEST_CASE("common neighbourhood completes every edge") {
  Hypergraph g = Hypergraph::from_edges(2, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {4, 2}});
  Hypergraph j1 = Hypergraph::from_edges(1, {{2}});
  auto gamma = common_neighbourhood(g, j1);
  CHECK(gamma == std::vector<Vertex>{0, 1, 4});
  Hypergraph j2 = Hypergraph::from_edges(1, {{2}, {3}});
  CHECK(common_neighbourhood(g, j2) == std::vector<Vertex>{0, 1});
}

TEST_CASE("trace deduplicates and drops empty intersections") {
  Hypergraph g = Hypergraph::from_edges(3, {{0, 1, 4}, {0, 1, 5}, {2, 3, 4}, {6, 7, 8}});
  auto tr = trace(g, {0, 1, 2});
  CHECK(tr == SetFamily{{0, 1}, {2}});
}

TEST_CASE("partitioned graph validates classes") {
  Hypergraph base = Hypergraph::from_edges(2, {{0, 2}, {1, 3}});
  PartitionedHypergraph g(base, {{0, 1}, {2, 3}});
  CHECK(g.class_of(0) == 1);
  CHECK(g.class_of(3) == 2);
  CHECK(g.edge_by_class({2, 0}) == Edge{0, 2});
  CHECK_THROWS_AS(PartitionedHypergraph(base, {{0, 1, 2}, {3}}), DomainError);   // edge inside V1
  CHECK_THROWS_AS(PartitionedHypergraph(base, {{0, 1}, {2}}), DomainError);      // 3 uncovered
  CHECK_THROWS_AS(PartitionedHypergraph(base, {{0, 1, 2}, {2, 3}}), DomainError);  // overlap
}

TEST_CASE("trace_i keeps the first i classes") {
  Hypergraph base = Hypergraph::from_edges(3, {{0, 2, 4}, {0, 2, 5}, {1, 3, 4}});
  PartitionedHypergraph g(base, {{0, 1}, {2, 3}, {4, 5}});
  auto t2 = trace_i(g, 2);
  CHECK(t2.uniformity() == 2);
  CHECK(t2.edges() == SetFamily{{0, 2}, {1, 3}});  // {0,2} appears once
  CHECK(t2.classes()[0] == std::vector<Vertex>{0, 1});
  auto t3 = trace_i(g, 3);
  CHECK(t3.edges().size() == 3);
}

TEST_CASE("trace boundedness witnesses the first violation") {
  // vertex 4 lies in two distinct level-3 trace edges; 2-bounded, not 1-bounded
  Hypergraph base = Hypergraph::from_edges(3, {{0, 2, 4}, {1, 3, 4}});
  PartitionedHypergraph g(base, {{0, 1}, {2, 3}, {4}});
  CHECK(is_trace_bounded(g, 2));
  CHECK_FALSE(is_trace_bounded(g, 1));
  auto w = trace_bound_violation(g, 1);
  REQUIRE(w.has_value());
  CHECK(w->level == 3);
  CHECK(w->vertex == 4);
  CHECK(w->deg == 2);
}

TEST_CASE("balanced extraction recovers a partite input exactly") {
  // already 2-partite: classes {0,1,2} and {3,4,5}
  Hypergraph g = Hypergraph::from_edges(2, {{0, 3}, {0, 4}, {1, 4}, {2, 5}, {1, 5}});
  PartitionedHypergraph p = extract_partite(g, 3, 99);
  CHECK(p.edges().size() == g.edge_count());  // lossless
  CHECK(p.classes()[0].size() == 3);
  CHECK(p.classes()[1].size() == 3);
}

TEST_CASE("balanced extraction keeps the average-case edge share") {
  // complete 2-graph on 8 vertices: any balanced 2-partition keeps 16 of 28
  SetFamily edges;
  for (Vertex a = 0; a < 8; ++a)
    for (Vertex b = a + 1; b < 8; ++b) edges.push_back({a, b});
  Hypergraph g = Hypergraph::from_edges(2, edges);
  PartitionedHypergraph p = extract_partite(g, 4, 7);
  // bound: (r!/r^r) e(G) = 28/2 = 14
  CHECK(p.edges().size() >= 14);
  for (const auto& e : p.edges()) {
    CHECK(p.class_of(e[0]) != p.class_of(e[1]));
  }
}

TEST_CASE("extraction pads short vertex sets and rejects oversized ones") {
  Hypergraph tiny = Hypergraph::from_edges(2, {{0, 1}});
  PartitionedHypergraph p = extract_partite(tiny, 3, 1);
  CHECK(p.classes()[0].size() == 3);
  CHECK(p.classes()[1].size() == 3);
  CHECK(p.edges().size() == 1);
  CHECK_THROWS_AS(extract_partite(tiny, 0, 1), DomainError);
  SetFamily many;
  for (Vertex v = 0; v < 9; ++v) many.push_back({v, static_cast<Vertex>(v + 9)});
  CHECK_THROWS_AS(extract_partite(Hypergraph::from_edges(2, many), 2, 1), DomainError);
}

TEST_CASE("simplicial complexes expose facets both ways") {
  SimplicialComplex s = SimplicialComplex::from_facets(2, {{0, 1, 2}, {1, 2, 3}});
  CHECK(s.dimension() == 2);
  CHECK(s.facets().size() == 2);
  CHECK(s.as_hypergraph().uniformity() == 3);
  SimplicialComplex copy = SimplicialComplex::from_hypergraph(s.as_hypergraph());
  CHECK(copy.facets() == s.facets());
  CHECK_THROWS_AS(SimplicialComplex::from_facets(2, {{0, 1}}), DomainError);
}
