#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "homeo/util.hpp"

namespace homeo {

using Vertex = int;
using Edge = std::vector<Vertex>;        // sorted, distinct entries
using SetFamily = std::vector<Edge>;     // sorted lexicographically, distinct

/// An r-uniform hypergraph. Immutable after construction: edges are stored
/// sorted (vertex ids ascending within an edge, edges lexicographic) and
/// deduplicated; the vertex set is the union of the edges unless extra
/// isolated vertices are supplied explicitly.
class Hypergraph {
 public:
  explicit Hypergraph(int r);

  /// Vertex set = union of the edges.
  static Hypergraph from_edges(int r, std::vector<Edge> edges);

  /// Explicit vertex set; must contain every vertex used by an edge.
  static Hypergraph with_vertices(int r, std::vector<Vertex> vertices,
                                  std::vector<Edge> edges);

  int uniformity() const { return r_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_vertex(Vertex v) const;
  bool has_edge(const Edge& e) const;  // e need not be pre-sorted

 private:
  int r_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
};

/// Link L(v, G): the (r-1)-graph {S : {v} ∪ S ∈ E(G)}. Requires r ≥ 2.
/// The result's vertex set is the union of its edges.
Hypergraph link(const Hypergraph& g, Vertex v);

/// Number of edges of G containing v. Unknown vertex is a domain error;
/// a known isolated vertex has degree 0.
std::size_t degree(const Hypergraph& g, Vertex v);

/// Common neighbourhood Γ(J, G) of an (r-1)-graph J inside the r-graph G:
/// all v ∈ V(G) with {v} ∪ S ∈ E(G) for every edge S of J. J must be
/// nonempty with V(J) ⊆ V(G).
std::vector<Vertex> common_neighbourhood(const Hypergraph& g,
                                         const Hypergraph& j);

/// Trace Tr(G, U) = { S ∩ U : S ∈ E(G) }, as a deduplicated set family with
/// the empty intersection excluded.
SetFamily trace(const Hypergraph& g, const std::vector<Vertex>& u);

struct TraceBoundWitness {
  int level = 0;      // class index i (1-based) where the bound fails
  Vertex vertex = 0;  // offending vertex of V_i
  std::size_t deg = 0;
};

/// An r-partite r-graph with ordered classes V_1, ..., V_r. Classes are
/// disjoint, cover the vertex set, and every edge meets each class exactly
/// once. Class order is structural: permuting classes yields a different
/// object.
class PartitionedHypergraph {
 public:
  PartitionedHypergraph(Hypergraph base, std::vector<std::vector<Vertex>> classes);

  const Hypergraph& base() const { return base_; }
  int uniformity() const { return base_.uniformity(); }
  const std::vector<std::vector<Vertex>>& classes() const { return classes_; }
  const std::vector<Edge>& edges() const { return base_.edges(); }

  /// 1-based class index of a vertex; domain error if unknown.
  int class_of(Vertex v) const;

  /// Edge vertices ordered by class (class 1 first).
  Edge edge_by_class(const Edge& e) const;

 private:
  Hypergraph base_;
  std::vector<std::vector<Vertex>> classes_;
  std::vector<std::pair<Vertex, int>> class_of_;  // sorted by vertex
};

/// Tr_i(G) = Tr(G, V_1 ∪ ... ∪ V_i) as an i-partite i-graph with classes
/// V_1, ..., V_i. Projected edges are deduplicated. 1 ≤ i ≤ r.
PartitionedHypergraph trace_i(const PartitionedHypergraph& g, int i);

/// d-trace-boundedness: Deg(v, Tr_i(G)) ≤ d for every 2 ≤ i ≤ r and every
/// v ∈ V_i. Monotone in d; vacuous for r = 1. On failure the witness names
/// the first offending (i, v, degree).
std::optional<TraceBoundWitness> trace_bound_violation(
    const PartitionedHypergraph& g, std::size_t d);
bool is_trace_bounded(const PartitionedHypergraph& g, std::size_t d);

struct ExtractOptions {
  double fail_probability = 1e-6;  // drives the number of random tries
  std::uint64_t exact_search_budget = 200000;  // nodes for the lossless pass
};

/// Balanced r-partition extraction: returns an r-partite subgraph with
/// classes of size n keeping at least (r!/r^r)·e(G) edges. Vertices are
/// padded with fresh isolated ones up to r·n (more than r·n is a domain
/// error). A bounded exact search first looks for a lossless balanced
/// partition (so already-partite inputs come back intact); then random
/// balanced partitions; a derandomized conditional-expectation pass is the
/// deterministic fallback that always meets the bound.
PartitionedHypergraph extract_partite(const Hypergraph& g, std::size_t n,
                                      std::uint64_t seed,
                                      const ExtractOptions& opts = {});

/// A homogeneous simplicial complex of dimension k given by its facets,
/// each of size k+1, stored as the (k+1)-graph of facets.
class SimplicialComplex {
 public:
  static SimplicialComplex from_facets(int k, std::vector<Edge> facets);
  static SimplicialComplex from_hypergraph(const Hypergraph& g);

  int dimension() const { return k_; }
  const std::vector<Edge>& facets() const { return facets_.edges(); }
  const Hypergraph& as_hypergraph() const { return facets_; }

 private:
  SimplicialComplex(int k, Hypergraph facets) : k_(k), facets_(std::move(facets)) {}
  int k_;
  Hypergraph facets_;
};

}  // namespace homeo
