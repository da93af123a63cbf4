#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "homeo/hypergraph.hpp"

namespace homeo {

/// An isomorphism class of nonempty r-partite r-graphs, where isomorphisms
/// respect the class order (V_i maps to V_i). The code is the lexicographic
/// minimum, over within-class relabelings, of the sorted list of per-class
/// label tuples, rendered as a printable string.
struct IsoClass {
  std::string code;
  PartitionedHypergraph rep;  // canonically labeled representative
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  std::uint64_t automorphisms = 1;  // class-order-respecting automorphisms
};

struct CanonicalResult {
  IsoClass cls;
  /// rep vertex id -> input vertex id, witnessing one minimal relabeling.
  std::vector<std::pair<Vertex, Vertex>> rep_to_input;
};

/// Canonical form of a nonempty partitioned graph with every vertex covered
/// by an edge (isolated vertex: domain error). Supports uniformity up to 8.
CanonicalResult canonical_form(const PartitionedHypergraph& j);

/// H(r, d): all isomorphism classes of nonempty r-partite r-graphs with at
/// most d edges, built by edge-by-edge growth with canonical deduplication.
/// Sorted by (edge count, vertex count, code). Guard: r*d <= guard.
std::vector<IsoClass> enumerate_family(int r, int d, int guard = 12);

struct SubgraphCopy {
  std::vector<Edge> edges;  // subset of the host's edges, sorted
  std::vector<std::pair<Vertex, Vertex>> rep_to_host;
};

struct SubgraphClassCopies {
  IsoClass cls;
  std::vector<SubgraphCopy> copies;
};

/// Every nonempty edge subset of H with at most d edges, grouped by
/// isomorphism class. The number of subsets is guarded by cap.
std::vector<SubgraphClassCopies> subgraphs_up_to_d(
    const PartitionedHypergraph& h, int d, std::size_t cap = 1000000);

}  // namespace homeo
