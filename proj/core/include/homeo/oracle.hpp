#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homeo/family.hpp"
#include "homeo/hypergraph.hpp"

namespace homeo {

/// One unlabeled copy (distinct image) of a pattern in a host. Witness maps
/// with the same image differ by an automorphism of the pattern and are
/// collapsed into a single record.
struct CopyRecord {
  std::string class_code;       // canonical code of the pattern
  std::vector<Edge> image;      // the copy's edges in the host, sorted
  std::vector<std::pair<Vertex, Vertex>> witness_map;  // canonical rep -> host
};

struct SearchOptions {
  std::uint64_t node_budget = 50000000;  // backtracking nodes before bailing
  std::size_t max_host_vertices = 64;
  std::size_t max_pattern_edges = 12;
  /// Fail-first candidate ordering (smallest common neighbourhood next).
  /// Counts are identical either way; only the visit order changes.
  bool use_ordering_heuristic = true;
};

/// Exhaustive class-respecting monomorphism search: an injective map sending
/// class i of H into class i of G and every edge of H onto an edge of G.
/// Returns one witness (H vertex -> G vertex, sorted) or nothing.
std::optional<std::vector<std::pair<Vertex, Vertex>>> find_embedding(
    const PartitionedHypergraph& h, const PartitionedHypergraph& g,
    const SearchOptions& opts = {});

/// All unlabeled copies of J in G (class-respecting, distinct images).
std::vector<CopyRecord> count_copies(const PartitionedHypergraph& j,
                                     const PartitionedHypergraph& g,
                                     const SearchOptions& opts = {});

/// Copies J' of J in G whose trace onto the first i classes equals L as a
/// set family, where J is (i+1)-uniform and L lists edges of trace_i(G).
/// An edge of L outside trace_i(G) is a domain error.
std::vector<CopyRecord> copies_extending(const PartitionedHypergraph& j,
                                         const PartitionedHypergraph& g,
                                         const SetFamily& l,
                                         const SearchOptions& opts = {});

struct VerifyResult {
  bool ok = false;
  std::string violation;  // empty when ok; names the first failure otherwise
};

/// Independent check that map is an injective, class-respecting embedding of
/// H into G covering every H vertex and sending every H edge to a G edge.
VerifyResult verify_embedding(
    const std::vector<std::pair<Vertex, Vertex>>& map,
    const PartitionedHypergraph& h, const PartitionedHypergraph& g);

}  // namespace homeo
