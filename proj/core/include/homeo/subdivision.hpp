#pragma once

#include <map>

#include "homeo/hypergraph.hpp"

namespace homeo {

/// The canonical subdivision of a k-complex: one fresh vertex v_T per subset
/// T of a facet with 2 ≤ |T| ≤ k+1, and one facet {v, v_T2, ..., v_S} per
/// maximal chain {v} ⊂ T2 ⊂ ... ⊂ S through each original facet S. The same
/// edge set is exposed both as a complex and as a (k+1)-partite graph with
/// classes V_1 = original vertices and V_t = {v_T : |T| = t}.
struct SubdivisionResult {
  SimplicialComplex complex;
  PartitionedHypergraph partition;
  std::map<Edge, Vertex> new_vertex_index;  // subset T (sorted) -> v_T
};

/// Build the canonical subdivision. Fresh vertex ids start past the largest
/// input id and are assigned in (|T|, lexicographic T) order, so identical
/// input yields bit-identical output. Requires dimension ≥ 1.
SubdivisionResult canonical_subdivide(const SimplicialComplex& s);

/// Check the subdivision invariants: the facet count is (k+1)! per original
/// facet (top-class vertices stand in for the original facets), classes
/// consist of the advertised vertices, every facet is a chain through the
/// subset index, every v_T of class t has degree exactly t! in trace_t, and
/// the partition is d-trace-bounded.
bool certify_subdivision(const SubdivisionResult& r, std::size_t d);

/// The (k+1)-partite view of the subdivision, ready to be used as the
/// pattern whose containment certifies a homeomorph of s.
PartitionedHypergraph homeomorph_target(const SimplicialComplex& s);

}  // namespace homeo
