#include "homeo/subdivision.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace homeo {

SubdivisionResult canonical_subdivide(const SimplicialComplex& s) {
  const int k = s.dimension();
  const auto& facets = s.facets();

  // every subset T of a facet with 2 <= |T| <= k+1 gets one shared vertex
  std::set<Edge> subsets;
  for (const auto& f : facets) {
    const int fs = static_cast<int>(f.size());
    for (unsigned bits = 1; bits < (1u << fs); ++bits) {
      if (std::popcount(bits) < 2) continue;
      Edge t;
      for (int i = 0; i < fs; ++i)
        if (bits & (1u << i)) t.push_back(f[i]);
      subsets.insert(std::move(t));
    }
  }

  Vertex next = 0;
  for (const auto& f : facets) next = std::max(next, f.back());
  ++next;

  std::map<Edge, Vertex> index;
  for (int size = 2; size <= k + 1; ++size)
    for (const auto& t : subsets)
      if (static_cast<int>(t.size()) == size) index.emplace(t, next++);

  // one subdivided facet per maximal chain through each original facet
  std::vector<Edge> chains;
  for (const auto& f : facets) {
    Edge perm = f;
    std::sort(perm.begin(), perm.end());
    do {
      Edge chain{perm[0]};
      Edge prefix{perm[0]};
      for (int i = 1; i <= k; ++i) {
        prefix.push_back(perm[i]);
        Edge key = prefix;
        std::sort(key.begin(), key.end());
        chain.push_back(index.at(key));
      }
      chains.push_back(std::move(chain));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  std::vector<std::vector<Vertex>> classes(k + 1);
  classes[0] = s.as_hypergraph().vertices();
  for (const auto& [t, v] : index) classes[t.size() - 1].push_back(v);
  for (auto& c : classes) std::sort(c.begin(), c.end());

  Hypergraph graph = Hypergraph::from_edges(k + 1, chains);
  return SubdivisionResult{SimplicialComplex::from_facets(k, chains),
                           PartitionedHypergraph(graph, classes),
                           std::move(index)};
}

bool certify_subdivision(const SubdivisionResult& r, std::size_t d) {
  const int k = r.complex.dimension();
  const PartitionedHypergraph& p = r.partition;
  if (p.uniformity() != k + 1) return false;
  if (p.edges() != r.complex.facets()) return false;

  // the top class lists one vertex per original facet
  std::size_t factorial = 1;
  for (int i = 2; i <= k + 1; ++i) factorial *= i;
  if (p.edges().size() != factorial * p.classes()[k].size()) return false;

  // classes match the subset index: V_t = {v_T : |T| = t}, V_1 disjoint
  std::vector<std::vector<Vertex>> expect(k + 1);
  for (const auto& [t, v] : r.new_vertex_index) {
    if (t.size() < 2 || static_cast<int>(t.size()) > k + 1) return false;
    expect[t.size() - 1].push_back(v);
  }
  for (int t = 2; t <= k + 1; ++t) {
    std::sort(expect[t - 1].begin(), expect[t - 1].end());
    if (expect[t - 1] != p.classes()[t - 1]) return false;
  }
  for (Vertex v : p.classes()[0])
    for (const auto& [t, w] : r.new_vertex_index) {
      (void)t;
      if (v == w) return false;
    }

  // every facet is a maximal chain: {x} ⊂ T_2 ⊂ ... ⊂ T_{k+1}, |T_t| = t
  std::map<Vertex, const Edge*> subset_of;
  for (const auto& [t, v] : r.new_vertex_index) subset_of[v] = &t;
  for (const auto& f : p.edges()) {
    Edge byclass = p.edge_by_class(f);
    Edge prev{byclass[0]};
    for (int t = 2; t <= k + 1; ++t) {
      auto it = subset_of.find(byclass[t - 1]);
      if (it == subset_of.end()) return false;
      const Edge& cur = *it->second;
      if (cur.size() != static_cast<std::size_t>(t)) return false;
      if (!std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()))
        return false;
      prev = cur;
    }
  }

  // sharp trace degrees: v_T of class t has degree exactly t! in trace_t
  std::size_t tfact = 1;
  for (int t = 2; t <= k + 1; ++t) {
    tfact *= t;
    PartitionedHypergraph tr = trace_i(p, t);
    for (Vertex v : p.classes()[t - 1])
      if (degree(tr.base(), v) != tfact) return false;
  }

  return is_trace_bounded(p, d);
}

PartitionedHypergraph homeomorph_target(const SimplicialComplex& s) {
  return canonical_subdivide(s).partition;
}

}  // namespace homeo
