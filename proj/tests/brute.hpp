// Naive reference implementations used to cross-check the library: plain
// nested recursion over vertex vectors, no bitmasks, no canonical codes, no
// budgets. Everything here trades speed for obviousness on purpose.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "homeo/hypergraph.hpp"

namespace homeo::brute {

using ImageFamily = SetFamily;  // sorted edges, sorted family

inline ImageFamily apply_map(const SetFamily& edges, const std::map<Vertex, Vertex>& m) {
  ImageFamily out;
  for (const auto& e : edges) {
    Edge me;
    for (Vertex v : e) me.push_back(m.at(v));
    std::sort(me.begin(), me.end());
    out.push_back(me);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Every class-respecting injective map sending pattern edges onto host
/// edges, reported through `emit` as (map, image family). No pruning beyond
/// edge membership at the leaves.
inline void for_each_embedding(
    const PartitionedHypergraph& pattern, const PartitionedHypergraph& host,
    const std::function<void(const std::map<Vertex, Vertex>&, const ImageFamily&)>& emit) {
  std::vector<Vertex> pverts;
  for (const auto& c : pattern.classes()) pverts.insert(pverts.end(), c.begin(), c.end());
  std::map<Vertex, Vertex> assign;
  std::set<Vertex> used;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == pverts.size()) {
      for (const auto& e : pattern.edges()) {
        Edge me;
        for (Vertex v : e) me.push_back(assign.at(v));
        if (!host.base().has_edge(me)) return;
      }
      emit(assign, apply_map(pattern.edges(), assign));
      return;
    }
    Vertex pv = pverts[k];
    int cls = pattern.class_of(pv);
    for (Vertex hv : host.classes()[static_cast<std::size_t>(cls - 1)]) {
      if (used.count(hv)) continue;
      assign[pv] = hv;
      used.insert(hv);
      rec(k + 1);
      used.erase(hv);
      assign.erase(pv);
    }
  };
  rec(0);
}

/// Distinct copy images of the pattern in the host.
inline std::set<ImageFamily> copies(const PartitionedHypergraph& pattern,
                                    const PartitionedHypergraph& host) {
  std::set<ImageFamily> images;
  for_each_embedding(pattern, host,
                     [&](const std::map<Vertex, Vertex>&, const ImageFamily& img) {
                       images.insert(img);
                     });
  return images;
}

/// Class-respecting isomorphism test via exhaustive per-class bijections.
inline bool isomorphic(const PartitionedHypergraph& a, const PartitionedHypergraph& b) {
  if (a.uniformity() != b.uniformity()) return false;
  if (a.edges().size() != b.edges().size()) return false;
  for (std::size_t c = 0; c < a.classes().size(); ++c)
    if (a.classes()[c].size() != b.classes()[c].size()) return false;
  std::set<Edge> bedges(b.edges().begin(), b.edges().end());
  std::vector<std::vector<Vertex>> perms = b.classes();
  std::function<bool(std::size_t)> tryclass = [&](std::size_t c) -> bool {
    if (c == perms.size()) {
      std::map<Vertex, Vertex> m;
      for (std::size_t k = 0; k < perms.size(); ++k)
        for (std::size_t t = 0; t < perms[k].size(); ++t) m[a.classes()[k][t]] = perms[k][t];
      ImageFamily mapped = apply_map(a.edges(), m);
      return std::set<Edge>(mapped.begin(), mapped.end()) == bedges;
    }
    std::sort(perms[c].begin(), perms[c].end());
    do {
      if (tryclass(c + 1)) return true;
    } while (std::next_permutation(perms[c].begin(), perms[c].end()));
    return false;
  };
  return tryclass(0);
}

/// All r-partite graphs with 1..d edges on classes of size d, up to
/// class-respecting isomorphism, counted by exhaustive generation plus
/// pairwise brute isomorphism tests. Exponential; keep r*d tiny.
inline std::vector<PartitionedHypergraph> family(int r, int d) {
  std::vector<std::vector<Vertex>> classes(static_cast<std::size_t>(r));
  for (int c = 0; c < r; ++c)
    for (int k = 0; k < d; ++k)
      classes[static_cast<std::size_t>(c)].push_back(c * d + k);
  // all rainbow tuples
  SetFamily tuples;
  Edge cur(static_cast<std::size_t>(r));
  std::function<void(int)> gen = [&](int c) {
    if (c == r) {
      Edge e = cur;
      std::sort(e.begin(), e.end());
      tuples.push_back(e);
      return;
    }
    for (Vertex v : classes[static_cast<std::size_t>(c)]) {
      cur[static_cast<std::size_t>(c)] = v;
      gen(c + 1);
    }
  };
  gen(0);

  std::vector<PartitionedHypergraph> reps;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> subsets = [&](std::size_t from) {
    if (!pick.empty()) {
      SetFamily edges;
      for (std::size_t idx : pick) edges.push_back(tuples[idx]);
      Hypergraph base = Hypergraph::from_edges(r, edges);
      // normalize to covered vertices per class
      std::vector<std::vector<Vertex>> covered(static_cast<std::size_t>(r));
      for (int c = 0; c < r; ++c)
        for (Vertex v : classes[static_cast<std::size_t>(c)])
          if (base.has_vertex(v)) covered[static_cast<std::size_t>(c)].push_back(v);
      PartitionedHypergraph g(base, covered);
      bool seen = false;
      for (const auto& rep : reps)
        if (isomorphic(g, rep)) {
          seen = true;
          break;
        }
      if (!seen) reps.push_back(std::move(g));
    }
    if (pick.size() == static_cast<std::size_t>(d)) return;
    for (std::size_t j = from; j < tuples.size(); ++j) {
      pick.push_back(j);
      subsets(j + 1);
      pick.pop_back();
    }
  };
  subsets(0);
  return reps;
}

}  // namespace homeo::brute
