#include "homeo/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace homeo {

namespace {

Edge normalized_edge(Edge e, int r) {
  if (static_cast<int>(e.size()) != r)
    throw DomainError("edge has " + std::to_string(e.size()) +
                      " vertices, expected " + std::to_string(r));
  std::sort(e.begin(), e.end());
  if (std::adjacent_find(e.begin(), e.end()) != e.end())
    throw DomainError("edge contains a repeated vertex");
  return e;
}

std::vector<Edge> normalized_edges(std::vector<Edge> edges, int r) {
  for (auto& e : edges) e = normalized_edge(std::move(e), r);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

std::vector<Vertex> span_of(const std::vector<Edge>& edges) {
  std::vector<Vertex> vs;
  for (const auto& e : edges) vs.insert(vs.end(), e.begin(), e.end());
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

}  // namespace

Hypergraph::Hypergraph(int r) : r_(r) {
  if (r < 1) throw DomainError("uniformity must be at least 1");
}

Hypergraph Hypergraph::from_edges(int r, std::vector<Edge> edges) {
  Hypergraph g(r);
  g.edges_ = normalized_edges(std::move(edges), r);
  g.vertices_ = span_of(g.edges_);
  return g;
}

Hypergraph Hypergraph::with_vertices(int r, std::vector<Vertex> vertices,
                                     std::vector<Edge> edges) {
  Hypergraph g(r);
  g.edges_ = normalized_edges(std::move(edges), r);
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  for (const auto& e : g.edges_)
    for (Vertex v : e)
      if (!std::binary_search(vertices.begin(), vertices.end(), v))
        throw DomainError("edge uses vertex " + std::to_string(v) +
                          " missing from the vertex list");
  g.vertices_ = std::move(vertices);
  return g;
}

bool Hypergraph::has_vertex(Vertex v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

bool Hypergraph::has_edge(const Edge& e) const {
  Edge s(e);
  std::sort(s.begin(), s.end());
  return std::binary_search(edges_.begin(), edges_.end(), s);
}

Hypergraph link(const Hypergraph& g, Vertex v) {
  if (g.uniformity() < 2) throw DomainError("link requires uniformity >= 2");
  if (!g.has_vertex(v)) throw DomainError("link of unknown vertex");
  std::vector<Edge> out;
  for (const auto& e : g.edges()) {
    if (!std::binary_search(e.begin(), e.end(), v)) continue;
    Edge s;
    s.reserve(e.size() - 1);
    for (Vertex u : e)
      if (u != v) s.push_back(u);
    out.push_back(std::move(s));
  }
  return Hypergraph::from_edges(g.uniformity() - 1, std::move(out));
}

std::size_t degree(const Hypergraph& g, Vertex v) {
  if (!g.has_vertex(v)) throw DomainError("degree of unknown vertex");
  std::size_t d = 0;
  for (const auto& e : g.edges())
    if (std::binary_search(e.begin(), e.end(), v)) ++d;
  return d;
}

std::vector<Vertex> common_neighbourhood(const Hypergraph& g,
                                         const Hypergraph& j) {
  if (j.uniformity() != g.uniformity() - 1)
    throw DomainError("common neighbourhood needs a pattern of uniformity r-1");
  if (j.edge_count() == 0)
    throw DomainError("common neighbourhood of an empty family");
  for (Vertex v : j.vertices())
    if (!g.has_vertex(v))
      throw DomainError("pattern vertex " + std::to_string(v) +
                        " is not a vertex of the host");
  std::vector<Vertex> out;
  Edge probe;
  for (Vertex v : g.vertices()) {
    bool ok = true;
    for (const auto& s : j.edges()) {
      if (std::binary_search(s.begin(), s.end(), v)) {
        ok = false;
        break;
      }
      probe = s;
      probe.insert(std::lower_bound(probe.begin(), probe.end(), v), v);
      if (!g.has_edge(probe)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(v);
  }
  return out;
}

SetFamily trace(const Hypergraph& g, const std::vector<Vertex>& u) {
  std::vector<Vertex> su(u);
  std::sort(su.begin(), su.end());
  su.erase(std::unique(su.begin(), su.end()), su.end());
  SetFamily fam;
  for (const auto& e : g.edges()) {
    Edge t;
    for (Vertex v : e)
      if (std::binary_search(su.begin(), su.end(), v)) t.push_back(v);
    if (!t.empty()) fam.push_back(std::move(t));
  }
  std::sort(fam.begin(), fam.end());
  fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
  return fam;
}

PartitionedHypergraph::PartitionedHypergraph(
    Hypergraph base, std::vector<std::vector<Vertex>> classes)
    : base_(std::move(base)), classes_(std::move(classes)) {
  if (static_cast<int>(classes_.size()) != base_.uniformity())
    throw DomainError("need exactly one class per uniformity level");
  for (auto& c : classes_) {
    std::sort(c.begin(), c.end());
    if (std::adjacent_find(c.begin(), c.end()) != c.end())
      throw DomainError("class contains a repeated vertex");
  }
  for (int i = 0; i < static_cast<int>(classes_.size()); ++i)
    for (Vertex v : classes_[i]) class_of_.emplace_back(v, i + 1);
  std::sort(class_of_.begin(), class_of_.end());
  for (std::size_t i = 1; i < class_of_.size(); ++i)
    if (class_of_[i].first == class_of_[i - 1].first)
      throw DomainError("classes are not disjoint");
  if (class_of_.size() != base_.vertex_count())
    throw DomainError("classes do not cover the vertex set exactly");
  for (Vertex v : base_.vertices())
    if (!std::binary_search(
            class_of_.begin(), class_of_.end(), std::make_pair(v, 0),
            [](const auto& a, const auto& b) { return a.first < b.first; }))
      throw DomainError("vertex missing from all classes");
  for (const auto& e : base_.edges()) {
    std::uint64_t seen = 0;
    for (Vertex v : e) {
      int c = class_of(v);
      if (seen & (1ULL << c))
        throw DomainError("edge meets a class twice");
      seen |= 1ULL << c;
    }
  }
}

int PartitionedHypergraph::class_of(Vertex v) const {
  auto it = std::lower_bound(
      class_of_.begin(), class_of_.end(), std::make_pair(v, 0),
      [](const auto& a, const auto& b) { return a.first < b.first; });
  if (it == class_of_.end() || it->first != v)
    throw DomainError("vertex " + std::to_string(v) + " has no class");
  return it->second;
}

Edge PartitionedHypergraph::edge_by_class(const Edge& e) const {
  Edge out(e.size());
  for (Vertex v : e) out[class_of(v) - 1] = v;
  return out;
}

PartitionedHypergraph trace_i(const PartitionedHypergraph& g, int i) {
  int r = g.uniformity();
  if (i < 1 || i > r) throw DomainError("trace level out of range");
  std::vector<Edge> projected;
  for (const auto& e : g.edges()) {
    Edge t;
    for (Vertex v : e)
      if (g.class_of(v) <= i) t.push_back(v);
    std::sort(t.begin(), t.end());
    projected.push_back(std::move(t));
  }
  std::sort(projected.begin(), projected.end());
  projected.erase(std::unique(projected.begin(), projected.end()),
                  projected.end());
  std::vector<std::vector<Vertex>> classes(g.classes().begin(),
                                           g.classes().begin() + i);
  std::vector<Vertex> verts;
  for (const auto& c : classes) verts.insert(verts.end(), c.begin(), c.end());
  return PartitionedHypergraph(
      Hypergraph::with_vertices(i, std::move(verts), std::move(projected)),
      std::move(classes));
}

std::optional<TraceBoundWitness> trace_bound_violation(
    const PartitionedHypergraph& g, std::size_t d) {
  for (int i = 2; i <= g.uniformity(); ++i) {
    PartitionedHypergraph tr = trace_i(g, i);
    for (Vertex v : tr.classes()[i - 1]) {
      std::size_t deg = 0;
      for (const auto& e : tr.edges())
        if (std::binary_search(e.begin(), e.end(), v)) ++deg;
      if (deg > d) return TraceBoundWitness{i, v, deg};
    }
  }
  return std::nullopt;
}

bool is_trace_bounded(const PartitionedHypergraph& g, std::size_t d) {
  return !trace_bound_violation(g, d).has_value();
}

namespace {

// Bounded exact search for a balanced partition keeping every edge rainbow.
// Vertices are assigned in degree order; class choice for vertex t is capped
// at one more than the number of classes already used, which breaks the
// class-relabeling symmetry.
struct LosslessSearch {
  int r;
  std::size_t n;
  const std::vector<std::vector<int>>& incident;  // vertex -> edge ids
  const std::vector<std::vector<int>>& edge_verts;
  std::vector<int> cls;  // assignment, -1 = unassigned (vertex order index)
  std::vector<std::size_t> load;
  std::uint64_t budget;
  bool found = false;

  bool ok(int v, int c) {
    if (load[c] >= n) return false;
    for (int e : incident[v])
      for (int u : edge_verts[e])
        if (u != v && cls[u] == c) return false;
    return true;
  }

  bool run(std::size_t t, int used, const std::vector<int>& order) {
    if (budget == 0) return false;
    --budget;
    if (t == order.size()) {
      found = true;
      return true;
    }
    int v = order[t];
    int cap = std::min(r, used + 1);
    for (int c = 0; c < cap; ++c) {
      if (!ok(v, c)) continue;
      cls[v] = c;
      ++load[c];
      if (run(t + 1, std::max(used, c + 1), order)) return true;
      --load[c];
      cls[v] = -1;
    }
    return false;
  }
};

std::size_t rainbow_count(const std::vector<std::vector<int>>& edge_verts,
                          const std::vector<int>& cls, int r) {
  std::size_t kept = 0;
  for (const auto& e : edge_verts) {
    std::uint64_t seen = 0;
    bool ok = true;
    for (int v : e) {
      std::uint64_t bit = 1ULL << cls[v];
      if (seen & bit) {
        ok = false;
        break;
      }
      seen |= bit;
    }
    (void)r;
    if (ok) ++kept;
  }
  return kept;
}

// kept * r^r >= r! * m, in exact integer arithmetic.
bool meets_average_bound(std::size_t kept, std::size_t m, int r) {
  unsigned __int128 lhs = kept;
  unsigned __int128 rhs = m;
  for (int i = 0; i < r; ++i) lhs *= static_cast<unsigned>(r);
  for (int i = 2; i <= r; ++i) rhs *= static_cast<unsigned>(i);
  return lhs >= rhs;
}

// P(edge becomes rainbow | partial assignment) under a uniformly random
// placement of the remaining vertices into the remaining class slots.
double edge_rainbow_probability(const std::vector<int>& e,
                                const std::vector<int>& cls,
                                const std::vector<std::size_t>& load,
                                std::size_t n, int r, std::size_t free_total) {
  std::uint64_t used = 0;
  int unassigned = 0;
  for (int v : e) {
    if (cls[v] < 0) {
      ++unassigned;
      continue;
    }
    std::uint64_t bit = 1ULL << cls[v];
    if (used & bit) return 0.0;
    used |= bit;
  }
  if (unassigned == 0) return 1.0;
  // elementary symmetric sum over admissible classes of their free capacity
  std::vector<double> es(unassigned + 1, 0.0);
  es[0] = 1.0;
  for (int c = 0; c < r; ++c) {
    if (used & (1ULL << c)) continue;
    double cap = static_cast<double>(n - load[c]);
    for (int k = unassigned; k >= 1; --k) es[k] += es[k - 1] * cap;
  }
  double favorable = es[unassigned];
  double total = 1.0;
  for (int k = 0; k < unassigned; ++k) {
    favorable *= static_cast<double>(k + 1);  // k! times the subset sum
    total *= static_cast<double>(free_total - k);
  }
  if (total <= 0.0) return 0.0;
  return favorable / total;
}

}  // namespace

PartitionedHypergraph extract_partite(const Hypergraph& g, std::size_t n,
                                      std::uint64_t seed,
                                      const ExtractOptions& opts) {
  const int r = g.uniformity();
  if (r > 16) throw DomainError("extraction supports uniformity up to 16");
  if (n == 0) throw DomainError("class size must be positive");
  if (g.vertex_count() > static_cast<std::size_t>(r) * n)
    throw DomainError("more than r*n vertices; nothing to pad");

  // pad with fresh isolated vertices up to r*n
  std::vector<Vertex> verts = g.vertices();
  Vertex next = verts.empty() ? 0 : verts.back() + 1;
  while (verts.size() < static_cast<std::size_t>(r) * n) verts.push_back(next++);
  const std::size_t vcount = verts.size();

  std::vector<std::vector<int>> edge_verts(g.edge_count());
  std::vector<std::vector<int>> incident(vcount);
  {
    // vertex ids -> dense indices
    std::vector<Vertex> sorted = verts;
    std::sort(sorted.begin(), sorted.end());
    auto index_of = [&](Vertex v) {
      return static_cast<int>(
          std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
    };
    verts = sorted;
    for (std::size_t ei = 0; ei < g.edge_count(); ++ei) {
      for (Vertex v : g.edges()[ei]) {
        int idx = index_of(v);
        edge_verts[ei].push_back(idx);
        incident[idx].push_back(static_cast<int>(ei));
      }
    }
  }
  const std::size_t m = g.edge_count();

  auto build = [&](const std::vector<int>& cls) {
    std::vector<std::vector<Vertex>> classes(r);
    for (std::size_t i = 0; i < vcount; ++i) classes[cls[i]].push_back(verts[i]);
    std::vector<Edge> kept;
    for (std::size_t ei = 0; ei < m; ++ei) {
      std::uint64_t seen = 0;
      bool ok = true;
      for (int v : edge_verts[ei]) {
        std::uint64_t bit = 1ULL << cls[v];
        if (seen & bit) {
          ok = false;
          break;
        }
        seen |= bit;
      }
      if (ok) kept.push_back(g.edges()[ei]);
    }
    return PartitionedHypergraph(
        Hypergraph::with_vertices(r, verts, std::move(kept)), std::move(classes));
  };

  // lossless pass: worth it when an exact balanced rainbow partition exists
  if (m > 0) {
    std::vector<int> order(vcount);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return incident[a].size() > incident[b].size();
    });
    LosslessSearch s{r,
                     n,
                     incident,
                     edge_verts,
                     std::vector<int>(vcount, -1),
                     std::vector<std::size_t>(r, 0),
                     opts.exact_search_budget};
    if (s.run(0, 0, order) && s.found) return build(s.cls);
  }

  Rng rng(derive_seed(seed, 17, 0));
  int tries = std::max(
      1, static_cast<int>(std::ceil(std::log2(1.0 / opts.fail_probability))));
  std::vector<int> best;
  std::size_t best_kept = 0;
  std::vector<int> slots(vcount);
  for (std::size_t i = 0; i < vcount; ++i) slots[i] = static_cast<int>(i / n);
  for (int t = 0; t < tries; ++t) {
    std::vector<int> perm(vcount);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> cls(vcount);
    for (std::size_t i = 0; i < vcount; ++i) cls[perm[i]] = slots[i];
    std::size_t kept = rainbow_count(edge_verts, cls, r);
    if (kept >= best_kept || best.empty()) {
      best_kept = kept;
      best = cls;
    }
    if (meets_average_bound(kept, m, r)) return build(cls);
  }

  // conditional-expectation pass: never below the (r!/r^r) average
  std::vector<int> cls(vcount, -1);
  std::vector<std::size_t> load(r, 0);
  std::size_t free_total = vcount;
  for (std::size_t v = 0; v < vcount; ++v) {
    int best_c = -1;
    double best_e = -1.0;
    for (int c = 0; c < r; ++c) {
      if (load[c] >= n) continue;
      cls[v] = c;
      ++load[c];
      double e = 0.0;
      for (std::size_t ei = 0; ei < m; ++ei)
        e += edge_rainbow_probability(edge_verts[ei], cls, load, n, r,
                                      free_total - 1);
      --load[c];
      cls[v] = -1;
      if (e > best_e) {
        best_e = e;
        best_c = c;
      }
    }
    cls[v] = best_c;
    ++load[best_c];
    --free_total;
  }
  std::size_t kept = rainbow_count(edge_verts, cls, r);
  if (kept < best_kept) {
    cls = best;
    kept = best_kept;
  }
  if (!meets_average_bound(kept, m, r))
    throw DomainError("partition extraction fell below the average bound");
  return build(cls);
}

SimplicialComplex SimplicialComplex::from_facets(int k, std::vector<Edge> facets) {
  if (k < 1) throw DomainError("complex dimension must be at least 1");
  Hypergraph h = Hypergraph::from_edges(k + 1, std::move(facets));
  if (h.edge_count() == 0) throw DomainError("complex needs at least one facet");
  return SimplicialComplex(k, std::move(h));
}

SimplicialComplex SimplicialComplex::from_hypergraph(const Hypergraph& g) {
  if (g.uniformity() < 2)
    throw DomainError("facets must have at least two vertices");
  return from_facets(g.uniformity() - 1, g.edges());
}

}  // namespace homeo
