#include "homeo/family.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

namespace homeo {

namespace {

struct WorkGraph {
  int r;
  std::vector<std::vector<Vertex>> members;  // class -> input vertex ids
  std::vector<std::vector<int>> edges;       // edge -> member index per class
};

WorkGraph decompose(const PartitionedHypergraph& j) {
  WorkGraph w;
  w.r = j.uniformity();
  w.members.resize(w.r);
  std::vector<std::vector<std::size_t>> degree(w.r);
  for (int c = 0; c < w.r; ++c) {
    w.members[c] = j.classes()[c];
    degree[c].assign(w.members[c].size(), 0);
  }
  for (const auto& e : j.edges()) {
    std::vector<int> idx(w.r, -1);
    for (Vertex v : e) {
      int c = j.class_of(v) - 1;
      const auto& mem = w.members[c];
      idx[c] = static_cast<int>(
          std::lower_bound(mem.begin(), mem.end(), v) - mem.begin());
      ++degree[c][idx[c]];
    }
    w.edges.push_back(std::move(idx));
  }
  if (w.edges.empty()) throw DomainError("canonical form of an empty graph");
  for (int c = 0; c < w.r; ++c)
    for (std::size_t i = 0; i < degree[c].size(); ++i)
      if (degree[c][i] == 0)
        throw DomainError("isolated vertex " + std::to_string(w.members[c][i]));
  return w;
}

// Label-free vertex invariants refined to a fixed point: start from degrees,
// then fold in the multiset of incident edges described by the invariants of
// their endpoints. Automorphisms preserve these, so cells are unions of
// orbits and the minimum code search may permute within cells only.
std::vector<std::vector<int>> refine_cells(const WorkGraph& w) {
  int r = w.r;
  std::vector<std::vector<int>> inv(r);
  std::vector<std::vector<std::vector<int>>> incident(r);
  for (int c = 0; c < r; ++c) {
    inv[c].assign(w.members[c].size(), 0);
    incident[c].resize(w.members[c].size());
  }
  for (std::size_t ei = 0; ei < w.edges.size(); ++ei)
    for (int c = 0; c < r; ++c) {
      incident[c][w.edges[ei][c]].push_back(static_cast<int>(ei));
      ++inv[c][w.edges[ei][c]];  // degree as round-zero invariant
    }

  std::size_t groups = 0;
  for (int round = 0;; ++round) {
    // signature: class, current invariant, sorted incident edge descriptions
    std::vector<std::pair<std::vector<int>, std::pair<int, int>>> sigs;
    for (int c = 0; c < r; ++c)
      for (std::size_t i = 0; i < w.members[c].size(); ++i) {
        std::vector<int> sig{c, inv[c][i]};
        std::vector<std::vector<int>> rows;
        for (int ei : incident[c][i]) {
          std::vector<int> row(r);
          for (int cc = 0; cc < r; ++cc) row[cc] = inv[cc][w.edges[ei][cc]];
          rows.push_back(std::move(row));
        }
        std::sort(rows.begin(), rows.end());
        for (const auto& row : rows) sig.insert(sig.end(), row.begin(), row.end());
        sigs.push_back({std::move(sig), {c, static_cast<int>(i)}});
      }
    std::vector<std::vector<int>> keys;
    keys.reserve(sigs.size());
    for (const auto& s : sigs) keys.push_back(s.first);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (const auto& s : sigs) {
      int rank = static_cast<int>(
          std::lower_bound(keys.begin(), keys.end(), s.first) - keys.begin());
      inv[s.second.first][s.second.second] = rank;
    }
    if (keys.size() == groups) break;
    groups = keys.size();
  }

  std::vector<std::vector<int>> cells;  // flattened over classes, in order
  for (int c = 0; c < r; ++c) {
    std::map<int, std::vector<int>> by_inv;
    for (std::size_t i = 0; i < w.members[c].size(); ++i)
      by_inv[inv[c][i]].push_back(static_cast<int>(i));
    for (auto& [key, cell] : by_inv) {
      (void)key;
      cell.insert(cell.begin(), c);  // prepend class tag
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

struct MinCodeSearch {
  const WorkGraph& w;
  std::vector<std::vector<int>> cells;      // [class, members...]
  std::vector<std::vector<int>> label;      // class -> member index -> label
  std::vector<std::uint64_t> best;
  std::vector<std::vector<int>> best_label;
  std::uint64_t hits = 0;

  void evaluate() {
    std::vector<std::uint64_t> code(w.edges.size());
    for (std::size_t ei = 0; ei < w.edges.size(); ++ei) {
      std::uint64_t packed = 0;
      for (int c = 0; c < w.r; ++c)
        packed = (packed << 8) |
                 static_cast<std::uint64_t>(label[c][w.edges[ei][c]]);
      code[ei] = packed;
    }
    std::sort(code.begin(), code.end());
    if (best.empty() || code < best) {
      best = std::move(code);
      best_label = label;
      hits = 1;
    } else if (code == best) {
      ++hits;
    }
  }

  void run(std::size_t cell_idx) {
    if (cell_idx == cells.size()) {
      evaluate();
      return;
    }
    int c = cells[cell_idx][0];
    std::vector<int> perm(cells[cell_idx].begin() + 1, cells[cell_idx].end());
    std::sort(perm.begin(), perm.end());
    // labels for this cell start where the previous cells of the class ended
    int base = 0;
    for (std::size_t k = 0; k < cell_idx; ++k)
      if (cells[k][0] == c) base += static_cast<int>(cells[k].size()) - 1;
    do {
      for (std::size_t t = 0; t < perm.size(); ++t)
        label[c][perm[t]] = base + static_cast<int>(t);
      run(cell_idx + 1);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
};

std::string render_code(int r, const std::vector<std::size_t>& sizes,
                        const std::vector<std::uint64_t>& code) {
  std::ostringstream os;
  os << r << '|';
  for (std::size_t c = 0; c < sizes.size(); ++c) os << (c ? "," : "") << sizes[c];
  os << '|';
  for (std::size_t ei = 0; ei < code.size(); ++ei) {
    if (ei) os << ';';
    for (int c = r - 1; c >= 0; --c) {
      os << ((code[ei] >> (8 * c)) & 0xff);
      if (c) os << '-';
    }
  }
  return os.str();
}

CanonicalResult assemble(const WorkGraph& w, const std::vector<std::uint64_t>& code,
                         const std::vector<std::vector<int>>& label,
                         std::uint64_t aut) {
  int r = w.r;
  std::vector<std::size_t> sizes(r);
  std::vector<int> offset(r, 0);
  int total = 0;
  for (int c = 0; c < r; ++c) {
    sizes[c] = w.members[c].size();
    offset[c] = total;
    total += static_cast<int>(sizes[c]);
  }
  std::vector<std::vector<Vertex>> classes(r);
  std::vector<std::pair<Vertex, Vertex>> witness;
  for (int c = 0; c < r; ++c) {
    classes[c].resize(sizes[c]);
    for (std::size_t i = 0; i < sizes[c]; ++i) {
      Vertex rep_id = offset[c] + label[c][i];
      classes[c][label[c][i]] = rep_id;
      witness.emplace_back(rep_id, w.members[c][i]);
    }
  }
  std::vector<Edge> rep_edges;
  for (std::uint64_t packed : code) {
    Edge e(r);
    for (int c = 0; c < r; ++c)
      e[c] = offset[c] +
             static_cast<int>((packed >> (8 * (r - 1 - c))) & 0xff);
    rep_edges.push_back(std::move(e));
  }
  std::vector<Vertex> verts;
  for (const auto& c : classes) verts.insert(verts.end(), c.begin(), c.end());
  CanonicalResult res{
      IsoClass{render_code(r, sizes, code),
               PartitionedHypergraph(
                   Hypergraph::with_vertices(r, verts, rep_edges), classes),
               static_cast<std::size_t>(total), code.size(), aut},
      {}};
  std::sort(witness.begin(), witness.end());
  res.rep_to_input = std::move(witness);
  return res;
}

}  // namespace

CanonicalResult canonical_form(const PartitionedHypergraph& j) {
  if (j.uniformity() > 8)
    throw DomainError("canonical form supports uniformity up to 8");
  WorkGraph w = decompose(j);
  for (int c = 0; c < w.r; ++c)
    if (w.members[c].size() > 255)
      throw ResourceError("class too large for canonical labeling");

  if (w.r == 1) {
    // a 1-graph is a bare vertex set: everything is symmetric
    std::size_t t = w.members[0].size();
    std::vector<std::uint64_t> code(t);
    std::iota(code.begin(), code.end(), 0);
    std::vector<std::vector<int>> label{std::vector<int>(t)};
    std::iota(label[0].begin(), label[0].end(), 0);
    std::uint64_t aut = 1;
    for (std::size_t i = 2; i <= t; ++i) aut *= i;
    return assemble(w, code, label, aut);
  }

  MinCodeSearch search{w, refine_cells(w), {}, {}, {}, 0};
  std::uint64_t tuples = 1;
  for (const auto& cell : search.cells) {
    std::size_t sz = cell.size() - 1;
    for (std::size_t i = 2; i <= sz; ++i) {
      tuples *= i;
      if (tuples > 100000000ULL)
        throw ResourceError("canonical labeling search space too large");
    }
  }
  search.label.resize(w.r);
  for (int c = 0; c < w.r; ++c) search.label[c].resize(w.members[c].size());
  search.run(0);
  return assemble(w, search.best, search.best_label, search.hits);
}

std::vector<IsoClass> enumerate_family(int r, int d, int guard) {
  if (r < 1 || d < 1) throw DomainError("family needs r >= 1 and d >= 1");
  if (r * d > guard)
    throw ResourceError("family enumeration guard: r*d = " +
                        std::to_string(r * d) + " exceeds " +
                        std::to_string(guard));

  std::map<std::string, IsoClass> found;
  std::vector<const IsoClass*> frontier;

  {
    std::vector<std::vector<Vertex>> classes(r);
    Edge e(r);
    for (int c = 0; c < r; ++c) {
      classes[c] = {c};
      e[c] = c;
    }
    auto res = canonical_form(PartitionedHypergraph(
        Hypergraph::from_edges(r, {e}), std::move(classes)));
    auto [it, fresh] = found.emplace(res.cls.code, res.cls);
    (void)fresh;
    frontier.push_back(&it->second);
  }

  for (int m = 1; m < d; ++m) {
    std::vector<const IsoClass*> next;
    for (const IsoClass* cls : frontier) {
      const PartitionedHypergraph& rep = cls->rep;
      std::vector<std::size_t> sizes(r);
      for (int c = 0; c < r; ++c) sizes[c] = rep.classes()[c].size();
      // one choice per class: an existing vertex or one fresh vertex
      std::vector<std::size_t> pick(r, 0);
      while (true) {
        Edge e(r);
        Vertex fresh_id =
            static_cast<Vertex>(rep.base().vertex_count());
        std::vector<std::vector<Vertex>> classes = rep.classes();
        for (int c = 0; c < r; ++c) {
          if (pick[c] < sizes[c]) {
            e[c] = rep.classes()[c][pick[c]];
          } else {
            e[c] = fresh_id++;
            classes[c].push_back(e[c]);
          }
        }
        if (!rep.base().has_edge(e)) {
          std::vector<Edge> edges = rep.edges();
          edges.push_back(e);
          std::vector<Vertex> verts;
          for (const auto& c : classes) verts.insert(verts.end(), c.begin(), c.end());
          auto res = canonical_form(PartitionedHypergraph(
              Hypergraph::with_vertices(r, std::move(verts), std::move(edges)),
              std::move(classes)));
          auto [it, inserted] = found.emplace(res.cls.code, res.cls);
          if (inserted) next.push_back(&it->second);
        }
        int c = 0;
        while (c < r && ++pick[c] > sizes[c]) pick[c++] = 0;
        if (c == r) break;
      }
    }
    frontier = std::move(next);
  }

  std::vector<IsoClass> out;
  out.reserve(found.size());
  for (auto& [code, cls] : found) {
    (void)code;
    out.push_back(std::move(cls));
  }
  std::sort(out.begin(), out.end(), [](const IsoClass& a, const IsoClass& b) {
    return std::tie(a.edge_count, a.vertex_count, a.code) <
           std::tie(b.edge_count, b.vertex_count, b.code);
  });
  return out;
}

std::vector<SubgraphClassCopies> subgraphs_up_to_d(
    const PartitionedHypergraph& h, int d, std::size_t cap) {
  if (d < 1) throw DomainError("subgraph listing needs d >= 1");
  const auto& edges = h.edges();
  const std::size_t m = edges.size();
  if (m == 0) throw DomainError("subgraph listing of an empty graph");

  // count the subsets first so the guard fires before any work
  long double total = 0;
  {
    long double binom = 1;
    for (int t = 1; t <= d && t <= static_cast<int>(m); ++t) {
      binom = binom * static_cast<long double>(m - t + 1) / t;
      total += binom;
      if (total > static_cast<long double>(cap))
        throw ResourceError("subgraph listing would exceed the cap");
    }
  }

  std::map<std::string, SubgraphClassCopies> groups;
  std::vector<int> idx;
  auto emit = [&]() {
    std::vector<Edge> subset;
    for (int i : idx) subset.push_back(edges[i]);
    std::vector<Vertex> covered;
    for (const auto& e : subset) covered.insert(covered.end(), e.begin(), e.end());
    std::sort(covered.begin(), covered.end());
    covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
    std::vector<std::vector<Vertex>> classes(h.uniformity());
    for (Vertex v : covered) classes[h.class_of(v) - 1].push_back(v);
    auto res = canonical_form(PartitionedHypergraph(
        Hypergraph::from_edges(h.uniformity(), subset), std::move(classes)));
    auto it = groups.find(res.cls.code);
    if (it == groups.end())
      it = groups.emplace(res.cls.code, SubgraphClassCopies{res.cls, {}}).first;
    it->second.copies.push_back(SubgraphCopy{std::move(subset),
                                             std::move(res.rep_to_input)});
  };
  // subsets in size-major, lexicographic order
  std::function<void(int, int, int)> rec = [&](int start, int need, int size) {
    if (need == 0) {
      emit();
      return;
    }
    for (int i = start; i + need <= static_cast<int>(m); ++i) {
      idx.push_back(i);
      rec(i + 1, need - 1, size);
      idx.pop_back();
    }
  };
  for (int t = 1; t <= d && t <= static_cast<int>(m); ++t) rec(0, t, t);

  std::vector<SubgraphClassCopies> out;
  for (auto& [code, g] : groups) {
    (void)code;
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end(),
            [](const SubgraphClassCopies& a, const SubgraphClassCopies& b) {
              return std::tie(a.cls.edge_count, a.cls.vertex_count, a.cls.code) <
                     std::tie(b.cls.edge_count, b.cls.vertex_count, b.cls.code);
            });
  return out;
}

}  // namespace homeo
