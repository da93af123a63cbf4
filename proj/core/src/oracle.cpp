#include "homeo/oracle.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

namespace homeo {

namespace {

inline int byte_shift(int r, int c) { return 8 * (r - 1 - c); }

struct HostIndex {
  int r;
  const std::vector<std::vector<Vertex>>* classes;
  // per class: packed edge with the class's byte zeroed -> mask of local
  // indices completing it to a host edge
  std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> completion;
  std::vector<std::uint64_t> full;  // per class: mask of all local indices

  explicit HostIndex(const PartitionedHypergraph& g, const SearchOptions& opts)
      : r(g.uniformity()), classes(&g.classes()) {
    if (r > 8) throw ResourceError("oracle supports uniformity up to 8");
    if (g.base().vertex_count() > opts.max_host_vertices)
      throw ResourceError("host exceeds the vertex guard of " +
                          std::to_string(opts.max_host_vertices));
    completion.resize(r);
    full.resize(r);
    for (int c = 0; c < r; ++c) {
      std::size_t sz = (*classes)[c].size();
      if (sz > 64) throw ResourceError("host class too large for bitmasks");
      full[c] = sz == 64 ? ~0ULL : (1ULL << sz) - 1;
    }
    for (const auto& e : g.edges()) {
      std::uint64_t packed = 0;
      std::vector<int> local(r);
      for (Vertex v : e) {
        int c = g.class_of(v) - 1;
        const auto& mem = (*classes)[c];
        local[c] = static_cast<int>(
            std::lower_bound(mem.begin(), mem.end(), v) - mem.begin());
        packed |= static_cast<std::uint64_t>(local[c]) << byte_shift(r, c);
      }
      for (int c = 0; c < r; ++c) {
        std::uint64_t key = packed & ~(0xffULL << byte_shift(r, c));
        completion[c][key] |= 1ULL << local[c];
      }
    }
  }

  Vertex host_vertex(int c, int local) const { return (*classes)[c][local]; }
};

struct PatternIndex {
  int r = 0;
  std::vector<Vertex> verts;               // pattern vertices, fixed order
  std::vector<int> vclass;                 // 0-based class per position
  std::vector<std::vector<int>> edges;     // edge -> position per class
  std::vector<std::vector<int>> incident;  // position -> edge indices

  PatternIndex(const PartitionedHypergraph& h) : r(h.uniformity()) {
    // positions in (class, id) order: the static search order
    for (int c = 0; c < r; ++c)
      for (Vertex v : h.classes()[c]) {
        verts.push_back(v);
        vclass.push_back(c);
      }
    incident.resize(verts.size());
    auto position = [&](Vertex v) {
      for (std::size_t i = 0; i < verts.size(); ++i)
        if (verts[i] == v) return static_cast<int>(i);
      throw DomainError("pattern vertex not in any class");
    };
    for (const auto& e : h.edges()) {
      std::vector<int> row(r);
      for (Vertex v : e) {
        int p = position(v);
        row[vclass[p]] = p;
        incident[p].push_back(static_cast<int>(edges.size()));
      }
      edges.push_back(std::move(row));
    }
  }
};

struct Searcher {
  const HostIndex& host;
  const PatternIndex& pat;
  const SearchOptions& opts;
  std::vector<std::uint64_t> restrict_mask;  // per class, ANDed in
  std::vector<int> assign;                   // position -> host local or -1
  std::vector<std::uint64_t> used;           // per class
  std::uint64_t nodes = 0;

  Searcher(const HostIndex& h, const PatternIndex& p, const SearchOptions& o)
      : host(h), pat(p), opts(o), restrict_mask(h.full),
        assign(p.verts.size(), -1), used(h.r, 0) {}

  std::uint64_t candidates(int x) const {
    int c = pat.vclass[x];
    std::uint64_t m = host.full[c] & ~used[c] & restrict_mask[c];
    for (int ei : pat.incident[x]) {
      int open = 0;
      for (int p : pat.edges[ei])
        if (assign[p] < 0) ++open;
      if (open != 1) continue;  // checked when its last vertex is placed
      std::uint64_t key = 0;
      for (int cc = 0; cc < host.r; ++cc) {
        int p = pat.edges[ei][cc];
        if (p != x)
          key |= static_cast<std::uint64_t>(assign[p]) << byte_shift(host.r, cc);
      }
      auto it = host.completion[c].find(key);
      m &= it == host.completion[c].end() ? 0 : it->second;
      if (!m) break;
    }
    return m;
  }

  // emit returns true to stop the whole search (first-witness mode)
  bool run(const std::function<bool()>& emit) {
    if (++nodes > opts.node_budget)
      throw ResourceError("containment search exceeded its node budget");
    int x = -1;
    std::uint64_t mask = 0;
    if (opts.use_ordering_heuristic) {
      int best = 65;
      for (std::size_t p = 0; p < assign.size(); ++p) {
        if (assign[p] >= 0) continue;
        std::uint64_t m = candidates(static_cast<int>(p));
        int cnt = std::popcount(m);
        if (cnt < best) {
          best = cnt;
          x = static_cast<int>(p);
          mask = m;
          if (cnt == 0) break;
        }
      }
    } else {
      for (std::size_t p = 0; p < assign.size(); ++p)
        if (assign[p] < 0) {
          x = static_cast<int>(p);
          mask = candidates(x);
          break;
        }
    }
    if (x < 0) return emit();
    int c = pat.vclass[x];
    while (mask) {
      int local = std::countr_zero(mask);
      mask &= mask - 1;
      assign[x] = local;
      used[c] |= 1ULL << local;
      bool stop = run(emit);
      used[c] &= ~(1ULL << local);
      assign[x] = -1;
      if (stop) return true;
    }
    return false;
  }
};

std::vector<CopyRecord> enumerate_copies(
    const PartitionedHypergraph& j, const PartitionedHypergraph& g,
    const SearchOptions& opts,
    const std::vector<std::uint64_t>* restrict_mask) {
  if (j.uniformity() != g.uniformity())
    throw DomainError("pattern and host uniformity differ");
  if (j.edges().size() > opts.max_pattern_edges)
    throw ResourceError("pattern exceeds the edge guard of " +
                        std::to_string(opts.max_pattern_edges));
  auto canon = canonical_form(j);

  HostIndex host(g, opts);
  PatternIndex pat(j);
  Searcher s(host, pat, opts);
  if (restrict_mask)
    for (int c = 0; c < host.r; ++c) s.restrict_mask[c] &= (*restrict_mask)[c];

  std::map<std::vector<std::uint64_t>, CopyRecord> images;
  s.run([&]() {
    std::vector<std::uint64_t> key;
    for (const auto& e : pat.edges) {
      std::uint64_t packed = 0;
      for (int c = 0; c < host.r; ++c)
        packed |= static_cast<std::uint64_t>(s.assign[e[c]])
                  << byte_shift(host.r, c);
      key.push_back(packed);
    }
    std::sort(key.begin(), key.end());
    if (images.count(key)) return false;

    CopyRecord rec;
    rec.class_code = canon.cls.code;
    for (std::uint64_t packed : key) {
      Edge e;
      for (int c = 0; c < host.r; ++c)
        e.push_back(host.host_vertex(
            c, static_cast<int>((packed >> byte_shift(host.r, c)) & 0xff)));
      std::sort(e.begin(), e.end());
      rec.image.push_back(std::move(e));
    }
    std::sort(rec.image.begin(), rec.image.end());
    // rep -> input composed with input -> host
    for (auto [rep, jv] : canon.rep_to_input) {
      for (std::size_t p = 0; p < pat.verts.size(); ++p)
        if (pat.verts[p] == jv) {
          rec.witness_map.emplace_back(
              rep, host.host_vertex(pat.vclass[p], s.assign[p]));
          break;
        }
    }
    std::sort(rec.witness_map.begin(), rec.witness_map.end());
    images.emplace(std::move(key), std::move(rec));
    return false;
  });

  std::vector<CopyRecord> out;
  out.reserve(images.size());
  for (auto& [key, rec] : images) {
    (void)key;
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::optional<std::vector<std::pair<Vertex, Vertex>>> find_embedding(
    const PartitionedHypergraph& h, const PartitionedHypergraph& g,
    const SearchOptions& opts) {
  if (h.uniformity() != g.uniformity())
    throw DomainError("pattern and host uniformity differ");
  HostIndex host(g, opts);
  PatternIndex pat(h);
  Searcher s(host, pat, opts);
  std::optional<std::vector<std::pair<Vertex, Vertex>>> witness;
  s.run([&]() {
    std::vector<std::pair<Vertex, Vertex>> m;
    for (std::size_t p = 0; p < pat.verts.size(); ++p)
      m.emplace_back(pat.verts[p],
                     host.host_vertex(pat.vclass[p], s.assign[p]));
    std::sort(m.begin(), m.end());
    witness = std::move(m);
    return true;
  });
  return witness;
}

std::vector<CopyRecord> count_copies(const PartitionedHypergraph& j,
                                     const PartitionedHypergraph& g,
                                     const SearchOptions& opts) {
  return enumerate_copies(j, g, opts, nullptr);
}

std::vector<CopyRecord> copies_extending(const PartitionedHypergraph& j,
                                         const PartitionedHypergraph& g,
                                         const SetFamily& l,
                                         const SearchOptions& opts) {
  if (l.empty()) throw DomainError("trace copy must be nonempty");
  std::size_t i = l.front().size();
  for (const auto& e : l)
    if (e.size() != i) throw DomainError("trace copy edges must share one size");
  if (j.uniformity() != static_cast<int>(i) + 1)
    throw DomainError("pattern uniformity must exceed the trace level by one");

  SetFamily norm = l;
  for (auto& e : norm) std::sort(e.begin(), e.end());
  std::sort(norm.begin(), norm.end());
  norm.erase(std::unique(norm.begin(), norm.end()), norm.end());

  PartitionedHypergraph gi = trace_i(g, static_cast<int>(i));
  for (const auto& e : norm)
    if (!gi.base().has_edge(e))
      throw DomainError("trace copy has an edge outside the host trace");

  // vertices covered by L, per class; classes at or above level i are free
  int r = g.uniformity();
  std::vector<std::uint64_t> restrict_mask(r, ~0ULL);
  std::vector<Vertex> span;
  for (const auto& e : norm) span.insert(span.end(), e.begin(), e.end());
  std::sort(span.begin(), span.end());
  span.erase(std::unique(span.begin(), span.end()), span.end());
  for (std::size_t c = 0; c < i; ++c) {
    std::uint64_t m = 0;
    const auto& mem = g.classes()[c];
    for (std::size_t t = 0; t < mem.size(); ++t)
      if (std::binary_search(span.begin(), span.end(), mem[t])) m |= 1ULL << t;
    restrict_mask[c] = m;
  }

  std::vector<Vertex> low;  // union of the first i classes of G
  for (std::size_t c = 0; c < i; ++c) {
    const auto& mem = g.classes()[c];
    low.insert(low.end(), mem.begin(), mem.end());
  }

  std::vector<CopyRecord> all = enumerate_copies(j, g, opts, &restrict_mask);
  std::vector<CopyRecord> out;
  for (auto& rec : all) {
    SetFamily tr = trace(Hypergraph::from_edges(r, rec.image), low);
    if (tr == norm) out.push_back(std::move(rec));
  }
  return out;
}

VerifyResult verify_embedding(
    const std::vector<std::pair<Vertex, Vertex>>& map,
    const PartitionedHypergraph& h, const PartitionedHypergraph& g) {
  auto fail = [](std::string why) { return VerifyResult{false, std::move(why)}; };
  std::map<Vertex, Vertex> m;
  for (auto [from, to] : map) {
    if (!h.base().has_vertex(from))
      return fail("map names unknown vertex " + std::to_string(from));
    if (!m.emplace(from, to).second)
      return fail("vertex " + std::to_string(from) + " is mapped twice");
  }
  std::map<Vertex, Vertex> seen;  // image -> preimage
  for (Vertex v : h.base().vertices()) {
    auto it = m.find(v);
    if (it == m.end())
      return fail("vertex " + std::to_string(v) + " is not mapped");
    Vertex img = it->second;
    if (!g.base().has_vertex(img))
      return fail("vertex " + std::to_string(v) + " maps to unknown vertex " +
                  std::to_string(img));
    auto [sit, fresh] = seen.emplace(img, v);
    if (!fresh)
      return fail("vertices " + std::to_string(sit->second) + " and " +
                  std::to_string(v) + " collide at " + std::to_string(img));
    if (g.class_of(img) != h.class_of(v))
      return fail("vertex " + std::to_string(v) + " of class " +
                  std::to_string(h.class_of(v)) + " maps into class " +
                  std::to_string(g.class_of(img)));
  }
  for (const auto& e : h.edges()) {
    Edge img;
    for (Vertex v : e) img.push_back(m.at(v));
    if (!g.base().has_edge(img)) {
      std::ostringstream os;
      os << "edge {";
      for (std::size_t t = 0; t < e.size(); ++t) os << (t ? "," : "") << e[t];
      os << "} maps outside the host";
      return fail(os.str());
    }
  }
  return VerifyResult{true, ""};
}

}  // namespace homeo
