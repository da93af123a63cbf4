#include "homeo/embedding.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace homeo {

std::vector<std::pair<Vertex, Vertex>> EmbeddingMap::flat() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (const auto& level : phi) out.insert(out.end(), level.begin(), level.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Vertex> EmbeddingMap::image_of(Vertex v) const {
  for (const auto& level : phi)
    for (const auto& [from, to] : level)
      if (from == v) return to;
  return std::nullopt;
}

const std::vector<IsoClass>& family_of(int r, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<IsoClass>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({r, d});
  if (it == cache.end())
    it = cache.emplace(std::make_pair(r, d), enumerate_family(r, d)).first;
  return it->second;
}

namespace {

std::uint64_t low_bits(std::size_t count) {
  return count >= 64 ? ~0ULL : (1ULL << count) - 1;
}

int byte_shift(int r, int c) { return 8 * (r - 1 - c); }

BigInt binomial_count(std::uint64_t m, std::uint64_t k) {
  if (k > m) return 0;
  BigInt out = 1;
  for (std::uint64_t j = 0; j < k; ++j) {
    out *= BigInt(m - j);
    out /= BigInt(j + 1);
  }
  return out;
}

std::string rational_text(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

// Bitmask view of a partitioned host: per class, a sorted vertex array plus a
// completion map sending each partially packed edge (one class byte zeroed) to
// the mask of local indices that complete it.  Kept separate from the oracle's
// host index on purpose — the pipeline must not certify itself through the
// same code path the checker uses.
struct HostMasks {
  int r = 0;
  const PartitionedHypergraph* graph = nullptr;
  std::vector<std::vector<Vertex>> verts;                              // per class, sorted
  std::vector<std::uint64_t> full;                                     // per class
  std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> comp;  // per class

  explicit HostMasks(const PartitionedHypergraph& g) : r(g.uniformity()), graph(&g) {
    if (r > 8) throw ResourceError("embedding engine supports uniformity up to 8");
    verts.resize(r);
    full.resize(r);
    comp.resize(r);
    for (int c = 0; c < r; ++c) {
      verts[c] = g.classes()[static_cast<std::size_t>(c)];
      std::sort(verts[c].begin(), verts[c].end());
      if (verts[c].size() > 64) throw ResourceError("embedding engine class exceeds 64 vertices");
      full[c] = low_bits(verts[c].size());
    }
    for (const auto& e : g.edges()) {
      std::uint64_t packed = 0;
      std::vector<int> locals(static_cast<std::size_t>(r), -1);
      for (Vertex v : e) {
        int c = g.class_of(v) - 1;
        int t = local_of(c, v);
        locals[static_cast<std::size_t>(c)] = t;
        packed |= static_cast<std::uint64_t>(t) << byte_shift(r, c);
      }
      for (int c = 0; c < r; ++c) {
        std::uint64_t key = packed & ~(0xFFULL << byte_shift(r, c));
        comp[static_cast<std::size_t>(c)][key] |= 1ULL << locals[static_cast<std::size_t>(c)];
      }
    }
  }

  int local_of(int c, Vertex v) const {
    const auto& col = verts[static_cast<std::size_t>(c)];
    auto it = std::lower_bound(col.begin(), col.end(), v);
    if (it == col.end() || *it != v) throw DomainError("vertex missing from host class");
    return static_cast<int>(it - col.begin());
  }

  Vertex vertex_at(int c, int t) const {
    return verts[static_cast<std::size_t>(c)][static_cast<std::size_t>(t)];
  }
};

// Depth-first enumeration of class-respecting injective images of a small
// pattern inside a masked host.  Positions are visited class-major, so in
// trace-extension mode every low-class position is pinned before any top
// vertex is chosen.  Node accounting covers every attempted assignment.
struct PatternRun {
  const HostMasks& host;
  const PartitionedHypergraph& pat;

  std::vector<Vertex> pverts;                    // class-major
  std::vector<int> pclass;                       // per position
  std::vector<std::vector<int>> pedges;          // per edge: position by class
  std::vector<std::vector<int>> incident;        // position -> incident edges
  std::vector<std::uint64_t> restrict_mask;      // per position

  bool extends_mode = false;
  std::vector<std::vector<int>> trace_locals;    // per trace edge: local index by low class

  std::vector<int> assign;
  std::vector<std::uint64_t> used;
  std::uint64_t budget = ~0ULL;
  std::uint64_t nodes = 0;
  bool exceeded = false;

  PatternRun(const HostMasks& h, const PartitionedHypergraph& p) : host(h), pat(p) {
    const int r = host.r;
    if (p.uniformity() != r) throw DomainError("pattern uniformity mismatch");
    for (int c = 0; c < r; ++c)
      for (Vertex v : p.classes()[static_cast<std::size_t>(c)]) {
        pverts.push_back(v);
        pclass.push_back(c);
      }
    auto position_of = [&](Vertex v) {
      for (std::size_t k = 0; k < pverts.size(); ++k)
        if (pverts[k] == v) return static_cast<int>(k);
      throw DomainError("pattern edge uses an unlisted vertex");
    };
    for (const auto& e : p.edges()) {
      std::vector<int> by_class(static_cast<std::size_t>(r), -1);
      for (Vertex v : e) by_class[static_cast<std::size_t>(p.class_of(v) - 1)] = position_of(v);
      pedges.push_back(by_class);
    }
    incident.resize(pverts.size());
    for (std::size_t ei = 0; ei < pedges.size(); ++ei)
      for (int pos : pedges[ei])
        incident[static_cast<std::size_t>(pos)].push_back(static_cast<int>(ei));
    restrict_mask.assign(pverts.size(), ~0ULL);
    assign.assign(pverts.size(), -1);
    used.assign(static_cast<std::size_t>(r), 0);
  }

  // Trace-extension mode: low-class positions may only land on the span of
  // the family `l`, and whenever an edge's low part becomes fully mapped it
  // must coincide with a member of `l`.
  void bind_trace(const std::vector<Edge>& l) {
    const int r = host.r;
    extends_mode = true;
    std::vector<std::uint64_t> span(static_cast<std::size_t>(r - 1), 0);
    for (const auto& edge : l) {
      std::vector<int> locals(static_cast<std::size_t>(r - 1), -1);
      for (Vertex v : edge) {
        int c = host.graph->class_of(v) - 1;
        if (c >= r - 1) throw DomainError("trace edge touches the top class");
        int t = host.local_of(c, v);
        locals[static_cast<std::size_t>(c)] = t;
        span[static_cast<std::size_t>(c)] |= 1ULL << t;
      }
      for (int loc : locals)
        if (loc < 0) throw DomainError("trace edge misses a low class");
      trace_locals.push_back(locals);
    }
    for (std::size_t k = 0; k < pverts.size(); ++k)
      if (pclass[k] < r - 1) restrict_mask[k] = span[static_cast<std::size_t>(pclass[k])];
  }

  std::uint64_t candidates(std::size_t x) const {
    const int c = pclass[x];
    std::uint64_t m = host.full[static_cast<std::size_t>(c)] &
                      ~used[static_cast<std::size_t>(c)] & restrict_mask[x];
    for (int ei : incident[x]) {
      if (!m) return 0;
      const auto& edge = pedges[static_cast<std::size_t>(ei)];
      int open = 0;
      for (int pos : edge)
        if (assign[static_cast<std::size_t>(pos)] < 0) ++open;
      if (open == 1) {
        std::uint64_t key = 0;
        for (int cc = 0; cc < host.r; ++cc) {
          int pos = edge[static_cast<std::size_t>(cc)];
          if (pos == static_cast<int>(x)) continue;
          key |= static_cast<std::uint64_t>(assign[static_cast<std::size_t>(pos)])
                 << byte_shift(host.r, cc);
        }
        const auto& cm = host.comp[static_cast<std::size_t>(c)];
        auto it = cm.find(key);
        m &= (it == cm.end()) ? 0 : it->second;
      } else if (extends_mode && c < host.r - 1) {
        // If x completes the low part of this edge, the mapped trace edge
        // must be one of the bound trace members.
        bool completes_low = true;
        for (int cc = 0; cc + 1 < host.r; ++cc) {
          int pos = edge[static_cast<std::size_t>(cc)];
          if (pos != static_cast<int>(x) && assign[static_cast<std::size_t>(pos)] < 0) {
            completes_low = false;
            break;
          }
        }
        if (completes_low) {
          std::uint64_t allow = 0;
          for (const auto& locals : trace_locals) {
            bool match = true;
            for (int cc = 0; cc + 1 < host.r; ++cc) {
              int pos = edge[static_cast<std::size_t>(cc)];
              if (pos == static_cast<int>(x)) continue;
              if (assign[static_cast<std::size_t>(pos)] !=
                  locals[static_cast<std::size_t>(cc)]) {
                match = false;
                break;
              }
            }
            if (match) allow |= 1ULL << locals[static_cast<std::size_t>(c)];
          }
          m &= allow;
        }
      }
    }
    return m;
  }

  void walk(std::size_t depth, const std::function<void()>& leaf) {
    if (exceeded) return;
    if (depth == pverts.size()) {
      leaf();
      return;
    }
    std::uint64_t m = candidates(depth);
    const int c = pclass[depth];
    while (m) {
      int t = std::countr_zero(m);
      m &= m - 1;
      if (++nodes > budget) {
        exceeded = true;
        return;
      }
      assign[depth] = t;
      used[static_cast<std::size_t>(c)] |= 1ULL << t;
      walk(depth + 1, leaf);
      used[static_cast<std::size_t>(c)] &= ~(1ULL << t);
      assign[depth] = -1;
      if (exceeded) return;
    }
  }

  SetFamily current_image() const {
    SetFamily fam;
    for (const auto& edge : pedges) {
      Edge e;
      for (int cc = 0; cc < host.r; ++cc) {
        int pos = edge[static_cast<std::size_t>(cc)];
        e.push_back(host.vertex_at(cc, assign[static_cast<std::size_t>(pos)]));
      }
      std::sort(e.begin(), e.end());
      fam.push_back(e);
    }
    std::sort(fam.begin(), fam.end());
    return fam;
  }
};

struct MarkedCount {
  std::uint64_t images = 0;     // floor(ordered / |Aut|); exact when !exceeded
  std::uint64_t ordered = 0;
  std::uint64_t nodes = 0;
  bool exceeded = false;
};

// Count images of `cls` in the masked host whose every copy the ledger marks.
// With `trace` bound, only images whose level-i trace equals that family are
// visited; class-size bookkeeping guarantees the low part is then a bijection
// onto the trace's span.
MarkedCount count_marked_images(const IsoClass& cls, const HostMasks& host,
                                const BadnessLedger& ledger, const SetFamily* trace,
                                std::uint64_t budget) {
  MarkedCount out;
  const int r = host.r;
  for (int c = 0; c < r; ++c) {
    std::size_t need = cls.rep.classes()[static_cast<std::size_t>(c)].size();
    if (need > host.verts[static_cast<std::size_t>(c)].size()) return out;
  }
  PatternRun run(host, cls.rep);
  if (trace) {
    // The image's trace equals `trace` iff the low classes biject onto its
    // span and every mapped trace edge belongs to it; sizes are checked here,
    // membership during the walk, and surjectivity follows from the rep's
    // trace having the same number of distinct edges.
    auto rep_trace = trace_i(cls.rep, r - 1);
    if (rep_trace.edges().size() != trace->size()) return out;
    std::vector<std::set<Vertex>> span(static_cast<std::size_t>(r - 1));
    for (const auto& edge : *trace)
      for (Vertex v : edge)
        span[static_cast<std::size_t>(host.graph->class_of(v) - 1)].insert(v);
    for (int c = 0; c + 1 < r; ++c)
      if (span[static_cast<std::size_t>(c)].size() !=
          cls.rep.classes()[static_cast<std::size_t>(c)].size())
        return out;
    run.bind_trace(*trace);
  }
  run.budget = budget;
  run.walk(0, [&]() {
    if (ledger.is_marked(cls.code, run.current_image())) ++out.ordered;
  });
  out.nodes = run.nodes;
  out.exceeded = run.exceeded;
  out.images = out.ordered / cls.automorphisms;
  return out;
}

// All copies (as normalized edge families) of the isomorphism class `cls`
// inside a 1-uniform host are just the t-subsets of its covered vertices.
void level1_copies(const PartitionedHypergraph& g1, std::size_t t,
                   const std::function<void(const SetFamily&)>& emit) {
  std::vector<Vertex> verts;
  for (const auto& e : g1.edges()) verts.push_back(e.front());
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  if (t > verts.size()) return;
  std::vector<std::size_t> pick(t);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t from) {
    if (k == t) {
      SetFamily fam;
      for (std::size_t idx : pick) fam.push_back({verts[idx]});
      emit(fam);
      return;
    }
    for (std::size_t j = from; j + (t - k) <= verts.size(); ++j) {
      pick[k] = j;
      rec(k + 1, j + 1);
    }
  };
  rec(0, 0);
}

// Free enumeration of all copies of `cls` in a host of uniformity >= 2.
// Returns false when the node budget ran out (copies then incomplete).
bool collect_copies(const IsoClass& cls, const HostMasks& host, std::uint64_t budget,
                    std::set<SetFamily>& out) {
  for (int c = 0; c < host.r; ++c)
    if (cls.rep.classes()[static_cast<std::size_t>(c)].size() >
        host.verts[static_cast<std::size_t>(c)].size())
      return true;
  PatternRun run(host, cls.rep);
  run.budget = budget;
  run.walk(0, [&]() { out.insert(run.current_image()); });
  return !run.exceeded;
}

std::string render_count(std::size_t value) {
  std::ostringstream os;
  os << value;
  return os.str();
}

// L(x, G): project the edges through x one level down. For levels >= 2 the
// low classes are kept whole (isolated vertices and all); the 1-uniform
// bottom keeps only covered vertices, so v(G_1) = e(G_1).
PartitionedHypergraph link_level(const PartitionedHypergraph& g, Vertex x) {
  const int r = g.uniformity();
  if (r < 2) throw DomainError("link-level needs uniformity at least 2");
  SetFamily low_edges;
  for (const auto& e : g.edges()) {
    if (std::find(e.begin(), e.end(), x) == e.end()) continue;
    Edge low;
    for (Vertex v : e)
      if (v != x) low.push_back(v);
    low_edges.push_back(std::move(low));
  }
  if (r - 1 == 1) {
    Hypergraph base = Hypergraph::from_edges(1, low_edges);
    return PartitionedHypergraph(base, {base.vertices()});
  }
  std::vector<std::vector<Vertex>> classes(g.classes().begin(), g.classes().end() - 1);
  std::vector<Vertex> verts;
  for (const auto& c : classes) verts.insert(verts.end(), c.begin(), c.end());
  return PartitionedHypergraph(Hypergraph::with_vertices(r - 1, std::move(verts), low_edges),
                               std::move(classes));
}

void merge_annotations(std::vector<std::string>& into, const std::vector<std::string>& from,
                       std::size_t cap = 16) {
  std::set<std::string> seen(into.begin(), into.end());
  for (const auto& a : from) {
    if (into.size() >= cap) {
      if (seen.insert("(further annotations suppressed)").second)
        into.push_back("(further annotations suppressed)");
      break;
    }
    if (seen.insert(a).second) into.push_back(a);
  }
}

}  // namespace

bool is_beta_bad(const SetFamily& l_raw, const PartitionedHypergraph& g_next,
                 const BadnessLedger& ledger_next, const Rational& beta,
                 std::size_t n, int d, const PipelineBudgets& budgets,
                 std::vector<std::string>* annotations, std::uint64_t* nodes_used) {
  if (nodes_used) *nodes_used = 0;
  SetFamily l = l_raw;
  for (auto& e : l) std::sort(e.begin(), e.end());
  std::sort(l.begin(), l.end());
  l.erase(std::unique(l.begin(), l.end()), l.end());
  if (l.empty()) throw DomainError("badness test needs a nonempty copy");
  if (l.size() > static_cast<std::size_t>(d))
    throw DomainError("badness test copy has more than d edges");
  const int r_next = g_next.uniformity();
  if (r_next < 2) throw DomainError("badness test needs a graph of uniformity at least 2");
  const std::size_t i = l.front().size();
  if (static_cast<int>(i) + 1 != r_next)
    throw DomainError("copy level must sit one below the graph level");
  std::set<Vertex> covered;
  for (const auto& e : l) {
    if (e.size() != i) throw DomainError("copy edges must share one size");
    for (Vertex v : e) {
      if (g_next.class_of(v) == r_next) throw DomainError("copy touches the top class");
      covered.insert(v);
    }
  }

  // (B1): few common extensions.
  auto gamma = common_neighbourhood(g_next.base(), Hypergraph::from_edges(i, l));
  if (count_at_most_power(BigInt(gamma.size()), BigInt(1), n, Rational(1) - beta)) return true;

  // (B2): some bounded pattern has many marked copies extending this trace.
  HostMasks host(g_next);
  std::uint64_t total_left = budgets.b2_total_nodes;
  for (const IsoClass& cls : family_of(r_next, d)) {
    std::uint64_t pair_budget = std::min<std::uint64_t>(budgets.b2_pair_nodes, total_left);
    if (pair_budget == 0) {
      if (annotations)
        annotations->push_back("badness test ran out of its node budget; remaining patterns "
                               "treated as sparse");
      break;
    }
    auto mc = count_marked_images(cls, host, ledger_next, &l, pair_budget);
    total_left -= std::min(total_left, mc.nodes);
    if (nodes_used) *nodes_used += mc.nodes;
    Rational exponent =
        Rational(static_cast<long>(cls.vertex_count) - static_cast<long>(covered.size()) - 1) *
            (Rational(1) - beta) -
        2 * beta;
    if (count_at_least_power(BigInt(mc.images), BigInt(gamma.size()), n, exponent)) return true;
    if (mc.exceeded && annotations)
      annotations->push_back("marked-extension count for pattern " + cls.code +
                             " hit its node budget; treated as sparse");
  }
  return false;
}

std::variant<LevelState, FailureReport> initial_link(const PartitionedHypergraph& g,
                                                     const PartitionedHypergraph& h,
                                                     const ParamSchedule& sched,
                                                     std::uint64_t seed,
                                                     const PipelineBudgets& budgets) {
  const int r = g.uniformity();
  if (r != sched.r) throw DomainError("schedule was built for a different uniformity");
  if (r < 2) throw DomainError("initial link needs uniformity at least 2");
  for (const auto& cls : g.classes())
    if (cls.size() != sched.n) throw DomainError("host classes must all have the scheduled size");
  const std::size_t n = sched.n;
  const std::size_t v_h = h.base().vertex_count();

  // The starting ledger is the same for every sample: mark a copy when fewer
  // than v(H) top-class vertices extend all of its edges at once.
  BadnessLedger rule = BadnessLedger::link_count_rule(r - 1, g, v_h);

  std::vector<Vertex> order = g.classes()[static_cast<std::size_t>(r - 1)];
  {
    Rng rng(derive_seed(seed, 11));
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::size_t limit = order.size();
  if (budgets.link_samples > 0) limit = std::min<std::size_t>(limit, budgets.link_samples);

  std::uint64_t floor_failures = 0;
  std::uint64_t bound_failures = 0;
  for (std::size_t idx = 0; idx < limit; ++idx) {
    const Vertex x = order[idx];
    PartitionedHypergraph glink = link_level(g, x);
    if (!edge_floor_met(glink.edges().size(), r - 1, r, n, sched.input_edges)) {
      ++floor_failures;
      continue;
    }
    std::vector<std::string> notes;
    bool ok = true;
    std::uint64_t total_left = budgets.cond2_total_nodes;
    HostMasks host(glink);
    for (const IsoClass& cls : family_of(r - 1, sched.d)) {
      Rational exponent = Rational(static_cast<long>(cls.vertex_count)) - Rational(1, 2);
      // Crude upper bound first: the marked copies of a class with e edges
      // number at most C(e(G'), e), which often already sits below n^{v-1/2}.
      BigInt crude = binomial_count(glink.edges().size(), cls.edge_count);
      if (count_at_most_power(crude, BigInt(1), n, exponent)) continue;
      std::uint64_t pair_budget = std::min<std::uint64_t>(budgets.cond2_pair_nodes, total_left);
      if (pair_budget == 0) {
        notes.push_back("starting ledger bound unverified for pattern " + cls.code +
                        " (node budget exhausted); accepted on best effort");
        continue;
      }
      auto mc = count_marked_images(cls, host, rule, nullptr, pair_budget);
      total_left -= std::min(total_left, mc.nodes);
      if (!mc.exceeded) {
        if (!count_at_most_power(BigInt(mc.images), BigInt(1), n, exponent)) {
          ok = false;
          break;
        }
      } else if (count_at_least_power(BigInt(mc.images), BigInt(1), n, exponent) &&
                 !count_at_most_power(BigInt(mc.images), BigInt(1), n, exponent)) {
        // Even the partial count already exceeds the bound.
        ok = false;
        break;
      } else {
        notes.push_back("starting ledger bound for pattern " + cls.code +
                        " accepted on best effort (node budget)");
      }
    }
    if (!ok) {
      ++bound_failures;
      continue;
    }
    LevelState state{std::move(glink), rule, {}};
    state.notes.push_back("level " + render_count(static_cast<std::size_t>(r - 1)) +
                          " seeded from sample " + render_count(idx + 1) + " of " +
                          render_count(limit));
    merge_annotations(state.notes, notes);
    return state;
  }

  FailureReport rep;
  rep.stage = "initial_link";
  if (floor_failures >= bound_failures) {
    rep.condition = "edge floor";
    rep.observed = render_count(floor_failures) + " of " + render_count(limit) +
                   " samples below the floor";
    rep.required = "e(G') * 2n >= e(G)";
  } else {
    rep.condition = "starting ledger bound";
    rep.observed = render_count(bound_failures) + " of " + render_count(limit) +
                   " samples with an oversized marked family";
    rep.required = "marked copies of every bounded pattern <= n^(v - 1/2)";
  }
  rep.counters["edge_floor_failures"] = floor_failures;
  rep.counters["ledger_bound_failures"] = bound_failures;
  rep.counters["samples"] = limit;
  return rep;
}

std::variant<LevelState, FailureReport> descend(const LevelState& upper,
                                                const ParamSchedule& sched,
                                                std::uint64_t seed,
                                                const PipelineBudgets& budgets) {
  const int upper_level = upper.graph.uniformity();
  if (upper_level < 2) throw DomainError("descent needs a level of uniformity at least 2");
  const int i = upper_level - 1;
  if (i > sched.r - 2) throw DomainError("descent level exceeds the schedule");
  const Rational beta = sched.beta[static_cast<std::size_t>(i)];
  const Rational delta = sched.delta[static_cast<std::size_t>(i)];
  const std::size_t n = sched.n;
  const int d = sched.d;

  std::vector<Vertex> order =
      upper.graph.classes()[static_cast<std::size_t>(upper_level - 1)];
  {
    Rng rng(derive_seed(seed, 12, static_cast<std::uint64_t>(i)));
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::size_t limit = order.size();
  if (budgets.link_samples > 0) limit = std::min<std::size_t>(limit, budgets.link_samples);

  std::uint64_t floor_failures = 0;
  std::uint64_t size_failures = 0;
  for (std::size_t idx = 0; idx < limit; ++idx) {
    const Vertex x = order[idx];
    PartitionedHypergraph glow = link_level(upper.graph, x);
    if (!edge_floor_met(glow.edges().size(), i, sched.r, n, sched.input_edges)) {
      ++floor_failures;
      continue;
    }

    std::map<std::string, BadnessLedger::ImageSet> marks;
    std::vector<std::string> notes;
    std::uint64_t b2_left = budgets.b2_total_nodes;
    bool ok = true;
    for (const IsoClass& cls : family_of(i, d)) {
      std::set<SetFamily> copies;
      if (i == 1) {
        level1_copies(glow, cls.edge_count, [&](const SetFamily& fam) { copies.insert(fam); });
      } else {
        HostMasks low_host(glow);
        if (!collect_copies(cls, low_host, budgets.cond2_pair_nodes, copies)) {
          FailureReport rep;
          rep.stage = "descend@" + render_count(static_cast<std::size_t>(i));
          rep.condition = "copy enumeration budget";
          rep.observed = "pattern " + cls.code + " exceeded " +
                         render_count(budgets.cond2_pair_nodes) + " nodes";
          rep.required = "complete copy lists for the new ledger";
          return rep;
        }
      }
      auto& marked = marks[cls.code];
      for (const auto& copy : copies) {
        PipelineBudgets local = budgets;
        local.b2_total_nodes = b2_left;
        std::uint64_t spent = 0;
        bool bad = is_beta_bad(copy, upper.graph, upper.ledger, beta, n, d, local, &notes,
                               &spent);
        b2_left -= std::min(b2_left, spent);
        if (bad) marked.insert(copy);
      }
      Rational exponent = Rational(static_cast<long>(cls.vertex_count)) - delta;
      if (!count_at_most_power(BigInt(marked.size()), BigInt(1), n, exponent)) {
        ok = false;
        break;
      }
      if (!marked.empty())
        notes.push_back("level " + render_count(static_cast<std::size_t>(i)) + " pattern " +
                        cls.code + ": " + render_count(marked.size()) +
                        " marked copies (cap n^(" +
                        rational_text(Rational(static_cast<long>(cls.vertex_count)) - delta) +
                        "))");
    }
    if (!ok) {
      ++size_failures;
      continue;
    }
    LevelState state{std::move(glow), BadnessLedger::materialized(i, marks), {}};
    state.notes.push_back("level " + render_count(static_cast<std::size_t>(i)) +
                          " seeded from sample " + render_count(idx + 1) + " of " +
                          render_count(limit));
    merge_annotations(state.notes, notes);
    return state;
  }

  FailureReport rep;
  rep.stage = "descend@" + render_count(static_cast<std::size_t>(i));
  if (floor_failures >= size_failures) {
    rep.condition = "edge floor";
    rep.observed = render_count(floor_failures) + " of " + render_count(limit) +
                   " samples below the floor";
    rep.required = "e(G_i) * (2n)^(r-i) >= e(G)";
  } else {
    rep.condition = "ledger size";
    rep.observed = render_count(size_failures) + " of " + render_count(limit) +
                   " samples with an oversized marked family";
    rep.required = "marked copies of every bounded pattern <= n^(v - delta_i)";
  }
  rep.counters["edge_floor_failures"] = floor_failures;
  rep.counters["ledger_size_failures"] = size_failures;
  rep.counters["samples"] = limit;
  return rep;
}

std::variant<EmbeddingMap, FailureReport> embed_base(const PartitionedHypergraph& g1,
                                                     const BadnessLedger& ledger1,
                                                     const PartitionedHypergraph& h,
                                                     const ParamSchedule& sched,
                                                     std::uint64_t seed,
                                                     const PipelineBudgets& budgets) {
  if (g1.uniformity() != 1) throw DomainError("base embedding expects a 1-uniform level");
  if (ledger1.level() != 1) throw DomainError("base embedding expects a level-1 ledger");
  const auto& y1 = h.classes()[0];
  std::vector<Vertex> verts;
  for (const auto& e : g1.edges()) verts.push_back(e.front());
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  if (y1.size() > verts.size()) {
    // A too-small surviving level is a sampling outcome, not caller misuse:
    // no retry can help, so report it the same way greedy exhaustion is.
    FailureReport rep;
    rep.stage = "embed_base";
    rep.condition = "greedy exhaustion";
    rep.observed = "the surviving base level has " + render_count(verts.size()) +
                   " vertices for " + render_count(y1.size()) + " pattern vertices";
    rep.required = "an unmarked support for the whole first pattern class";
    rep.counters["placeable"] = verts.size();
    rep.counters["retries"] = 0;
    return rep;
  }

  std::map<std::size_t, std::string> code_of_size;
  for (const auto& cls : family_of(1, sched.d)) code_of_size[cls.edge_count] = cls.code;

  const std::size_t want = y1.size();
  std::size_t best = 0;
  const std::size_t retries = std::max<std::size_t>(budgets.base_retries, 1);
  for (std::size_t retry = 0; retry < retries; ++retry) {
    std::vector<Vertex> order = verts;
    Rng rng(derive_seed(seed, 13, retry));
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Vertex> chosen;
    for (Vertex v : order) {
      if (chosen.size() == want) break;
      // v joins when no marked subset of size <= d arises inside chosen+v.
      bool clean = true;
      std::size_t max_extra =
          std::min<std::size_t>(chosen.size(), static_cast<std::size_t>(sched.d) - 1);
      std::vector<std::size_t> pick;
      std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from,
                                                              std::size_t remaining) {
        if (!clean) return;
        SetFamily fam;
        fam.push_back({v});
        for (std::size_t idx : pick) fam.push_back({chosen[idx]});
        for (auto& e : fam) std::sort(e.begin(), e.end());
        std::sort(fam.begin(), fam.end());
        if (ledger1.is_marked(code_of_size.at(fam.size()), fam)) {
          clean = false;
          return;
        }
        if (remaining == 0) return;
        for (std::size_t j = from; j < chosen.size(); ++j) {
          pick.push_back(j);
          rec(j + 1, remaining - 1);
          pick.pop_back();
          if (!clean) return;
        }
      };
      rec(0, max_extra);
      if (clean) chosen.push_back(v);
    }
    best = std::max(best, chosen.size());
    if (chosen.size() == want) {
      EmbeddingMap out;
      out.phi.resize(1);
      std::vector<Vertex> sorted_y1 = y1;
      std::sort(sorted_y1.begin(), sorted_y1.end());
      for (std::size_t k = 0; k < want; ++k) out.phi[0].push_back({sorted_y1[k], chosen[k]});
      return out;
    }
  }

  FailureReport rep;
  rep.stage = "embed_base";
  rep.condition = "greedy exhaustion";
  rep.observed = "placed " + render_count(best) + " of " + render_count(want) + " vertices";
  rep.required = "an unmarked support for the whole first pattern class";
  rep.counters["placeable"] = best;
  rep.counters["retries"] = retries;
  return rep;
}

std::variant<EmbeddingMap, FailureReport> extend_level(const EmbeddingMap& phi_prev,
                                                       const LevelState& level_j,
                                                       const PartitionedHypergraph& h,
                                                       const ParamSchedule& sched,
                                                       std::uint64_t seed,
                                                       const PipelineBudgets& budgets) {
  const int j = level_j.graph.uniformity();
  if (j < 2) throw DomainError("extension expects a level of uniformity at least 2");
  if (phi_prev.phi.size() != static_cast<std::size_t>(j - 1))
    throw DomainError("previous map must cover exactly the classes below the extension level");
  PartitionedHypergraph trj = trace_i(h, j);
  const auto& yj = h.classes()[static_cast<std::size_t>(j - 1)];

  std::map<Vertex, Vertex> prev;
  for (const auto& [from, to] : phi_prev.flat()) prev[from] = to;

  // Common neighbourhoods are fixed across redraws; compute them once.
  std::vector<std::vector<Vertex>> choices;
  for (Vertex y : yj) {
    Hypergraph ly = link(trj.base(), y);
    SetFamily mapped_edges;
    for (const auto& e : ly.edges()) {
      Edge me;
      for (Vertex v : e) {
        auto it = prev.find(v);
        if (it == prev.end()) throw DomainError("previous map misses a pattern vertex");
        me.push_back(it->second);
      }
      std::sort(me.begin(), me.end());
      mapped_edges.push_back(me);
    }
    auto gamma = common_neighbourhood(level_j.graph.base(),
                                      Hypergraph::from_edges(j - 1, mapped_edges));
    if (gamma.empty()) {
      FailureReport rep;
      rep.stage = "extend@" + render_count(static_cast<std::size_t>(j));
      rep.condition = "empty common neighbourhood";
      rep.observed = "pattern vertex " + render_count(y) + " has no candidate images";
      rep.required = "a nonempty candidate set for every pattern vertex";
      return rep;
    }
    choices.push_back(std::move(gamma));
  }

  std::vector<SubgraphClassCopies> subs;
  try {
    subs = subgraphs_up_to_d(trj, sched.d);
  } catch (const ResourceError& err) {
    FailureReport rep;
    rep.stage = "extend@" + render_count(static_cast<std::size_t>(j));
    rep.condition = "pattern subgraph enumeration";
    rep.observed = err.what();
    rep.required = "a complete list of bounded trace subgraphs";
    return rep;
  }

  std::uint64_t e1_failures = 0;
  std::uint64_t e2_failures = 0;
  const std::size_t redraws = std::max<std::size_t>(budgets.level_redraws, 1);
  for (std::size_t attempt = 0; attempt < redraws; ++attempt) {
    Rng rng(derive_seed(seed, 14, static_cast<std::uint64_t>(j), attempt));
    std::vector<Vertex> draw;
    for (const auto& gamma : choices) draw.push_back(gamma[rand_index(rng, gamma.size())]);
    std::set<Vertex> distinct(draw.begin(), draw.end());
    if (distinct.size() != draw.size()) {
      ++e1_failures;
      continue;
    }
    std::map<Vertex, Vertex> cur = prev;
    for (std::size_t k = 0; k < yj.size(); ++k) cur[yj[k]] = draw[k];
    bool clean = true;
    for (const auto& group : subs) {
      for (const auto& copy : group.copies) {
        SetFamily image;
        for (const auto& e : copy.edges) {
          Edge me;
          for (Vertex v : e) me.push_back(cur.at(v));
          std::sort(me.begin(), me.end());
          image.push_back(me);
        }
        std::sort(image.begin(), image.end());
        if (level_j.ledger.is_marked(group.cls.code, image)) {
          clean = false;
          break;
        }
      }
      if (!clean) break;
    }
    if (!clean) {
      ++e2_failures;
      continue;
    }
    EmbeddingMap out = phi_prev;
    out.phi.resize(static_cast<std::size_t>(j));
    for (std::size_t k = 0; k < yj.size(); ++k)
      out.phi[static_cast<std::size_t>(j - 1)].push_back({yj[k], draw[k]});
    return out;
  }

  FailureReport rep;
  rep.stage = "extend@" + render_count(static_cast<std::size_t>(j));
  rep.condition = "redraw budget";
  rep.observed = render_count(e1_failures) + " collisions, " + render_count(e2_failures) +
                 " marked-trace rejections in " + render_count(redraws) + " draws";
  rep.required = "a distinct draw avoiding every marked trace copy";
  rep.counters["collision_failures"] = e1_failures;
  rep.counters["marked_trace_failures"] = e2_failures;
  rep.counters["redraws"] = redraws;
  return rep;
}

std::variant<EmbeddingMap, FailureReport> final_level(const EmbeddingMap& phi_prev,
                                                      const PartitionedHypergraph& g,
                                                      const BadnessLedger& ledger_top,
                                                      const PartitionedHypergraph& h) {
  const int r = g.uniformity();
  if (h.uniformity() != r) throw DomainError("pattern and host uniformity differ");
  if (phi_prev.phi.size() != static_cast<std::size_t>(r - 1))
    throw DomainError("previous map must cover exactly the first r-1 classes");
  // The top-level ledger shaped the descent; by this point every surviving
  // trace is unmarked in it, so the final step only needs the graph itself.
  (void)ledger_top;

  std::map<Vertex, Vertex> prev;
  for (const auto& [from, to] : phi_prev.flat()) prev[from] = to;

  EmbeddingMap out = phi_prev;
  out.phi.resize(static_cast<std::size_t>(r));
  std::set<Vertex> used;
  for (Vertex y : h.classes()[static_cast<std::size_t>(r - 1)]) {
    Hypergraph ly = link(h.base(), y);
    SetFamily mapped_edges;
    for (const auto& e : ly.edges()) {
      Edge me;
      for (Vertex v : e) {
        auto it = prev.find(v);
        if (it == prev.end()) throw DomainError("previous map misses a pattern vertex");
        me.push_back(it->second);
      }
      std::sort(me.begin(), me.end());
      mapped_edges.push_back(me);
    }
    auto gamma = common_neighbourhood(g.base(), Hypergraph::from_edges(r - 1, mapped_edges));
    std::optional<Vertex> image;
    for (Vertex w : gamma)
      if (!used.count(w)) {
        image = w;
        break;
      }
    if (!image) {
      FailureReport rep;
      rep.stage = "final";
      rep.condition = "distinct completion";
      rep.observed = "pattern vertex " + render_count(y) + " has " +
                     render_count(gamma.size()) + " candidates, all used";
      rep.required = "a fresh common extension for every top-class vertex";
      return rep;
    }
    used.insert(*image);
    out.phi[static_cast<std::size_t>(r - 1)].push_back({y, *image});
  }

  // Edge-by-edge audit before handing the map back.
  std::map<Vertex, Vertex> full = prev;
  for (const auto& [from, to] : out.phi[static_cast<std::size_t>(r - 1)]) full[from] = to;
  for (const auto& e : h.edges()) {
    Edge me;
    for (Vertex v : e) me.push_back(full.at(v));
    std::sort(me.begin(), me.end());
    if (!g.base().has_edge(me)) {
      FailureReport rep;
      rep.stage = "final";
      rep.condition = "edge audit";
      rep.observed = "a pattern edge maps outside the host";
      rep.required = "every pattern edge lands on a host edge";
      return rep;
    }
  }
  return out;
}

std::variant<EmbeddingMap, FailureReport> run_pipeline(const Hypergraph& g_raw,
                                                       const PartitionedHypergraph& h,
                                                       int d, std::uint64_t seed,
                                                       const PipelineBudgets& budgets) {
  if (d < 1) throw DomainError("trace bound must be positive");
  if (auto w = trace_bound_violation(h, d)) {
    std::ostringstream os;
    os << "pattern is not " << d << "-trace-bounded: level " << w->level << " vertex "
       << w->vertex << " has trace degree " << w->deg;
    throw DomainError(os.str());
  }
  const int r = h.uniformity();
  if (g_raw.uniformity() != r) throw DomainError("pattern and host uniformity differ");
  if (r < 2) throw DomainError("pipeline needs uniformity at least 2");
  if (h.edges().empty()) throw DomainError("pattern has no edges");

  // Isolated pattern vertices carry no constraints; strip them here and place
  // them on spare host vertices at the very end.
  std::set<Vertex> covered;
  for (const auto& e : h.edges())
    for (Vertex v : e) covered.insert(v);
  std::vector<std::vector<Vertex>> live_classes(static_cast<std::size_t>(r));
  std::vector<std::vector<Vertex>> spare_classes(static_cast<std::size_t>(r));
  for (int c = 0; c < r; ++c)
    for (Vertex v : h.classes()[static_cast<std::size_t>(c)])
      (covered.count(v) ? live_classes : spare_classes)[static_cast<std::size_t>(c)].push_back(v);
  std::vector<Vertex> live_list(covered.begin(), covered.end());
  PartitionedHypergraph hs(Hypergraph::with_vertices(r, live_list, h.edges()), live_classes);

  const std::size_t n = (g_raw.vertex_count() + static_cast<std::size_t>(r) - 1) /
                        static_cast<std::size_t>(r);
  std::vector<std::string> annotations;

  std::optional<PartitionedHypergraph> gx;
  ParamSchedule sched;
  try {
    if (n < 2) throw DomainError("host has too few vertices per class");
    gx = extract_partite(g_raw, n, derive_seed(seed, 1));
    sched = exponent_schedule(r, d, n, gx->edges().size());
  } catch (const DomainError& err) {
    FailureReport rep;
    rep.stage = "schedule";
    rep.condition = "input density";
    rep.observed = err.what();
    rep.required = "a balanced partite form with at least 2^r edges";
    return rep;
  }
  if (sched.below_threshold) {
    std::ostringstream os;
    os << "host is sparser than the guaranteed regime: its density solves exponents only up to "
       << sched.solved_epsilon << ", past the schedule bound "
       << rational_decimal(sched.epsilon, 10) << "; continuing on best effort";
    annotations.push_back(os.str());
  }

  auto fail_with = [&](FailureReport rep) {
    merge_annotations(rep.annotations, annotations);
    return rep;
  };

  std::map<int, LevelState> levels;
  {
    auto first = initial_link(*gx, hs, sched, derive_seed(seed, 2), budgets);
    if (std::holds_alternative<FailureReport>(first))
      return fail_with(std::get<FailureReport>(std::move(first)));
    levels.emplace(r - 1, std::get<LevelState>(std::move(first)));
  }
  for (int lev = r - 1; lev >= 2; --lev) {
    auto down = descend(levels.at(lev), sched, derive_seed(seed, 3, static_cast<std::uint64_t>(lev)),
                        budgets);
    if (std::holds_alternative<FailureReport>(down))
      return fail_with(std::get<FailureReport>(std::move(down)));
    levels.emplace(lev - 1, std::get<LevelState>(std::move(down)));
  }
  for (const auto& [lev, state] : levels)
    merge_annotations(annotations, state.notes);

  EmbeddingMap cur;
  {
    auto base = embed_base(levels.at(1).graph, levels.at(1).ledger, hs, sched,
                           derive_seed(seed, 4), budgets);
    if (std::holds_alternative<FailureReport>(base))
      return fail_with(std::get<FailureReport>(std::move(base)));
    cur = std::get<EmbeddingMap>(std::move(base));
  }
  for (int j = 2; j <= r - 1; ++j) {
    auto ext = extend_level(cur, levels.at(j), hs, sched,
                            derive_seed(seed, 5, static_cast<std::uint64_t>(j)), budgets);
    if (std::holds_alternative<FailureReport>(ext))
      return fail_with(std::get<FailureReport>(std::move(ext)));
    cur = std::get<EmbeddingMap>(std::move(ext));
  }
  {
    auto fin = final_level(cur, *gx, levels.at(r - 1).ledger, hs);
    if (std::holds_alternative<FailureReport>(fin))
      return fail_with(std::get<FailureReport>(std::move(fin)));
    cur = std::get<EmbeddingMap>(std::move(fin));
  }

  // Park isolated pattern vertices on unused host vertices of their class.
  std::set<Vertex> taken;
  for (const auto& [from, to] : cur.flat()) taken.insert(to);
  for (int c = 0; c < r; ++c) {
    auto& spare = spare_classes[static_cast<std::size_t>(c)];
    if (spare.empty()) continue;
    std::sort(spare.begin(), spare.end());
    std::vector<Vertex> free;
    for (Vertex v : gx->classes()[static_cast<std::size_t>(c)])
      if (!taken.count(v)) free.push_back(v);
    std::sort(free.begin(), free.end());
    if (free.size() < spare.size()) {
      FailureReport rep;
      rep.stage = "finalize";
      rep.condition = "isolated placement";
      rep.observed = render_count(free.size()) + " spare host vertices for " +
                     render_count(spare.size()) + " isolated pattern vertices";
      rep.required = "one fresh host vertex per isolated pattern vertex";
      return fail_with(rep);
    }
    for (std::size_t k = 0; k < spare.size(); ++k) {
      cur.phi[static_cast<std::size_t>(c)].push_back({spare[k], free[k]});
      taken.insert(free[k]);
    }
  }
  merge_annotations(cur.annotations, annotations);
  return cur;
}

}  // namespace homeo
