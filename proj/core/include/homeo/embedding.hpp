#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "homeo/exponents.hpp"
#include "homeo/family.hpp"
#include "homeo/hypergraph.hpp"
#include "homeo/ledger.hpp"

namespace homeo {

/// Rejection-sampling and counting budgets. The proofs are existence
/// arguments "for n sufficiently large"; at desk scale every sampled choice
/// is verified and every verification that cannot finish within its budget
/// is recorded as an annotation instead of silently trusted.
struct PipelineBudgets {
  std::size_t link_samples = 0;    // 0 = try the whole top class
  std::size_t level_redraws = 100; // redraw budget per extension level
  std::size_t base_retries = 32;   // random restarts for the base level
  std::uint64_t b2_pair_nodes = 20000;    // marked-extension count, per (copy, class)
  std::uint64_t b2_total_nodes = 2000000; // marked-extension count, per descent
  std::uint64_t cond2_pair_nodes = 2000000;  // initial ledger bound, per class
  std::uint64_t cond2_total_nodes = 4000000; // initial ledger bound, per sample
};

/// Structured account of why a stage gave up: the stage name, the violated
/// condition, observed vs required quantities, and per-condition counters
/// accumulated across the stage's samples.
struct FailureReport {
  std::string stage;
  std::string condition;
  std::string observed;
  std::string required;
  std::map<std::string, std::uint64_t> counters;
  std::vector<std::string> annotations;
};

/// The maps phi_j : Y_j -> X_j built level by level; phi[j-1] holds the
/// class-j pairs. Injectivity across classes is automatic (classes are
/// disjoint); within a class it is event E1, checked before acceptance.
struct EmbeddingMap {
  std::vector<std::vector<std::pair<Vertex, Vertex>>> phi;
  std::vector<std::string> annotations;

  std::vector<std::pair<Vertex, Vertex>> flat() const;
  std::optional<Vertex> image_of(Vertex v) const;
};

/// One level of the descent: G_i with its ledger and verification notes.
struct LevelState {
  PartitionedHypergraph graph;
  BadnessLedger ledger;
  std::vector<std::string> notes;
};

/// Cached H(r, d) (enumerate_family is pure; the cache is shared).
const std::vector<IsoClass>& family_of(int r, int d);

/// Pick the initial link: sample x from the host's top class (without
/// replacement, in seeded random order) until L(x, G) satisfies
///   (1) the exact edge floor e(L(x,G)) * 2n >= e(G), and
///   (2) |B(J, L(x,G))| <= n^(v(J) - 1/2) for every J in H(r-1, d), where a
///       copy is marked iff fewer than v(H) top-class vertices extend it.
/// Bound (2) is certified by a subset upper bound or by budgeted counting;
/// a class whose budget runs out is accepted with an annotation.
std::variant<LevelState, FailureReport> initial_link(
    const PartitionedHypergraph& g, const PartitionedHypergraph& h,
    const ParamSchedule& sched, std::uint64_t seed,
    const PipelineBudgets& budgets = {});

/// Badness of a level-i copy L against level i+1:
///   B1: at most n^(1-beta) top-class vertices of G_(i+1) extend L, or
///   B2: for some J in H(i+1, d), the marked copies of J whose trace equals
///       L number at least n^(-2 beta) * (n^(1-beta))^(v(J)-v(L)-1) * |Gamma|
///       (inclusive).
/// B2 counting is budgeted; running out of budget counts as "not bad" and
/// is annotated.
bool is_beta_bad(const SetFamily& l, const PartitionedHypergraph& g_next,
                 const BadnessLedger& ledger_next, const Rational& beta,
                 std::size_t n, int d, const PipelineBudgets& budgets = {},
                 std::vector<std::string>* annotations = nullptr,
                 std::uint64_t* nodes_used = nullptr);

/// One descent step: sample a top-class vertex of G_(i+1), take its link
/// G_i, mark exactly the is_beta_bad copies of every L in H(i, d), and
/// accept once (1) the edge floor e(G_i) * (2n)^(r-i) >= e(G_r) holds and
/// (2) every class obeys |B(L, G_i)| <= n^(v(L) - delta_i).
std::variant<LevelState, FailureReport> descend(
    const LevelState& upper, const ParamSchedule& sched, std::uint64_t seed,
    const PipelineBudgets& budgets = {});

/// Base of the embedding: choose |Y_1| vertices of G_1, scanning candidates
/// in seeded random order and skipping any vertex that would complete a
/// marked subset of size <= d inside the chosen set; random restarts up to
/// the retry budget.
std::variant<EmbeddingMap, FailureReport> embed_base(
    const PartitionedHypergraph& g1, const BadnessLedger& ledger1,
    const PartitionedHypergraph& h, const ParamSchedule& sched,
    std::uint64_t seed, const PipelineBudgets& budgets = {});

/// Level j extension (2 <= j <= r-1): draw phi_j(y) uniformly from
/// Gamma(Phi_(j-1)(L(y)), G_j) for each y in Y_j, then accept iff
///   E1: the draws are pairwise distinct, and
///   E2: no image of a subgraph of Tr_j(H) with <= d edges is marked;
/// otherwise redraw the level, up to the redraw budget.
std::variant<EmbeddingMap, FailureReport> extend_level(
    const EmbeddingMap& phi_prev, const LevelState& level_j,
    const PartitionedHypergraph& h, const ParamSchedule& sched,
    std::uint64_t seed, const PipelineBudgets& budgets = {});

/// Top level: greedily pick, for each y in Y_r in id order, the smallest
/// unused vertex of Gamma(Phi_(r-1)(L(y, H)), G); verifies every edge of H
/// lands in E(G) before returning.
std::variant<EmbeddingMap, FailureReport> final_level(
    const EmbeddingMap& phi_prev, const PartitionedHypergraph& g,
    const BadnessLedger& ledger_top, const PartitionedHypergraph& h);

/// The whole pipeline: balanced partition extraction, schedule, initial
/// link, r-2 descents, base embedding, extensions, top level, and a final
/// independent verification. H must be d-trace-bounded (domain error with a
/// witness otherwise); isolated vertices of H are stripped first and mapped
/// to arbitrary distinct unused vertices at the end.
std::variant<EmbeddingMap, FailureReport> run_pipeline(
    const Hypergraph& g_raw, const PartitionedHypergraph& h, int d,
    std::uint64_t seed, const PipelineBudgets& budgets = {});

}  // namespace homeo
