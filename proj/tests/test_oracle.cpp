#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "brute.hpp"
#include "homeo/family.hpp"
#include "homeo/oracle.hpp"
#include "homeo/util.hpp"

using namespace homeo;

namespace {

PartitionedHypergraph random_host(int r, const std::vector<std::size_t>& sizes, double p,
                                  Rng& rng) {
  std::vector<std::vector<Vertex>> classes(static_cast<std::size_t>(r));
  Vertex next = 0;
  for (int c = 0; c < r; ++c)
    for (std::size_t k = 0; k < sizes[static_cast<std::size_t>(c)]; ++k)
      classes[static_cast<std::size_t>(c)].push_back(next++);
  SetFamily edges;
  Edge cur(static_cast<std::size_t>(r));
  std::function<void(int)> gen = [&](int c) {
    if (c == r) {
      if (std::uniform_real_distribution<double>(0, 1)(rng) < p) {
        Edge e = cur;
        std::sort(e.begin(), e.end());
        edges.push_back(e);
      }
      return;
    }
    for (Vertex v : classes[static_cast<std::size_t>(c)]) {
      cur[static_cast<std::size_t>(c)] = v;
      gen(c + 1);
    }
  };
  gen(0);
  std::vector<Vertex> verts;
  for (const auto& c : classes) verts.insert(verts.end(), c.begin(), c.end());
  return PartitionedHypergraph(Hypergraph::with_vertices(r, verts, edges), classes);
}

/// Restrict a random partitioned graph to its covered vertices so it is a
/// legal pattern (no isolated vertices).
PartitionedHypergraph covered_pattern(const PartitionedHypergraph& raw) {
  std::vector<std::vector<Vertex>> covered(raw.classes().size());
  for (std::size_t c = 0; c < raw.classes().size(); ++c)
    for (Vertex v : raw.classes()[c])
      if (degree(raw.base(), v) > 0) covered[c].push_back(v);
  return PartitionedHypergraph(
      Hypergraph::from_edges(raw.base().uniformity(), raw.edges()), covered);
}

}  // namespace

TEST_CASE("oracle agrees with naive search on fixed examples") {
  // the four-cycle K_{2,2}: exactly one unlabeled copy of itself
  PartitionedHypergraph c4(Hypergraph::from_edges(2, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}),
                           {{0, 1}, {2, 3}});
  PartitionedHypergraph host(
      Hypergraph::from_edges(2, {{10, 12}, {10, 13}, {11, 12}, {11, 13}}),
      {{10, 11}, {12, 13}});
  auto copies = count_copies(c4, host);
  REQUIRE(copies.size() == 1);
  CHECK(copies[0].image == host.edges());
  CHECK(find_embedding(c4, host).has_value());
  auto rep = canonical_form(c4).cls.rep;
  CHECK(verify_embedding(copies[0].witness_map, rep, host).ok);
  // remove one host edge: no copy survives
  PartitionedHypergraph host2(Hypergraph::from_edges(2, {{10, 12}, {10, 13}, {11, 12}}),
                              {{10, 11}, {12, 13}});
  CHECK_FALSE(find_embedding(c4, host2).has_value());
  CHECK(count_copies(c4, host2).empty());
}

TEST_CASE("oracle matches the brute reference on random instances") {
  Rng rng(20250814);
  int nonempty_cases = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int r = 2 + static_cast<int>(rand_index(rng, 2));  // 2 or 3
    std::vector<std::size_t> host_sizes(static_cast<std::size_t>(r),
                                        2 + rand_index(rng, 3));  // 2..4 per class
    PartitionedHypergraph host = random_host(r, host_sizes, 0.5, rng);
    std::vector<std::size_t> pat_sizes(static_cast<std::size_t>(r), 1 + rand_index(rng, 2));
    PartitionedHypergraph raw = random_host(r, pat_sizes, 0.6, rng);
    if (raw.edges().empty()) continue;
    PartitionedHypergraph pattern = covered_pattern(raw);

    auto fast = count_copies(pattern, host);
    auto slow = brute::copies(pattern, host);
    CHECK(fast.size() == slow.size());
    auto rep = canonical_form(pattern).cls.rep;
    std::set<SetFamily> fast_images;
    for (const auto& rec : fast) {
      fast_images.insert(rec.image);
      CHECK(verify_embedding(rec.witness_map, rep, host).ok);
      // the witness really produces the recorded image
      std::map<Vertex, Vertex> m(rec.witness_map.begin(), rec.witness_map.end());
      CHECK(brute::apply_map(rep.edges(), m) == rec.image);
    }
    CHECK(fast_images == slow);
    CHECK(find_embedding(pattern, host).has_value() == !slow.empty());
    if (!slow.empty()) ++nonempty_cases;
  }
  CHECK(nonempty_cases >= 10);  // the comparison must exercise real hits
}

TEST_CASE("copies_extending partitions count_copies by trace") {
  Rng rng(777);
  int checked = 0;
  for (int trial = 0; trial < 25; ++trial) {
    PartitionedHypergraph host = random_host(3, {3, 3, 3}, 0.55, rng);
    PartitionedHypergraph raw = random_host(3, {2, 2, 1}, 0.7, rng);
    if (raw.edges().empty()) continue;
    PartitionedHypergraph pattern = covered_pattern(raw);

    auto all = count_copies(pattern, host);
    // group images by their projection onto the two lower host classes
    std::map<SetFamily, std::set<SetFamily>> by_trace;
    for (const auto& rec : all) {
      SetFamily tr;
      for (const auto& e : rec.image) {
        Edge low;
        for (Vertex v : e)
          if (host.class_of(v) <= 2) low.push_back(v);
        std::sort(low.begin(), low.end());
        tr.push_back(low);
      }
      std::sort(tr.begin(), tr.end());
      tr.erase(std::unique(tr.begin(), tr.end()), tr.end());
      by_trace[tr].insert(rec.image);
    }
    std::size_t total = 0;
    for (const auto& [tr, members] : by_trace) {
      auto ext = copies_extending(pattern, host, tr);
      std::set<SetFamily> ext_images;
      for (const auto& rec : ext) ext_images.insert(rec.image);
      CHECK(ext_images == members);
      total += ext.size();
      ++checked;
    }
    CHECK(total == all.size());
  }
  CHECK(checked >= 5);
}

TEST_CASE("copies_extending rejects a trace edge absent from the host trace") {
  PartitionedHypergraph host(Hypergraph::with_vertices(3, {0, 1, 2, 3, 4}, {{0, 2, 4}}),
                             {{0, 1}, {2, 3}, {4}});
  PartitionedHypergraph pat(Hypergraph::from_edges(3, {{0, 1, 2}}), {{0}, {1}, {2}});
  CHECK_THROWS_AS(copies_extending(pat, host, {{1, 3}}), DomainError);
}

TEST_CASE("copy counts are invariant under within-class relabeling of the host") {
  Rng rng(31);
  PartitionedHypergraph host = random_host(2, {4, 4}, 0.5, rng);
  PartitionedHypergraph pat(Hypergraph::from_edges(2, {{0, 2}, {1, 2}}), {{0, 1}, {2}});
  auto before = count_copies(pat, host).size();
  // reverse each class
  std::map<Vertex, Vertex> m;
  for (const auto& cls : host.classes())
    for (std::size_t k = 0; k < cls.size(); ++k) m[cls[k]] = cls[cls.size() - 1 - k];
  SetFamily mapped = brute::apply_map(host.edges(), m);
  PartitionedHypergraph host2(Hypergraph::with_vertices(2, host.base().vertices(), mapped),
                              host.classes());
  CHECK(count_copies(pat, host2).size() == before);
}

TEST_CASE("search budget trips a resource error") {
  SetFamily pedges;
  for (Vertex a = 0; a < 3; ++a)
    for (Vertex b = 0; b < 3; ++b) pedges.push_back({a, static_cast<Vertex>(3 + b)});
  PartitionedHypergraph pat(Hypergraph::from_edges(2, pedges), {{0, 1, 2}, {3, 4, 5}});
  SetFamily hedges;
  for (Vertex a = 0; a < 12; ++a)
    for (Vertex b = 0; b < 12; ++b) hedges.push_back({a, static_cast<Vertex>(12 + b)});
  std::vector<Vertex> left(12), right(12);
  for (Vertex v = 0; v < 12; ++v) left[static_cast<std::size_t>(v)] = v;
  for (Vertex v = 0; v < 12; ++v) right[static_cast<std::size_t>(v)] = 12 + v;
  PartitionedHypergraph host(Hypergraph::from_edges(2, hedges), {left, right});
  SearchOptions opts;
  opts.node_budget = 50;
  CHECK_THROWS_AS(count_copies(pat, host, opts), ResourceError);
}

TEST_CASE("verify_embedding names violations") {
  PartitionedHypergraph h(Hypergraph::from_edges(2, {{0, 1}}), {{0}, {1}});
  PartitionedHypergraph g(Hypergraph::from_edges(2, {{4, 5}, {4, 6}}), {{4}, {5, 6}});
  CHECK(verify_embedding({{0, 4}, {1, 5}}, h, g).ok);
  auto missing = verify_embedding({{0, 4}}, h, g);
  CHECK_FALSE(missing.ok);
  CHECK_FALSE(missing.violation.empty());
  CHECK_FALSE(verify_embedding({{0, 4}, {1, 4}}, h, g).ok);   // collision
  CHECK_FALSE(verify_embedding({{0, 5}, {1, 4}}, h, g).ok);   // class mismatch
  CHECK_FALSE(verify_embedding({{0, 4}, {1, 9}}, h, g).ok);   // unknown image
  PartitionedHypergraph g2(Hypergraph::with_vertices(2, {4, 5, 6}, {{4, 6}}), {{4}, {5, 6}});
  CHECK_FALSE(verify_embedding({{0, 4}, {1, 5}}, h, g2).ok);  // edge missing
}
