#include <doctest.h>

#include "homeo/ledger.hpp"

using namespace homeo;

TEST_CASE("normalize_family sorts and deduplicates") {
  SetFamily messy = {{3, 1}, {2, 0}, {1, 3}};
  CHECK(normalize_family(messy) == SetFamily{{0, 2}, {1, 3}});
  CHECK(normalize_family({}) == SetFamily{});
}

TEST_CASE("materialized ledger answers membership per class") {
  BadnessLedger::ImageSet a = {{{0, 2}}, {{1, 2}, {1, 3}}};
  BadnessLedger::ImageSet b = {{{0, 2}, {1, 3}}};
  auto led = BadnessLedger::materialized(2, {{"classA", a}, {"classB", b}});

  CHECK(led.level() == 2);
  CHECK_FALSE(led.lazy());
  CHECK(led.is_marked("classA", {{0, 2}}));
  CHECK(led.is_marked("classA", {{1, 3}, {1, 2}}));  // order-insensitive
  CHECK(led.is_marked("classA", {{3, 1}, {2, 1}}));  // edge order too
  CHECK_FALSE(led.is_marked("classA", {{0, 2}, {1, 3}}));
  CHECK(led.is_marked("classB", {{0, 2}, {1, 3}}));
  CHECK_FALSE(led.is_marked("unknown", {{0, 2}}));

  CHECK(led.size_of("classA") == 2);
  CHECK(led.size_of("classB") == 1);
  CHECK(led.size_of("unknown") == 0);
  CHECK(led.entries().size() == 2);

  CHECK_THROWS_AS(led.extension_mask({{0, 2}}), DomainError);
  CHECK_THROWS_AS(BadnessLedger::materialized(0, {}), DomainError);
  CHECK_THROWS_AS(BadnessLedger::materialized(1, {{"c", {SetFamily{}}}}),
                  DomainError);
}

TEST_CASE("link-count rule marks copies with few extending top vertices") {
  // host: classes {0,1}, {2,3}, {4,5,6}; prefixes extend as follows
  //   {0,2}: tops 4,5,6   {0,3}: tops 4,5   {1,2}: top 4   {1,3}: none
  SetFamily edges = {{0, 2, 4}, {0, 2, 5}, {0, 2, 6}, {0, 3, 4},
                     {0, 3, 5}, {1, 2, 4}};
  PartitionedHypergraph host(Hypergraph::with_vertices(3, {0, 1, 2, 3, 4, 5, 6}, edges),
                             {{0, 1}, {2, 3}, {4, 5, 6}});
  auto led = BadnessLedger::link_count_rule(2, host, 3);

  CHECK(led.lazy());
  CHECK(led.level() == 2);
  CHECK(led.fewer_than() == 3);
  CHECK_FALSE(led.size_of("anything").has_value());

  // masks: bit t is top vertex number t (4 -> bit 0, 5 -> bit 1, 6 -> bit 2)
  CHECK(led.extension_mask({{0, 2}}) == 0b111);
  CHECK(led.extension_mask({{0, 3}}) == 0b011);
  CHECK(led.extension_mask({{1, 2}}) == 0b001);
  CHECK(led.extension_mask({{1, 3}}) == 0);
  CHECK(led.extension_mask({{0, 2}, {0, 3}}) == 0b011);  // intersection
  CHECK(led.extension_mask({{0, 2}, {1, 2}}) == 0b001);
  CHECK(led.extension_mask({{0, 3}, {1, 2}}) == 0b001);

  // marked iff fewer than 3 tops extend every edge; the code is ignored
  CHECK_FALSE(led.is_marked("x", {{0, 2}}));       // 3 extenders
  CHECK(led.is_marked("x", {{0, 3}}));             // 2
  CHECK(led.is_marked("x", {{1, 2}}));             // 1
  CHECK(led.is_marked("x", {{1, 3}}));             // 0
  CHECK(led.is_marked("x", {{0, 2}, {0, 3}}));     // 2
  CHECK_FALSE(led.is_marked("y", {{2, 0}}));       // unsorted edge accepted

  // an unknown prefix extends nowhere
  CHECK(led.extension_mask({{0, 9}}) == 0);
  CHECK(led.is_marked("x", {{0, 9}}));

  CHECK_THROWS_AS(led.extension_mask({}), DomainError);
}

TEST_CASE("fewer_than at the boundary") {
  SetFamily edges = {{0, 1, 2}, {0, 1, 3}};
  PartitionedHypergraph host(Hypergraph::from_edges(3, edges),
                             {{0}, {1}, {2, 3}});
  // prefix {0,1} has exactly 2 extenders
  auto strict = BadnessLedger::link_count_rule(2, host, 2);
  CHECK_FALSE(strict.is_marked("c", {{0, 1}}));  // 2 is not fewer than 2
  auto loose = BadnessLedger::link_count_rule(2, host, 3);
  CHECK(loose.is_marked("c", {{0, 1}}));
}

TEST_CASE("link-count rule guards its domain") {
  PartitionedHypergraph host(Hypergraph::from_edges(3, {{0, 1, 2}}),
                             {{0}, {1}, {2}});
  CHECK_THROWS_AS(BadnessLedger::link_count_rule(1, host, 2), DomainError);
  CHECK_THROWS_AS(BadnessLedger::link_count_rule(3, host, 2), DomainError);

  std::vector<std::vector<Vertex>> classes(2);
  SetFamily edges;
  for (Vertex t = 0; t < 65; ++t) {
    classes[0] = {1000};
    classes[1].push_back(t);
    edges.push_back({t, 1000});
  }
  PartitionedHypergraph wide(
      Hypergraph::with_vertices(2, [&] {
        std::vector<Vertex> v = classes[1];
        v.push_back(1000);
        return v;
      }(), edges),
      classes);
  CHECK_THROWS_AS(BadnessLedger::link_count_rule(1, wide, 2), ResourceError);
}
