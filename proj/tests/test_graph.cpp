#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "alliance/error.hpp"
#include "alliance/graph.hpp"
#include "alliance/partition.hpp"
#include "helpers.hpp"

using namespace alliance;
using testing::graph_of;

TEST_CASE("build aggregates duplicate rows and interns names in sorted order") {
  const auto g = graph_of({{"B", "A", "y", 2.0}, {"A", "B", "x", 1.0}, {"A", "B", "x", 3.0}, {"A", "B", "y", 4.0}});
  CHECK(g.airport_count() == 2);
  CHECK(g.carrier_count() == 2);
  CHECK(g.segment_count() == 2);
  CHECK(g.record_count() == 4);
  CHECK(g.airport_name(0) == "A");
  CHECK(g.carrier_name(1) == "y");
  const auto s = g.segment_index(0, 1);
  CHECK(g.weight(s, 0) == 4.0);
  CHECK(g.weight(s, 1) == 4.0);
  CHECK(g.segment(s).total_weight == 8.0);
}

TEST_CASE("content hash does not depend on record order") {
  std::vector<ScheduleRecord> rows;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const int u = static_cast<int>(rng() % 9), v = (u + 1 + static_cast<int>(rng() % 8)) % 9;
    rows.push_back({"P" + std::to_string(u), "P" + std::to_string(v), "C" + std::to_string(rng() % 4),
                    1.0 + static_cast<double>(rng() % 1000) / 7.0});
  }
  const auto h1 = MultiAttributeGraph::build(rows).content_hash();
  std::shuffle(rows.begin(), rows.end(), rng);
  CHECK(MultiAttributeGraph::build(rows).content_hash() == h1);
  rows.front().asm_weight += 1.0;
  CHECK(MultiAttributeGraph::build(rows).content_hash() != h1);
}

TEST_CASE("zero-weight rows are dropped and their carriers not interned") {
  const auto g = graph_of({{"A", "B", "x", 1.0}, {"A", "C", "z", 0.0}});
  CHECK(g.carrier_count() == 1);
  CHECK(g.segment_count() == 1);
  CHECK(g.airport_count() == 3);
  CHECK_FALSE(g.find_segment(0, 2).has_value());
}

TEST_CASE("malformed rows are rejected with DataError") {
  CHECK_THROWS_AS(graph_of({{"A", "A", "x", 1.0}}), DataError);
  CHECK_THROWS_AS(graph_of({{"A", "B", "x", -1.0}}), DataError);
  CHECK_THROWS_AS(graph_of({{"A", "B", "x", std::nan("")}}), DataError);
  CHECK_THROWS_AS(graph_of({{"", "B", "x", 1.0}}), DataError);
  CHECK_THROWS_AS(graph_of({{"A", "B", "", 1.0}}), DataError);
  CHECK_THROWS_WITH_AS(graph_of({{"A", "B", "x", 1.0}, {"C", "C", "x", 1.0}}), doctest::Contains("row 1"), DataError);
}

TEST_CASE("segment and neighbour PMFs are ASM-proportional") {
  const auto g = graph_of({{"A", "B", "x", 1.0}, {"A", "B", "y", 3.0}, {"A", "C", "x", 4.0}, {"B", "C", "y", 1.0}});
  const auto sp = segment_pmf(g, 0, 1);
  sp.validate();
  CHECK(sp.probability_of(0) == doctest::Approx(0.25));
  CHECK(sp.probability_of(1) == doctest::Approx(0.75));
  const auto np = neighbor_pmf(g, 0);
  np.validate();
  CHECK(np.probability_of(1) == doctest::Approx(0.5));
  CHECK(np.probability_of(2) == doctest::Approx(0.5));
  CHECK_THROWS_AS(neighbor_pmf(g, 2), DataError);  // C has no outgoing segment
  CHECK_THROWS_AS(segment_pmf(g, 1, 0), DataError);
}

TEST_CASE("walk roots and isolated airports partition the airports") {
  const auto g = graph_of({{"A", "B", "x", 1.0}, {"B", "C", "x", 1.0}});
  CHECK(g.walk_roots().size() == 2);
  REQUIRE(g.isolated_airports().size() == 1);
  CHECK(g.airport_name(g.isolated_airports()[0]) == "C");
  CHECK_FALSE(g.is_walk_eligible(2));
}

TEST_CASE("inverse-CDF draws hit every outcome at the right boundaries") {
  const auto g = graph_of({{"A", "B", "x", 1.0}, {"A", "C", "x", 3.0}, {"A", "B", "y", 1.0}});
  // out weights: A->B 2, A->C 3
  CHECK(g.segment(g.draw_out_segment(0, 0.0)).destination == 1);
  CHECK(g.segment(g.draw_out_segment(0, 0.39)).destination == 1);
  CHECK(g.segment(g.draw_out_segment(0, 0.41)).destination == 2);
  CHECK(g.segment(g.draw_out_segment(0, 0.999999)).destination == 2);
  const auto ab = g.segment_index(0, 1);
  CHECK(g.draw_carrier_slot(ab, 0.49) == 0);
  CHECK(g.draw_carrier_slot(ab, 0.51) == 1);
}

TEST_CASE("alliance market share sums to one over alliances") {
  const auto g = graph_of({{"A", "B", "x", 1.0}, {"A", "B", "y", 3.0}, {"A", "B", "z", 4.0}});
  const AlliancePartition p({0, 1, 0}, 2);
  CHECK(alliance_market_share(g, p, 0, 1, 0) == doctest::Approx(5.0 / 8.0));
  CHECK(alliance_market_share(g, p, 0, 1, 1) == doctest::Approx(3.0 / 8.0));
  CHECK_THROWS_AS(alliance_market_share(g, p, 0, 1, 2), ConfigError);
}
