#include <doctest.h>

#include "alliance/error.hpp"
#include "alliance/partition.hpp"

using namespace alliance;

TEST_CASE("factories") {
  const auto s = AlliancePartition::singletons(4);
  CHECK(s.alliance_count() == 4);
  CHECK(s.occupied_count() == 4);
  const auto one = AlliancePartition::single_alliance(4);
  CHECK(one.alliance_count() == 1);
  const auto b = AlliancePartition::from_blocks({0, 1, 0, 2});
  CHECK(b.alliance_count() == 3);
  CHECK(b.alliance_of(2) == 0);
}

TEST_CASE("labels must lie below K") {
  CHECK_THROWS_AS(AlliancePartition({0, 3}, 3), ConfigError);
  CHECK_THROWS_AS(AlliancePartition({0}, 0), ConfigError);
}

TEST_CASE("merge keeps K and empties the absorbed alliance") {
  const auto p = AlliancePartition::singletons(3).merged(0, 2);
  CHECK(p.alliance_count() == 3);
  CHECK(p.occupied_count() == 2);
  CHECK(p.alliance_of(2) == 0);
  CHECK(p.members()[2].empty());
  CHECK_THROWS_AS(p.merged(0, 5), ConfigError);
}

TEST_CASE("canonical form is relabelling invariant") {
  const AlliancePartition p({2, 0, 2, 1}, 4);
  const auto c = p.canonical();
  CHECK(c.assignment() == std::vector<std::uint32_t>{0, 1, 0, 2});
  CHECK(c.alliance_count() == 3);
  CHECK(p.relabeled({3, 2, 1, 0}).canonical() == c);
  CHECK_THROWS_AS(p.relabeled({0, 1}), ConfigError);
}
