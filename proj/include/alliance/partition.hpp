#pragma once

#include <cstdint>
#include <vector>

#include "alliance/graph.hpp"

namespace alliance {

/// Assignment of every carrier to exactly one of K alliances.
///
/// Alliance indices are 0-based in memory; file formats write them as 1..K.
/// Empty alliances are allowed.
class AlliancePartition {
 public:
  AlliancePartition() = default;
  AlliancePartition(std::vector<std::uint32_t> alliance_of, std::uint32_t alliance_count);

  static AlliancePartition singletons(std::size_t carriers);
  static AlliancePartition single_alliance(std::size_t carriers);
  // Restricted-growth string (block labels in order of first appearance).
  static AlliancePartition from_blocks(const std::vector<std::uint8_t>& rgs);

  std::size_t carrier_count() const { return alliance_of_.size(); }
  std::uint32_t alliance_count() const { return alliance_count_; }
  std::uint32_t alliance_of(CarrierIndex c) const { return alliance_of_[c]; }
  const std::vector<std::uint32_t>& assignment() const { return alliance_of_; }

  std::vector<std::vector<CarrierIndex>> members() const;
  // Number of alliances with at least one member.
  std::uint32_t occupied_count() const;

  // Moves every member of `absorbed` into `into`; K is unchanged.
  AlliancePartition merged(std::uint32_t into, std::uint32_t absorbed) const;
  // Drops empty alliances and relabels in order of first member. Two
  // partitions equal up to relabeling have equal canonical forms.
  AlliancePartition canonical() const;
  // Same partition with alliance labels permuted: new label = perm[old].
  AlliancePartition relabeled(const std::vector<std::uint32_t>& perm) const;

  bool operator==(const AlliancePartition&) const = default;

 private:
  std::vector<std::uint32_t> alliance_of_;
  std::uint32_t alliance_count_ = 0;
};

}  // namespace alliance
