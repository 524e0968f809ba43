#pragma once

#include <cstdint>
#include <vector>

#include "alliance/graph.hpp"
#include "alliance/partition.hpp"

namespace alliance::oracle {

// Mean and variance of one walk's normalised indicator count
// X = (1/len) * sum_l 1[event at step l]; a walk of length 0 contributes 0.
struct CellMoments {
  double mean = 0.0;
  double variance = 0.0;
};

struct WalkEnumeration {
  std::vector<AirportIndex> roots;
  std::size_t carrier_count = 0;
  std::size_t alliance_count = 0;
  std::vector<CellMoments> carrier;   // carrier-major x roots
  std::vector<CellMoments> alliance;  // alliance-major x roots

  const CellMoments& carrier_at(std::size_t c, std::size_t r) const { return carrier[c * roots.size() + r]; }
  const CellMoments& alliance_at(std::size_t k, std::size_t r) const { return alliance[k * roots.size() + r]; }
};

// Exhaustive enumeration of every (segment, carrier) outcome sequence of a
// weighted walk of at most L steps from each walk root; walks stop early at
// airports without outgoing segments. Exponential in L: tiny graphs only.
WalkEnumeration enumerate_walks(const MultiAttributeGraph& g, const AlliancePartition& p, std::uint32_t walk_length);

}  // namespace alliance::oracle
