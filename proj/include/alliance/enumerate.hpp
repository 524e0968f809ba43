#pragma once

#include <cstdint>
#include <vector>

#include "alliance/graph.hpp"
#include "alliance/metrics.hpp"
#include "alliance/partition.hpp"

namespace alliance {

std::uint64_t bell_number(unsigned n);

/// Every set partition of n elements with at most max_blocks blocks, as
/// restricted-growth strings in lexicographic order.
std::vector<std::vector<std::uint8_t>> set_partitions(unsigned n, unsigned max_blocks);

/// Unestimated objective for arbitrary partitions of one graph: exact HHI
/// from segment shares and MPC from the depth recursion. The carrier-level
/// recursion is partition independent and the alliance recursion is linear in
/// the membership indicator, so one carrier table serves every partition.
class ExactEvaluator {
 public:
  ExactEvaluator(const MultiAttributeGraph& g, std::uint32_t walk_length);
  ObjectiveBreakdown evaluate(const AlliancePartition& p, double beta, double gamma) const;
  std::size_t carrier_count() const { return carriers_; }

 private:
  std::size_t carriers_;
  MpcTable carrier_table_;
  std::vector<std::vector<std::pair<CarrierIndex, double>>> shares_;
};

struct LandscapePoint {
  std::uint64_t partition_id;  // index into set_partitions(|T|, |T|)
  double hhi_mean;
  double mpc_term;
  double objective;
};

struct EnumerationResult {
  AlliancePartition best;
  std::uint64_t best_id = 0;
  ObjectiveBreakdown best_breakdown;
  std::vector<LandscapePoint> landscape;
};

/// Exhaustive maximisation of the unestimated objective (exact HHI, MPC by
/// the depth recursion) over all set partitions of the carriers. Ties keep
/// the lowest partition id. Throws SizeCapError above max_carriers.
EnumerationResult enumerate_partitions(const MultiAttributeGraph& g, std::uint32_t walk_length, double beta,
                                       double gamma, unsigned max_carriers = 10);

}  // namespace alliance
