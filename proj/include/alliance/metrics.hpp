#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "alliance/graph.hpp"
#include "alliance/partition.hpp"
#include "alliance/sampling.hpp"

namespace alliance {

// Floor applied before the MPC logarithm; shared with the MIQP's z domain.
inline constexpr double kEpsilonFloor = 1e-6;

/// Fixed-shape pairwise summation: the result depends only on the values and
/// their order, never on how the caller parallelised producing them.
double pairwise_sum(std::span<const double> values);

/// Per-root penetration probabilities and per-carrier log MPC.
/// Tables are carrier-major (resp. alliance-major) with one column per root.
struct MpcTable {
  std::vector<AirportIndex> roots;
  std::size_t carrier_count = 0;
  std::size_t alliance_count = 0;
  std::vector<double> p_carrier;   // p(tau | i, L)
  std::vector<double> p_alliance;  // p(alpha_k | i, L)
  std::vector<double> w_root;      // w_{tau,i}
  std::vector<double> w_carrier;   // log(max(mean_i w_{tau,i}, eps))
  std::vector<std::uint8_t> floored;  // 1 where the floor was applied

  std::size_t root_count() const { return roots.size(); }
  double carrier_at(std::size_t c, std::size_t r) const { return p_carrier[c * roots.size() + r]; }
  double alliance_at(std::size_t k, std::size_t r) const { return p_alliance[k * roots.size() + r]; }
  double w_at(std::size_t c, std::size_t r) const { return w_root[c * roots.size() + r]; }
  // Mean over carriers of w_carrier.
  double mpc_term() const;
};

struct ObjectiveBreakdown {
  double hhi_mean = 0.0;  // positive fraction
  double mpc_term = 0.0;  // <= 0
  double beta = 0.0;
  double gamma = 0.0;
  double objective = 0.0;  // -beta * hhi_mean + gamma * mpc_term
};

ObjectiveBreakdown objective(double hhi_mean, double mpc_term, double beta, double gamma);

double hhi_segment_exact(const MultiAttributeGraph& g, const AlliancePartition& p, AirportIndex u, AirportIndex v);
double hhi_segment_exact(const MultiAttributeGraph& g, const AlliancePartition& p, SegmentIndex s);
// Throws ConfigError on an empty sample list.
double hhi_segment_estimate(std::span<const CarrierIndex> samples, const AlliancePartition& p);

std::vector<double> hhi_segments_exact(const MultiAttributeGraph& g, const AlliancePartition& p);
std::vector<double> hhi_segments_estimate(const SegmentSampleSet& samples, const AlliancePartition& p);
double hhi_mean_exact(const MultiAttributeGraph& g, const AlliancePartition& p);
double hhi_mean_estimate(const SegmentSampleSet& samples, const AlliancePartition& p);

/// Depth-L dynamic program over (airport, depth) for the carrier and alliance
/// penetration recursions, with the 1/depth prefactor applied at every level
/// and p(. | i, 0) = 0. Roots are the graph's walk-eligible airports.
MpcTable mpc_exact(const MultiAttributeGraph& g, const AlliancePartition& p, std::uint32_t walk_length,
                   double epsilon = kEpsilonFloor);

/// Normalised indicator sums over the walk tensors. A truncated walk
/// contributes its realised steps with weight 1/len so every walk carries
/// equal mass.
MpcTable mpc_estimate(const WalkTensors& walks, const AlliancePartition& p, double epsilon = kEpsilonFloor);

/// Carrier-major table of p^(tau | i, L); independent of the partition.
std::vector<double> carrier_root_probabilities(const WalkTensors& walks, std::size_t carrier_count);

/// In-sample estimated objective on one realization.
ObjectiveBreakdown estimate_objective(const AlliancePartition& p, const Realization& r, double beta, double gamma);

/// Unestimated objective: exact HHI and the MPC recursion.
ObjectiveBreakdown exact_objective(const MultiAttributeGraph& g, const AlliancePartition& p,
                                   std::uint32_t walk_length, double beta, double gamma);

namespace reference {
std::vector<double> hhi_segments_estimate(const SegmentSampleSet& samples, const AlliancePartition& p);
MpcTable mpc_estimate(const WalkTensors& walks, const AlliancePartition& p, double epsilon = kEpsilonFloor);
}  // namespace reference

}  // namespace alliance
