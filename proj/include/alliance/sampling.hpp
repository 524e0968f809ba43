#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "alliance/graph.hpp"

namespace alliance {

struct SamplingConfig {
  std::uint32_t n_walks = 50;            // walks per root airport
  std::uint32_t walk_length = 2;         // L, segments per walk
  std::uint32_t n_segment_samples = 50;  // |N_uv|
  std::uint64_t seed = 0;

  void validate() const;
};

/// Airport, carrier and weight tensors of one walk realization.
///
/// Shapes: airports (R x n_walks x (L+1)), carriers and weights
/// (R x n_walks x L), where R = roots.size(). A walk that reaches an airport
/// without outgoing segments stops early; `lengths` holds the realized step
/// count and the unused tail holds kNoIndex / 0.
struct WalkTensors {
  std::vector<AirportIndex> roots;
  std::uint32_t n_walks = 0;
  std::uint32_t walk_length = 0;
  std::vector<std::uint32_t> lengths;
  std::vector<AirportIndex> airports;
  std::vector<CarrierIndex> carriers;
  std::vector<double> weights;

  std::size_t root_count() const { return roots.size(); }
  std::size_t walk_count() const { return roots.size() * n_walks; }
  std::size_t walk_id(std::size_t root, std::size_t walk) const { return root * n_walks + walk; }
  AirportIndex airport(std::size_t walk_id, std::size_t step) const {
    return airports[walk_id * (walk_length + 1) + step];
  }
  CarrierIndex carrier(std::size_t walk_id, std::size_t step) const { return carriers[walk_id * walk_length + step]; }
  double weight(std::size_t walk_id, std::size_t step) const { return weights[walk_id * walk_length + step]; }
};

/// Carrier and weight draws along the walks of a WalkTensors.
struct StepSamples {
  std::vector<CarrierIndex> carriers;
  std::vector<double> weights;
};

/// n i.i.d. carrier draws per segment, stored segment-major.
struct SegmentSampleSet {
  std::uint32_t per_segment = 0;
  std::vector<CarrierIndex> draws;

  std::size_t segment_count() const { return per_segment == 0 ? 0 : draws.size() / per_segment; }
  std::span<const CarrierIndex> of(SegmentIndex s) const {
    return std::span<const CarrierIndex>(draws).subspan(static_cast<std::size_t>(s) * per_segment, per_segment);
  }
};

/// One complete sampling realization: what every estimator consumes.
struct Realization {
  SamplingConfig config;
  std::uint64_t graph_hash = 0;
  WalkTensors walks;
  SegmentSampleSet segments;
};

/// Weighted random walks from every walk-eligible airport. Step l of walk j
/// from root i draws from Stream::kWalk keyed (seed, i, j) at counter l, so
/// the result does not depend on thread count or scheduling.
/// Fills roots, lengths and airports; carriers/weights are left empty.
WalkTensors run_walks(const MultiAttributeGraph& g, const SamplingConfig& cfg);

/// Draws the carrier on every realized walk step from the segment PMF.
/// Throws IntegrityError if a step of `walks` is not a segment of `g`.
StepSamples conditional_sample(const MultiAttributeGraph& g, const WalkTensors& walks, const SamplingConfig& cfg);

/// run_walks followed by conditional_sample, merged into one WalkTensors.
WalkTensors sample_walks(const MultiAttributeGraph& g, const SamplingConfig& cfg);

SegmentSampleSet sample_segments(const MultiAttributeGraph& g, const SamplingConfig& cfg);

Realization draw_realization(const MultiAttributeGraph& g, const SamplingConfig& cfg);

// Binary cache. Header: magic "ALWT", version, dims, seed, graph hash.
void save_realization(const std::filesystem::path& path, const Realization& r);
Realization load_realization(const std::filesystem::path& path);

/// Reuses the cache at `path` when its graph hash and config match, otherwise
/// (or when `force` is set) draws a fresh realization and rewrites the cache.
Realization load_or_draw(const std::filesystem::path& path, const MultiAttributeGraph& g, const SamplingConfig& cfg,
                         bool force);

// Serial reference implementations, kept for tests and benchmarks.
namespace reference {
WalkTensors run_walks(const MultiAttributeGraph& g, const SamplingConfig& cfg);
StepSamples conditional_sample(const MultiAttributeGraph& g, const WalkTensors& walks, const SamplingConfig& cfg);
SegmentSampleSet sample_segments(const MultiAttributeGraph& g, const SamplingConfig& cfg);
}  // namespace reference

}  // namespace alliance
