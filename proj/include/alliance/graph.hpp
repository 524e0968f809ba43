#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace alliance {

using AirportIndex = std::uint32_t;
using CarrierIndex = std::uint32_t;
using SegmentIndex = std::uint32_t;

inline constexpr std::uint32_t kNoIndex = 0xffffffffu;

/// One schedule row: a carrier offering `asm_weight` available seat-miles on
/// the directed segment origin -> destination.
struct ScheduleRecord {
  std::string origin;
  std::string destination;
  std::string carrier;
  double asm_weight = 0.0;
};

struct CarrierWeight {
  CarrierIndex carrier;
  double weight;
};

struct Segment {
  AirportIndex origin;
  AirportIndex destination;
  std::vector<CarrierWeight> carriers;  // sorted by carrier index, all weights > 0
  double total_weight;
};

/// Finite distribution over dense ids (airports or carriers).
struct DiscretePmf {
  std::vector<std::uint32_t> outcomes;
  std::vector<double> probabilities;

  double probability_of(std::uint32_t id) const;
  // Throws IntegrityError if the distribution invariants do not hold.
  void validate() const;
};

/// Airports as nodes, directed segments as edges, carriers as edge attributes
/// weighted by ASM. Immutable after build(); safe to share across threads.
///
/// Airport and carrier names are interned to dense indices in lexicographic
/// order, so the graph (and its content hash) does not depend on record order.
class MultiAttributeGraph {
 public:
  /// Sums duplicate (origin, destination, carrier) rows and drops zero-weight
  /// rows. Throws DataError naming the row index for self-loops, empty ids,
  /// negative or non-finite ASM.
  static MultiAttributeGraph build(std::span<const ScheduleRecord> records);

  std::size_t airport_count() const { return airport_names_.size(); }
  std::size_t carrier_count() const { return carrier_names_.size(); }
  std::size_t segment_count() const { return segments_.size(); }
  // Rows accepted by build(), before aggregation.
  std::size_t record_count() const { return record_count_; }

  const std::string& airport_name(AirportIndex a) const { return airport_names_.at(a); }
  const std::string& carrier_name(CarrierIndex c) const { return carrier_names_.at(c); }
  const std::vector<std::string>& airport_names() const { return airport_names_; }
  const std::vector<std::string>& carrier_names() const { return carrier_names_; }
  std::optional<AirportIndex> find_airport(std::string_view name) const;
  std::optional<CarrierIndex> find_carrier(std::string_view name) const;

  std::span<const Segment> segments() const { return segments_; }
  const Segment& segment(SegmentIndex s) const { return segments_.at(s); }
  std::optional<SegmentIndex> find_segment(AirportIndex u, AirportIndex v) const;
  // Throws DataError if (u, v) is not a segment.
  SegmentIndex segment_index(AirportIndex u, AirportIndex v) const;
  double weight(SegmentIndex s, CarrierIndex c) const;

  // Outgoing segments of u, ordered by destination index.
  std::span<const SegmentIndex> out_segments(AirportIndex u) const;
  double out_weight(AirportIndex u) const { return out_weight_.at(u); }
  bool is_walk_eligible(AirportIndex u) const { return !out_segments(u).empty(); }

  // Airports with at least one outgoing segment, ascending. These are the
  // random-walk roots and the population of the per-root MPC averages.
  std::span<const AirportIndex> walk_roots() const { return walk_roots_; }
  std::span<const AirportIndex> isolated_airports() const { return isolated_; }

  // Inverse-CDF draws used by the samplers; `uniform` must lie in [0, 1).
  SegmentIndex draw_out_segment(AirportIndex u, double uniform) const;
  std::size_t draw_carrier_slot(SegmentIndex s, double uniform) const;

  std::uint64_t content_hash() const { return hash_; }

 private:
  std::vector<std::string> airport_names_;
  std::vector<std::string> carrier_names_;
  std::unordered_map<std::string, AirportIndex> airport_lookup_;
  std::unordered_map<std::string, CarrierIndex> carrier_lookup_;
  std::vector<Segment> segments_;
  std::unordered_map<std::uint64_t, SegmentIndex> segment_lookup_;
  std::vector<std::size_t> out_offsets_;       // CSR over segments_ (sorted by origin, destination)
  std::vector<SegmentIndex> out_list_;
  std::vector<double> out_weight_;
  std::vector<double> out_cumulative_;         // parallel to out_list_
  std::vector<std::size_t> carrier_offsets_;   // per segment into carrier_cumulative_
  std::vector<double> carrier_cumulative_;
  std::vector<AirportIndex> walk_roots_;
  std::vector<AirportIndex> isolated_;
  std::size_t record_count_ = 0;
  std::uint64_t hash_ = 0;
};

DiscretePmf segment_pmf(const MultiAttributeGraph& g, AirportIndex u, AirportIndex v);
DiscretePmf neighbor_pmf(const MultiAttributeGraph& g, AirportIndex u);

class AlliancePartition;

/// Share of the segment's ASM held by members of `alliance` (0-based index).
double alliance_market_share(const MultiAttributeGraph& g, const AlliancePartition& partition,
                             AirportIndex u, AirportIndex v, std::uint32_t alliance);

}  // namespace alliance
