#include "alliance/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <tuple>

#include "alliance/error.hpp"
#include "alliance/hash.hpp"
#include "alliance/partition.hpp"

namespace alliance {

namespace {

std::uint64_t pair_key(AirportIndex u, AirportIndex v) {
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

std::string row_error(std::size_t row, const std::string& what) {
  return "schedule row " + std::to_string(row) + ": " + what;
}

}  // namespace

double DiscretePmf::probability_of(std::uint32_t id) const {
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i] == id) return probabilities[i];
  }
  return 0.0;
}

void DiscretePmf::validate() const {
  if (outcomes.size() != probabilities.size()) throw IntegrityError("pmf: size mismatch");
  if (outcomes.empty()) throw IntegrityError("pmf: empty support");
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw IntegrityError("pmf: invalid probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw IntegrityError("pmf: probabilities do not sum to 1");
}

MultiAttributeGraph MultiAttributeGraph::build(std::span<const ScheduleRecord> records) {
  for (std::size_t row = 0; row < records.size(); ++row) {
    const auto& r = records[row];
    if (r.origin.empty()) throw DataError(row_error(row, "missing origin"));
    if (r.destination.empty()) throw DataError(row_error(row, "missing destination"));
    if (r.carrier.empty()) throw DataError(row_error(row, "missing carrier"));
    if (!std::isfinite(r.asm_weight)) throw DataError(row_error(row, "non-finite ASM"));
    if (r.asm_weight < 0.0) throw DataError(row_error(row, "negative ASM"));
    if (r.origin == r.destination) throw DataError(row_error(row, "self-loop at " + r.origin));
  }

  MultiAttributeGraph g;
  g.record_count_ = records.size();

  // Airports from every row (isolated ones included), carriers only from rows
  // that carry weight.
  std::vector<std::string> airports;
  std::vector<std::string> carriers;
  airports.reserve(2 * records.size());
  for (const auto& r : records) {
    airports.push_back(r.origin);
    airports.push_back(r.destination);
    if (r.asm_weight > 0.0) carriers.push_back(r.carrier);
  }
  auto unique_sorted = [](std::vector<std::string>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  unique_sorted(airports);
  unique_sorted(carriers);
  g.airport_names_ = std::move(airports);
  g.carrier_names_ = std::move(carriers);
  for (AirportIndex i = 0; i < g.airport_names_.size(); ++i) g.airport_lookup_.emplace(g.airport_names_[i], i);
  for (CarrierIndex i = 0; i < g.carrier_names_.size(); ++i) g.carrier_lookup_.emplace(g.carrier_names_[i], i);

  // (origin, destination, carrier) -> summed weight, in index order. Summation
  // order per key follows row order; ties in key are aggregated before sorting,
  // so record permutations only reorder additions of equal keys.
  std::map<std::tuple<AirportIndex, AirportIndex, CarrierIndex>, std::vector<double>> acc;
  for (const auto& r : records) {
    if (r.asm_weight == 0.0) continue;
    acc[{g.airport_lookup_.at(r.origin), g.airport_lookup_.at(r.destination), g.carrier_lookup_.at(r.carrier)}]
        .push_back(r.asm_weight);
  }

  for (auto& [key, weights] : acc) {
    // Sorting the addends makes the sum independent of record order.
    std::sort(weights.begin(), weights.end());
    const double w = std::accumulate(weights.begin(), weights.end(), 0.0);
    const auto [u, v, c] = key;
    if (g.segments_.empty() || g.segments_.back().origin != u || g.segments_.back().destination != v) {
      g.segments_.push_back(Segment{u, v, {}, 0.0});
    }
    g.segments_.back().carriers.push_back(CarrierWeight{c, w});
  }

  const std::size_t n_airports = g.airport_names_.size();
  g.out_offsets_.assign(n_airports + 1, 0);
  g.out_weight_.assign(n_airports, 0.0);
  g.carrier_offsets_.reserve(g.segments_.size() + 1);
  g.carrier_offsets_.push_back(0);
  for (SegmentIndex s = 0; s < g.segments_.size(); ++s) {
    auto& seg = g.segments_[s];
    double total = 0.0;
    for (const auto& cw : seg.carriers) {
      total += cw.weight;
      g.carrier_cumulative_.push_back(total);
    }
    seg.total_weight = total;
    g.carrier_offsets_.push_back(g.carrier_cumulative_.size());
    g.segment_lookup_.emplace(pair_key(seg.origin, seg.destination), s);
    g.out_offsets_[seg.origin + 1]++;
  }
  for (std::size_t a = 0; a < n_airports; ++a) g.out_offsets_[a + 1] += g.out_offsets_[a];
  // segments_ is sorted by (origin, destination), so the CSR lists are ranges.
  g.out_list_.resize(g.segments_.size());
  std::iota(g.out_list_.begin(), g.out_list_.end(), SegmentIndex{0});
  g.out_cumulative_.resize(g.segments_.size());
  for (AirportIndex a = 0; a < n_airports; ++a) {
    double total = 0.0;
    for (std::size_t k = g.out_offsets_[a]; k < g.out_offsets_[a + 1]; ++k) {
      total += g.segments_[g.out_list_[k]].total_weight;
      g.out_cumulative_[k] = total;
    }
    g.out_weight_[a] = total;
    if (g.out_offsets_[a + 1] > g.out_offsets_[a]) {
      g.walk_roots_.push_back(a);
    } else {
      g.isolated_.push_back(a);
    }
  }

  Fnv1a h;
  h.u64(n_airports);
  for (const auto& n : g.airport_names_) h.str(n);
  h.u64(g.carrier_names_.size());
  for (const auto& n : g.carrier_names_) h.str(n);
  h.u64(g.segments_.size());
  for (const auto& seg : g.segments_) {
    h.u64(seg.origin);
    h.u64(seg.destination);
    h.u64(seg.carriers.size());
    for (const auto& cw : seg.carriers) {
      h.u64(cw.carrier);
      h.f64(cw.weight);
    }
  }
  g.hash_ = h.digest();
  return g;
}

std::optional<AirportIndex> MultiAttributeGraph::find_airport(std::string_view name) const {
  auto it = airport_lookup_.find(std::string(name));
  if (it == airport_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<CarrierIndex> MultiAttributeGraph::find_carrier(std::string_view name) const {
  auto it = carrier_lookup_.find(std::string(name));
  if (it == carrier_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<SegmentIndex> MultiAttributeGraph::find_segment(AirportIndex u, AirportIndex v) const {
  auto it = segment_lookup_.find(pair_key(u, v));
  if (it == segment_lookup_.end()) return std::nullopt;
  return it->second;
}

SegmentIndex MultiAttributeGraph::segment_index(AirportIndex u, AirportIndex v) const {
  if (auto s = find_segment(u, v)) return *s;
  auto name = [this](AirportIndex a) {
    return a < airport_count() ? airport_names_[a] : "#" + std::to_string(a);
  };
  throw DataError("unknown segment (" + name(u) + ", " + name(v) + ")");
}

double MultiAttributeGraph::weight(SegmentIndex s, CarrierIndex c) const {
  for (const auto& cw : segments_.at(s).carriers) {
    if (cw.carrier == c) return cw.weight;
  }
  return 0.0;
}

std::span<const SegmentIndex> MultiAttributeGraph::out_segments(AirportIndex u) const {
  const std::size_t b = out_offsets_.at(u);
  const std::size_t e = out_offsets_.at(u + 1);
  return std::span<const SegmentIndex>(out_list_).subspan(b, e - b);
}

SegmentIndex MultiAttributeGraph::draw_out_segment(AirportIndex u, double uniform) const {
  const std::size_t b = out_offsets_[u];
  const std::size_t e = out_offsets_[u + 1];
  if (b == e) return kNoIndex;
  const double target = uniform * out_weight_[u];
  auto it = std::upper_bound(out_cumulative_.begin() + b, out_cumulative_.begin() + e, target);
  if (it == out_cumulative_.begin() + e) --it;  // guards uniform * total rounding up to total
  return out_list_[static_cast<std::size_t>(it - out_cumulative_.begin())];
}

std::size_t MultiAttributeGraph::draw_carrier_slot(SegmentIndex s, double uniform) const {
  const std::size_t b = carrier_offsets_[s];
  const std::size_t e = carrier_offsets_[s + 1];
  const double target = uniform * segments_[s].total_weight;
  auto it = std::upper_bound(carrier_cumulative_.begin() + b, carrier_cumulative_.begin() + e, target);
  if (it == carrier_cumulative_.begin() + e) --it;
  return static_cast<std::size_t>(it - carrier_cumulative_.begin()) - b;
}

DiscretePmf segment_pmf(const MultiAttributeGraph& g, AirportIndex u, AirportIndex v) {
  const Segment& seg = g.segment(g.segment_index(u, v));
  DiscretePmf pmf;
  pmf.outcomes.reserve(seg.carriers.size());
  pmf.probabilities.reserve(seg.carriers.size());
  for (const auto& cw : seg.carriers) {
    pmf.outcomes.push_back(cw.carrier);
    pmf.probabilities.push_back(cw.weight / seg.total_weight);
  }
  return pmf;
}

DiscretePmf neighbor_pmf(const MultiAttributeGraph& g, AirportIndex u) {
  if (u >= g.airport_count()) throw DataError("unknown airport index " + std::to_string(u));
  const auto out = g.out_segments(u);
  if (out.empty()) throw DataError("airport " + g.airport_name(u) + " has no outgoing segments");
  DiscretePmf pmf;
  for (SegmentIndex s : out) {
    const Segment& seg = g.segment(s);
    pmf.outcomes.push_back(seg.destination);
    pmf.probabilities.push_back(seg.total_weight / g.out_weight(u));
  }
  return pmf;
}

double alliance_market_share(const MultiAttributeGraph& g, const AlliancePartition& partition,
                             AirportIndex u, AirportIndex v, std::uint32_t alliance) {
  if (alliance >= partition.alliance_count()) {
    throw ConfigError("alliance index " + std::to_string(alliance) + " out of range");
  }
  if (partition.carrier_count() != g.carrier_count()) {
    throw IntegrityError("partition does not cover the graph's carriers");
  }
  const Segment& seg = g.segment(g.segment_index(u, v));
  double held = 0.0;
  for (const auto& cw : seg.carriers) {
    if (partition.alliance_of(cw.carrier) == alliance) held += cw.weight;
  }
  return held / seg.total_weight;
}

}  // namespace alliance
