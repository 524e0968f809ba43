#include <cmath>

#include "alliance/error.hpp"
#include "alliance/metrics.hpp"

namespace alliance::reference {

std::vector<double> hhi_segments_estimate(const SegmentSampleSet& samples, const AlliancePartition& p) {
  std::vector<double> out;
  out.reserve(samples.segment_count());
  for (SegmentIndex s = 0; s < samples.segment_count(); ++s) {
    out.push_back(alliance::hhi_segment_estimate(samples.of(s), p));
  }
  return out;
}

MpcTable mpc_estimate(const WalkTensors& walks, const AlliancePartition& p, double epsilon) {
  MpcTable t;
  t.roots = walks.roots;
  t.carrier_count = p.carrier_count();
  t.alliance_count = p.alliance_count();
  const std::size_t nr = t.roots.size();
  t.p_carrier.assign(t.carrier_count * nr, 0.0);
  t.p_alliance.assign(t.alliance_count * nr, 0.0);
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::uint32_t j = 0; j < walks.n_walks; ++j) {
      const std::size_t w = walks.walk_id(r, j);
      const std::uint32_t len = walks.lengths[w];
      if (len == 0) continue;
      const double unit = 1.0 / (static_cast<double>(walks.n_walks) * len);
      for (std::uint32_t l = 0; l < len; ++l) {
        const CarrierIndex c = walks.carrier(w, l);
        t.p_carrier[c * nr + r] += unit;
        t.p_alliance[p.alliance_of(c) * nr + r] += unit;
      }
    }
  }
  t.w_root.assign(t.carrier_count * nr, 0.0);
  t.w_carrier.assign(t.carrier_count, 0.0);
  t.floored.assign(t.carrier_count, 0);
  for (std::size_t c = 0; c < t.carrier_count; ++c) {
    for (std::size_t k = 0; k < t.alliance_count; ++k) {
      const double x = p.alliance_of(static_cast<CarrierIndex>(c)) == k ? 1.0 : 0.0;
      for (std::size_t r = 0; r < nr; ++r) t.w_root[c * nr + r] += x * t.p_alliance[k * nr + r] * t.p_carrier[c * nr + r];
    }
    const double mean = pairwise_sum(std::span<const double>(t.w_root).subspan(c * nr, nr)) / static_cast<double>(nr);
    t.floored[c] = mean < epsilon ? 1 : 0;
    t.w_carrier[c] = std::log(std::max(mean, epsilon));
  }
  return t;
}

}  // namespace alliance::reference
