#include "oracles/walk_enumeration.hpp"

#include <functional>

namespace alliance::oracle {

WalkEnumeration enumerate_walks(const MultiAttributeGraph& g, const AlliancePartition& p, std::uint32_t walk_length) {
  WalkEnumeration out;
  out.roots.assign(g.walk_roots().begin(), g.walk_roots().end());
  out.carrier_count = g.carrier_count();
  out.alliance_count = p.alliance_count();
  const std::size_t nr = out.roots.size();
  out.carrier.assign(out.carrier_count * nr, {});
  out.alliance.assign(out.alliance_count * nr, {});

  std::vector<CarrierIndex> path;
  for (std::size_t r = 0; r < nr; ++r) {
    std::vector<double> m1c(out.carrier_count, 0.0), m2c(out.carrier_count, 0.0);
    std::vector<double> m1a(out.alliance_count, 0.0), m2a(out.alliance_count, 0.0);
    auto finish = [&](double prob) {
      const std::size_t len = path.size();
      if (len == 0) return;
      std::vector<double> xc(out.carrier_count, 0.0), xa(out.alliance_count, 0.0);
      for (CarrierIndex c : path) {
        xc[c] += 1.0 / static_cast<double>(len);
        xa[p.alliance_of(c)] += 1.0 / static_cast<double>(len);
      }
      for (std::size_t c = 0; c < xc.size(); ++c) {
        m1c[c] += prob * xc[c];
        m2c[c] += prob * xc[c] * xc[c];
      }
      for (std::size_t k = 0; k < xa.size(); ++k) {
        m1a[k] += prob * xa[k];
        m2a[k] += prob * xa[k] * xa[k];
      }
    };
    std::function<void(AirportIndex, double)> step = [&](AirportIndex u, double prob) {
      const auto outs = g.out_segments(u);
      if (path.size() == walk_length || outs.empty()) {
        finish(prob);
        return;
      }
      for (SegmentIndex s : outs) {
        const Segment& seg = g.segment(s);
        const double ps = seg.total_weight / g.out_weight(u);
        for (const auto& cw : seg.carriers) {
          path.push_back(cw.carrier);
          step(seg.destination, prob * ps * (cw.weight / seg.total_weight));
          path.pop_back();
        }
      }
    };
    step(out.roots[r], 1.0);
    for (std::size_t c = 0; c < out.carrier_count; ++c) {
      out.carrier[c * nr + r] = CellMoments{m1c[c], m2c[c] - m1c[c] * m1c[c]};
    }
    for (std::size_t k = 0; k < out.alliance_count; ++k) {
      out.alliance[k * nr + r] = CellMoments{m1a[k], m2a[k] - m1a[k] * m1a[k]};
    }
  }
  return out;
}

}  // namespace alliance::oracle
