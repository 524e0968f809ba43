// Straight-line serial versions of the sampling kernels. They consume the
// same counter-based streams, so their output must match the parallel
// kernels bit for bit.
#include <algorithm>

#include "alliance/error.hpp"
#include "alliance/rng.hpp"
#include "alliance/sampling.hpp"

namespace alliance::reference {

WalkTensors run_walks(const MultiAttributeGraph& g, const SamplingConfig& cfg) {
  cfg.validate();
  if (g.walk_roots().empty()) throw DataError("graph has no airport with outgoing segments");
  WalkTensors t;
  t.roots.assign(g.walk_roots().begin(), g.walk_roots().end());
  t.n_walks = cfg.n_walks;
  t.walk_length = cfg.walk_length;
  for (std::size_t r = 0; r < t.roots.size(); ++r) {
    for (std::uint32_t j = 0; j < cfg.n_walks; ++j) {
      StreamRng rng(cfg.seed, Stream::kWalk, t.roots[r], j);
      std::vector<AirportIndex> path{t.roots[r]};
      for (std::uint32_t l = 0; l < cfg.walk_length; ++l) {
        // Sequential next() reads counters 0, 1, 2, ... exactly like uniform_at(l).
        const double u = rng.uniform();
        const auto pmf = g.out_segments(path.back());
        if (pmf.empty()) break;
        // Linear inverse-CDF scan over the neighbor weights.
        const double target = u * g.out_weight(path.back());
        double cum = 0.0;
        SegmentIndex pick = pmf.back();
        for (SegmentIndex s : pmf) {
          cum += g.segment(s).total_weight;
          if (target < cum) {
            pick = s;
            break;
          }
        }
        path.push_back(g.segment(pick).destination);
      }
      t.lengths.push_back(static_cast<std::uint32_t>(path.size() - 1));
      path.resize(cfg.walk_length + 1, kNoIndex);
      t.airports.insert(t.airports.end(), path.begin(), path.end());
    }
  }
  return t;
}

StepSamples conditional_sample(const MultiAttributeGraph& g, const WalkTensors& walks, const SamplingConfig& cfg) {
  StepSamples out;
  for (std::size_t r = 0; r < walks.roots.size(); ++r) {
    for (std::uint32_t j = 0; j < walks.n_walks; ++j) {
      const std::size_t w = walks.walk_id(r, j);
      StreamRng rng(cfg.seed, Stream::kCarrier, walks.roots[r], j);
      for (std::uint32_t l = 0; l < walks.walk_length; ++l) {
        const double u = rng.uniform();
        if (l >= walks.lengths[w]) {
          out.carriers.push_back(kNoIndex);
          out.weights.push_back(0.0);
          continue;
        }
        const auto seg = g.find_segment(walks.airport(w, l), walks.airport(w, l + 1));
        if (!seg) throw IntegrityError("walk tensor references a pair that is not a segment of this graph");
        const Segment& s = g.segment(*seg);
        const double target = u * s.total_weight;
        double cum = 0.0;
        CarrierWeight pick = s.carriers.back();
        for (const auto& cw : s.carriers) {
          cum += cw.weight;
          if (target < cum) {
            pick = cw;
            break;
          }
        }
        out.carriers.push_back(pick.carrier);
        out.weights.push_back(pick.weight);
      }
    }
  }
  return out;
}

SegmentSampleSet sample_segments(const MultiAttributeGraph& g, const SamplingConfig& cfg) {
  cfg.validate();
  SegmentSampleSet out;
  out.per_segment = cfg.n_segment_samples;
  for (SegmentIndex seg = 0; seg < g.segment_count(); ++seg) {
    StreamRng rng(cfg.seed, Stream::kSegment, seg);
    const Segment& s = g.segment(seg);
    for (std::uint32_t k = 0; k < cfg.n_segment_samples; ++k) {
      const double target = rng.uniform() * s.total_weight;
      double cum = 0.0;
      CarrierIndex pick = s.carriers.back().carrier;
      for (const auto& cw : s.carriers) {
        cum += cw.weight;
        if (target < cum) {
          pick = cw.carrier;
          break;
        }
      }
      out.draws.push_back(pick);
    }
  }
  return out;
}

}  // namespace alliance::reference
