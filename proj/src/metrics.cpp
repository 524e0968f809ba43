#include "alliance/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "alliance/error.hpp"

namespace alliance {

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double MpcTable::mpc_term() const {
  if (w_carrier.empty()) return 0.0;
  return pairwise_sum(w_carrier) / static_cast<double>(w_carrier.size());
}

ObjectiveBreakdown objective(double hhi_mean, double mpc_term, double beta, double gamma) {
  if (beta < 0.0 || gamma < 0.0) throw ConfigError("beta and gamma must be non-negative");
  return ObjectiveBreakdown{hhi_mean, mpc_term, beta, gamma, -beta * hhi_mean + gamma * mpc_term};
}

namespace {

void check_cover(const MultiAttributeGraph& g, const AlliancePartition& p) {
  if (p.carrier_count() != g.carrier_count()) {
    throw IntegrityError("partition covers " + std::to_string(p.carrier_count()) + " carriers, graph has " +
                         std::to_string(g.carrier_count()));
  }
}

double hhi_of_segment(const Segment& seg, const AlliancePartition& p, std::vector<double>& share) {
  share.assign(p.alliance_count(), 0.0);
  for (const auto& cw : seg.carriers) share[p.alliance_of(cw.carrier)] += cw.weight;
  double h = 0.0;
  for (double s : share) {
    const double q = s / seg.total_weight;
    h += q * q;
  }
  return h;
}

// Fills the per-root MPC products and the floored log aggregate.
void finish_mpc(MpcTable& t, const AlliancePartition& p, double epsilon) {
  const std::size_t nr = t.roots.size();
  t.w_root.assign(t.carrier_count * nr, 0.0);
  t.w_carrier.assign(t.carrier_count, 0.0);
  t.floored.assign(t.carrier_count, 0);
  for (std::size_t c = 0; c < t.carrier_count; ++c) {
    const std::size_t k = p.alliance_of(static_cast<CarrierIndex>(c));
    for (std::size_t r = 0; r < nr; ++r) t.w_root[c * nr + r] = t.p_carrier[c * nr + r] * t.p_alliance[k * nr + r];
    const double mean =
        nr == 0 ? 0.0 : pairwise_sum(std::span<const double>(t.w_root).subspan(c * nr, nr)) / static_cast<double>(nr);
    if (mean < epsilon) {
      t.floored[c] = 1;
      t.w_carrier[c] = std::log(epsilon);
    } else {
      t.w_carrier[c] = std::log(mean);
    }
  }
}

}  // namespace

double hhi_segment_exact(const MultiAttributeGraph& g, const AlliancePartition& p, SegmentIndex s) {
  check_cover(g, p);
  std::vector<double> share;
  return hhi_of_segment(g.segment(s), p, share);
}

double hhi_segment_exact(const MultiAttributeGraph& g, const AlliancePartition& p, AirportIndex u, AirportIndex v) {
  return hhi_segment_exact(g, p, g.segment_index(u, v));
}

double hhi_segment_estimate(std::span<const CarrierIndex> samples, const AlliancePartition& p) {
  if (samples.empty()) throw ConfigError("hhi estimate needs at least one sample");
  std::vector<std::uint32_t> counts(p.alliance_count(), 0);
  for (CarrierIndex c : samples) counts[p.alliance_of(c)]++;
  const double n = static_cast<double>(samples.size());
  double h = 0.0;
  for (auto k : counts) {
    const double q = static_cast<double>(k) / n;
    h += q * q;
  }
  return h;
}

std::vector<double> hhi_segments_exact(const MultiAttributeGraph& g, const AlliancePartition& p) {
  check_cover(g, p);
  std::vector<double> out(g.segment_count());
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel
  {
    std::vector<double> share;
#pragma omp for schedule(static)
    for (std::int64_t s = 0; s < n; ++s) out[static_cast<std::size_t>(s)] = hhi_of_segment(g.segment(static_cast<SegmentIndex>(s)), p, share);
  }
  return out;
}

std::vector<double> hhi_segments_estimate(const SegmentSampleSet& samples, const AlliancePartition& p) {
  std::vector<double> out(samples.segment_count());
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel
  {
    std::vector<std::uint32_t> counts(p.alliance_count());
    std::vector<std::uint32_t> touched;
#pragma omp for schedule(static)
    for (std::int64_t s = 0; s < n; ++s) {
      // Sparse reset: only alliances seen on this segment are touched.
      touched.clear();
      for (CarrierIndex c : samples.of(static_cast<SegmentIndex>(s))) {
        const auto k = p.alliance_of(c);
        if (counts[k]++ == 0) touched.push_back(k);
      }
      std::sort(touched.begin(), touched.end());
      // Divide rather than multiply by 1/n to round like the scalar estimator.
      const double n_samples = static_cast<double>(samples.per_segment);
      double h = 0.0;
      for (auto k : touched) {
        const double q = static_cast<double>(counts[k]) / n_samples;
        h += q * q;
        counts[k] = 0;
      }
      out[static_cast<std::size_t>(s)] = h;
    }
  }
  return out;
}

double hhi_mean_exact(const MultiAttributeGraph& g, const AlliancePartition& p) {
  const auto h = hhi_segments_exact(g, p);
  if (h.empty()) throw DataError("graph has no segments");
  return pairwise_sum(h) / static_cast<double>(h.size());
}

double hhi_mean_estimate(const SegmentSampleSet& samples, const AlliancePartition& p) {
  const auto h = hhi_segments_estimate(samples, p);
  if (h.empty()) throw DataError("sample set has no segments");
  return pairwise_sum(h) / static_cast<double>(h.size());
}

MpcTable mpc_exact(const MultiAttributeGraph& g, const AlliancePartition& p, std::uint32_t walk_length,
                   double epsilon) {
  check_cover(g, p);
  const std::size_t na = g.airport_count();
  const std::size_t nc = g.carrier_count();
  const std::size_t nk = p.alliance_count();

  // prev/next are airport-major: [airport][carrier] and [airport][alliance].
  std::vector<double> prev_c(na * nc, 0.0), next_c(na * nc, 0.0);
  std::vector<double> prev_k(na * nk, 0.0), next_k(na * nk, 0.0);
  for (std::uint32_t depth = 1; depth <= walk_length; ++depth) {
    const double inv = 1.0 / static_cast<double>(depth);
    const auto n = static_cast<std::int64_t>(na);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t ii = 0; ii < n; ++ii) {
      const auto i = static_cast<AirportIndex>(ii);
      double* pc = &next_c[i * nc];
      double* pk = &next_k[i * nk];
      std::fill(pc, pc + nc, 0.0);
      std::fill(pk, pk + nk, 0.0);
      const double out_w = g.out_weight(i);
      for (SegmentIndex s : g.out_segments(i)) {
        const Segment& seg = g.segment(s);
        const double pv = seg.total_weight / out_w;
        const AirportIndex v = seg.destination;
        // sum over tau' of P_iv(tau'): the mass multiplying the deeper term
        double mass = 0.0;
        for (const auto& cw : seg.carriers) mass += cw.weight / seg.total_weight;
        for (std::size_t c = 0; c < nc; ++c) pc[c] += pv * mass * prev_c[v * nc + c];
        for (std::size_t k = 0; k < nk; ++k) pk[k] += pv * mass * prev_k[v * nk + k];
        for (const auto& cw : seg.carriers) {
          const double q = cw.weight / seg.total_weight;
          pc[cw.carrier] += pv * q;
          pk[p.alliance_of(cw.carrier)] += pv * q;
        }
      }
      for (std::size_t c = 0; c < nc; ++c) pc[c] *= inv;
      for (std::size_t k = 0; k < nk; ++k) pk[k] *= inv;
    }
    std::swap(prev_c, next_c);
    std::swap(prev_k, next_k);
  }

  MpcTable t;
  t.roots.assign(g.walk_roots().begin(), g.walk_roots().end());
  t.carrier_count = nc;
  t.alliance_count = nk;
  const std::size_t nr = t.roots.size();
  t.p_carrier.assign(nc * nr, 0.0);
  t.p_alliance.assign(nk * nr, 0.0);
  for (std::size_t r = 0; r < nr; ++r) {
    const AirportIndex i = t.roots[r];
    for (std::size_t c = 0; c < nc; ++c) t.p_carrier[c * nr + r] = prev_c[i * nc + c];
    for (std::size_t k = 0; k < nk; ++k) t.p_alliance[k * nr + r] = prev_k[i * nk + k];
  }
  finish_mpc(t, p, epsilon);
  return t;
}

std::vector<double> carrier_root_probabilities(const WalkTensors& walks, std::size_t carrier_count) {
  const std::size_t nr = walks.root_count();
  std::vector<double> out(carrier_count * nr, 0.0);
  const auto n = static_cast<std::int64_t>(nr);
#pragma omp parallel
  {
    std::vector<double> local(carrier_count);
#pragma omp for schedule(static)
    for (std::int64_t rr = 0; rr < n; ++rr) {
      const auto r = static_cast<std::size_t>(rr);
      std::fill(local.begin(), local.end(), 0.0);
      for (std::uint32_t j = 0; j < walks.n_walks; ++j) {
        const std::size_t w = walks.walk_id(r, j);
        const std::uint32_t len = walks.lengths[w];
        if (len == 0) continue;
        const double unit = 1.0 / (static_cast<double>(walks.n_walks) * len);
        for (std::uint32_t l = 0; l < len; ++l) local[walks.carrier(w, l)] += unit;
      }
      for (std::size_t c = 0; c < carrier_count; ++c) out[c * nr + r] = local[c];
    }
  }
  return out;
}

MpcTable mpc_estimate(const WalkTensors& walks, const AlliancePartition& p, double epsilon) {
  if (walks.carriers.size() != walks.walk_count() * walks.walk_length) {
    throw IntegrityError("walk tensors carry no carrier samples");
  }
  MpcTable t;
  t.roots = walks.roots;
  t.carrier_count = p.carrier_count();
  t.alliance_count = p.alliance_count();
  const std::size_t nr = t.roots.size();
  const std::size_t nk = t.alliance_count;
  t.p_carrier = carrier_root_probabilities(walks, t.carrier_count);
  t.p_alliance.assign(nk * nr, 0.0);
  const auto n = static_cast<std::int64_t>(nr);
#pragma omp parallel
  {
    std::vector<double> local(nk);
#pragma omp for schedule(static)
    for (std::int64_t rr = 0; rr < n; ++rr) {
      const auto r = static_cast<std::size_t>(rr);
      std::fill(local.begin(), local.end(), 0.0);
      for (std::uint32_t j = 0; j < walks.n_walks; ++j) {
        const std::size_t w = walks.walk_id(r, j);
        const std::uint32_t len = walks.lengths[w];
        if (len == 0) continue;
        const double unit = 1.0 / (static_cast<double>(walks.n_walks) * len);
        for (std::uint32_t l = 0; l < len; ++l) local[p.alliance_of(walks.carrier(w, l))] += unit;
      }
      for (std::size_t k = 0; k < nk; ++k) t.p_alliance[k * nr + r] = local[k];
    }
  }
  finish_mpc(t, p, epsilon);
  return t;
}

ObjectiveBreakdown estimate_objective(const AlliancePartition& p, const Realization& r, double beta, double gamma) {
  const double h = hhi_mean_estimate(r.segments, p);
  const double m = mpc_estimate(r.walks, p).mpc_term();
  return objective(h, m, beta, gamma);
}

ObjectiveBreakdown exact_objective(const MultiAttributeGraph& g, const AlliancePartition& p,
                                   std::uint32_t walk_length, double beta, double gamma) {
  const double h = hhi_mean_exact(g, p);
  const double m = mpc_exact(g, p, walk_length).mpc_term();
  return objective(h, m, beta, gamma);
}

}  // namespace alliance
