#include "alliance/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "alliance/error.hpp"
#include "alliance/metrics.hpp"
#include "alliance/rng.hpp"

namespace alliance {

namespace {

struct Candidate {
  double gain = -std::numeric_limits<double>::infinity();
  std::uint32_t p = kNoIndex;
  std::uint32_t q = kNoIndex;

  // Larger gain wins; equal gains fall back to the smaller (p, q).
  bool better_than(const Candidate& o) const {
    if (gain != o.gain) return gain > o.gain;
    if (p != o.p) return p < o.p;
    return q < o.q;
  }
};

std::vector<std::uint32_t> occupied_blocks(const AlliancePartition& part) {
  std::vector<std::uint32_t> active;
  const auto members = part.members();
  for (std::uint32_t k = 0; k < members.size(); ++k) {
    if (!members[k].empty()) active.push_back(k);
  }
  return active;
}

// Upper-triangular gain cache indexed by block ids.
class GainCache {
 public:
  explicit GainCache(std::size_t n) : n_(n), g_(n * n, 0.0) {}
  double& at(std::uint32_t p, std::uint32_t q) { return g_[static_cast<std::size_t>(p) * n_ + q]; }

  void fill_all(const MergeObjective& obj, const std::vector<std::uint32_t>& active) {
    const auto n = static_cast<std::int64_t>(active.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t a = 0; a < n; ++a) {
      for (std::int64_t b = a + 1; b < n; ++b) {
        at(active[a], active[b]) = obj.gain(active[a], active[b]);
      }
    }
  }

  void fill_block(const MergeObjective& obj, const std::vector<std::uint32_t>& active, std::uint32_t p) {
    const auto n = static_cast<std::int64_t>(active.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t a = 0; a < n; ++a) {
      const std::uint32_t r = active[a];
      if (r == p) continue;
      const std::uint32_t lo = std::min(r, p), hi = std::max(r, p);
      at(lo, hi) = obj.gain(lo, hi);
    }
  }

  Candidate best(const std::vector<std::uint32_t>& active) {
    Candidate best;
    const auto n = static_cast<std::int64_t>(active.size());
#pragma omp parallel
    {
      Candidate local;
#pragma omp for schedule(static) nowait
      for (std::int64_t a = 0; a < n; ++a) {
        for (std::int64_t b = a + 1; b < n; ++b) {
          const Candidate c{at(active[a], active[b]), active[a], active[b]};
          if (c.better_than(local)) local = c;
        }
      }
#pragma omp critical(alliance_greedy_best)
      if (local.better_than(best)) best = local;
    }
    return best;
  }

 private:
  std::size_t n_;
  std::vector<double> g_;
};

void record_merge(GreedyTrace& trace, MergeObjective& obj, std::vector<std::uint32_t>& active, const Candidate& c) {
  obj.merge(c.p, c.q);
  active.erase(std::find(active.begin(), active.end(), c.q));
  trace.steps.push_back(GreedyStep{static_cast<std::uint32_t>(trace.steps.size() + 1), c.p, c.q, obj.value(),
                                   static_cast<std::uint32_t>(active.size())});
}

AlliancePartition apply_steps(AlliancePartition part, const std::vector<GreedyStep>& steps) {
  for (const auto& s : steps) part = part.merged(s.p, s.q);
  return part.canonical();
}

}  // namespace

GreedyTrace greedy_merge(MergeObjective& obj, const GreedyOptions& options) {
  const AlliancePartition start = obj.initial_partition();
  if (start.carrier_count() == 0) throw DataError("greedy: no carriers to partition");
  std::vector<std::uint32_t> active = occupied_blocks(start);
  GreedyTrace trace;
  trace.initial_objective = obj.value();
  trace.initial_alliance_count = static_cast<std::uint32_t>(active.size());

  GainCache cache(start.alliance_count());
  cache.fill_all(obj, active);
  while (active.size() > 1 && trace.steps.size() < options.max_merges) {
    const Candidate c = cache.best(active);
    if (!(c.gain > 0.0)) break;
    record_merge(trace, obj, active, c);
    if (options.resync_interval > 0 && trace.steps.size() % options.resync_interval == 0) {
      obj.resync();
      trace.steps.back().objective = obj.value();
      cache.fill_all(obj, active);
    } else {
      cache.fill_block(obj, active, c.p);
    }
  }
  trace.partition = apply_steps(start, trace.steps);
  return trace;
}

GreedyTrace greedy_merge_sampled(MergeObjective& obj, std::size_t n_candidates, std::uint64_t seed,
                                 const GreedyOptions& options) {
  if (n_candidates < 1) throw ConfigError("n_candidates must be >= 1");
  const AlliancePartition start = obj.initial_partition();
  if (start.carrier_count() == 0) throw DataError("greedy: no carriers to partition");
  std::vector<std::uint32_t> active = occupied_blocks(start);
  GreedyTrace trace;
  trace.initial_objective = obj.value();
  trace.initial_alliance_count = static_cast<std::uint32_t>(active.size());

  std::vector<double> cumulative;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  while (active.size() > 1 && trace.steps.size() < options.max_merges) {
    const std::size_t k = active.size();
    pairs.clear();
    if (n_candidates >= k * (k - 1) / 2) {
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) pairs.emplace_back(active[a], active[b]);
    } else {
      // Shifted scores: the weakest block keeps a small positive weight.
      std::vector<double> score(k);
      for (std::size_t a = 0; a < k; ++a) score[a] = obj.standalone(active[a]);
      const auto [lo, hi] = std::minmax_element(score.begin(), score.end());
      const double spread = *hi - *lo;
      const double floor = spread > 0.0 ? 1e-3 * spread : 1.0;
      const double base = *lo;
      cumulative.resize(k);
      double total = 0.0;
      for (std::size_t a = 0; a < k; ++a) {
        total += score[a] - base + floor;
        cumulative[a] = total;
      }
      StreamRng rng(seed, Stream::kPairSampling, trace.steps.size());
      for (std::size_t n = 0; n < n_candidates; ++n) {
        // P(p, q) = (s_p + s_q) / ((K - 1) S): lead drawn by score, partner uniform.
        const double u = rng.uniform() * total;
        auto lead = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                             cumulative.begin());
        lead = std::min(lead, k - 1);
        std::size_t other = rng.below(k - 1);
        if (other >= lead) ++other;
        pairs.emplace_back(std::min(active[lead], active[other]), std::max(active[lead], active[other]));
      }
      std::sort(pairs.begin(), pairs.end());
      pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    }
    std::vector<double> gains(pairs.size());
    const auto np = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < np; ++i) gains[i] = obj.gain(pairs[i].first, pairs[i].second);
    Candidate best;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const Candidate c{gains[i], pairs[i].first, pairs[i].second};
      if (c.better_than(best)) best = c;
    }
    if (!(best.gain > 0.0)) break;
    record_merge(trace, obj, active, best);
    if (options.resync_interval > 0 && trace.steps.size() % options.resync_interval == 0) {
      obj.resync();
      trace.steps.back().objective = obj.value();
    }
  }
  trace.partition = apply_steps(start, trace.steps);
  return trace;
}

// ---------------------------------------------------------------------------

EstimatedObjective::EstimatedObjective(const Realization& r, std::size_t carrier_count, std::size_t segment_count,
                                       double beta, double gamma)
    : EstimatedObjective(r, carrier_count, segment_count, beta, gamma, AlliancePartition::singletons(carrier_count)) {}

EstimatedObjective::EstimatedObjective(const Realization& r, std::size_t carrier_count, std::size_t segment_count,
                                       double beta, double gamma, const AlliancePartition& start)
    : carriers_(carrier_count),
      roots_(r.walks.root_count()),
      segments_(segment_count),
      beta_(beta),
      gamma_(gamma),
      samples_sq_(static_cast<double>(r.segments.per_segment) * r.segments.per_segment),
      start_(start) {
  if (carriers_ == 0) throw DataError("greedy: no carriers to partition");
  if (segments_ == 0 || r.segments.segment_count() != segments_) {
    throw IntegrityError("segment sample set does not match the graph's segment count");
  }
  if (roots_ == 0) throw IntegrityError("walk tensors have no roots");
  if (start_.carrier_count() != carriers_) throw IntegrityError("start partition does not cover the carriers");
  if (beta < 0.0 || gamma < 0.0) throw ConfigError("beta and gamma must be non-negative");

  p_carrier_ = carrier_root_probabilities(r.walks, carriers_);
  members_ = start_.members();
  const std::size_t nk = members_.size();

  // Co-occurrence of sampled block counts, accumulated per thread in exact
  // integers so the reduction order cannot matter.
  cooccur_.assign(nk * nk, 0);
  const auto ns = static_cast<std::int64_t>(segments_);
#pragma omp parallel
  {
    std::vector<std::int64_t> local(nk * nk, 0);
    std::vector<std::uint32_t> counts(nk, 0);
    std::vector<std::uint32_t> touched;
#pragma omp for schedule(static) nowait
    for (std::int64_t s = 0; s < ns; ++s) {
      touched.clear();
      for (CarrierIndex c : r.segments.of(static_cast<SegmentIndex>(s))) {
        if (c >= carriers_) continue;
        const auto k = start_.alliance_of(c);
        if (counts[k]++ == 0) touched.push_back(k);
      }
      for (auto a : touched) {
        for (auto b : touched) local[a * nk + b] += static_cast<std::int64_t>(counts[a]) * counts[b];
      }
      for (auto a : touched) counts[a] = 0;
    }
#pragma omp critical(alliance_cooccur)
    for (std::size_t i = 0; i < local.size(); ++i) cooccur_[i] += local[i];
  }

  resync();
}

void EstimatedObjective::resync() {
  const std::size_t nk = members_.size();
  p_block_.assign(nk * roots_, 0.0);
  for (std::size_t k = 0; k < nk; ++k) {
    double* dst = &p_block_[k * roots_];
    for (CarrierIndex c : members_[k]) {
      const double* src = &p_carrier_[c * roots_];
      for (std::size_t i = 0; i < roots_; ++i) dst[i] += src[i];
    }
  }
  gram_.assign(carriers_ * nk, 0.0);
  const auto nc = static_cast<std::int64_t>(carriers_);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t c = 0; c < nc; ++c) {
    const double* pc = &p_carrier_[static_cast<std::size_t>(c) * roots_];
    for (std::size_t k = 0; k < nk; ++k) {
      if (members_[k].empty()) continue;
      const double* pk = &p_block_[k * roots_];
      double dot = 0.0;
      for (std::size_t i = 0; i < roots_; ++i) dot += pc[i] * pk[i];
      gram_[static_cast<std::size_t>(c) * nk + k] = dot;
    }
  }
  mpc_block_.assign(nk, 0.0);
  for (std::uint32_t k = 0; k < nk; ++k) mpc_block_[k] = block_mpc(k);
  value_ = recompute_value();
}

double EstimatedObjective::block_mpc(std::uint32_t k) const {
  const std::size_t nk = members_.size();
  const double inv_roots = 1.0 / static_cast<double>(roots_);
  double s = 0.0;
  for (CarrierIndex c : members_[k]) s += std::log(std::max(gram_[c * nk + k] * inv_roots, kEpsilonFloor));
  return s;
}

double EstimatedObjective::recompute_value() const {
  const std::size_t nk = members_.size();
  std::int64_t diag = 0;
  for (std::size_t k = 0; k < nk; ++k) diag += cooccur_[k * nk + k];
  double mpc = 0.0;
  for (double m : mpc_block_) mpc += m;
  const double hhi = static_cast<double>(diag) / (samples_sq_ * static_cast<double>(segments_));
  return -beta_ * hhi + gamma_ * mpc / static_cast<double>(carriers_);
}

double EstimatedObjective::hhi_mean() const {
  const std::size_t nk = members_.size();
  std::int64_t diag = 0;
  for (std::size_t k = 0; k < nk; ++k) diag += cooccur_[k * nk + k];
  return static_cast<double>(diag) / (samples_sq_ * static_cast<double>(segments_));
}

double EstimatedObjective::mpc_term() const {
  double mpc = 0.0;
  for (double m : mpc_block_) mpc += m;
  return mpc / static_cast<double>(carriers_);
}

double EstimatedObjective::gain(std::uint32_t p, std::uint32_t q) const {
  const std::size_t nk = members_.size();
  const double cross = static_cast<double>(cooccur_[p * nk + q]);
  const double d_hhi = 2.0 * cross / (samples_sq_ * static_cast<double>(segments_));
  const double inv_roots = 1.0 / static_cast<double>(roots_);
  double merged = 0.0;
  for (std::uint32_t b : {p, q}) {
    for (CarrierIndex c : members_[b]) {
      const double mean = (gram_[c * nk + p] + gram_[c * nk + q]) * inv_roots;
      merged += std::log(std::max(mean, kEpsilonFloor));
    }
  }
  const double d_mpc = merged - mpc_block_[p] - mpc_block_[q];
  return -beta_ * d_hhi + gamma_ * d_mpc / static_cast<double>(carriers_);
}

void EstimatedObjective::merge(std::uint32_t p, std::uint32_t q) {
  const std::size_t nk = members_.size();
  if (p >= nk || q >= nk || p == q || members_[p].empty() || members_[q].empty()) {
    throw ConfigError("merge: blocks " + std::to_string(p) + ", " + std::to_string(q) + " are not two live alliances");
  }
  members_[p].insert(members_[p].end(), members_[q].begin(), members_[q].end());
  members_[q].clear();
  for (std::size_t i = 0; i < roots_; ++i) {
    p_block_[p * roots_ + i] += p_block_[q * roots_ + i];
    p_block_[q * roots_ + i] = 0.0;
  }
  for (std::size_t c = 0; c < carriers_; ++c) {
    gram_[c * nk + p] += gram_[c * nk + q];
    gram_[c * nk + q] = 0.0;
  }
  const std::int64_t pp = cooccur_[p * nk + p] + cooccur_[q * nk + q] + 2 * cooccur_[p * nk + q];
  for (std::size_t r = 0; r < nk; ++r) {
    cooccur_[p * nk + r] += cooccur_[q * nk + r];
    cooccur_[r * nk + p] = cooccur_[p * nk + r];
  }
  for (std::size_t r = 0; r < nk; ++r) {
    cooccur_[q * nk + r] = 0;
    cooccur_[r * nk + q] = 0;
  }
  cooccur_[p * nk + p] = pp;
  mpc_block_[p] = block_mpc(p);
  mpc_block_[q] = 0.0;
  value_ = recompute_value();
}

double EstimatedObjective::standalone(std::uint32_t p) const {
  const std::size_t nk = members_.size();
  const double hhi = static_cast<double>(cooccur_[p * nk + p]) / (samples_sq_ * static_cast<double>(segments_));
  return -beta_ * hhi + gamma_ * mpc_block_[p] / static_cast<double>(carriers_);
}

AlliancePartition EstimatedObjective::partition() const {
  std::vector<std::uint32_t> a(carriers_);
  for (std::uint32_t k = 0; k < members_.size(); ++k)
    for (CarrierIndex c : members_[k]) a[c] = k;
  return AlliancePartition(std::move(a), static_cast<std::uint32_t>(members_.size())).canonical();
}

GreedyTrace greedy_partition(const Realization& r, std::size_t carrier_count, std::size_t segment_count,
                             double beta, double gamma, const GreedyOptions& options) {
  EstimatedObjective obj(r, carrier_count, segment_count, beta, gamma);
  return greedy_merge(obj, options);
}

GreedyTrace greedy_pair_sampling(const Realization& r, std::size_t carrier_count, std::size_t segment_count,
                                 double beta, double gamma, std::size_t n_candidates, const GreedyOptions& options) {
  EstimatedObjective obj(r, carrier_count, segment_count, beta, gamma);
  return greedy_merge_sampled(obj, n_candidates, r.config.seed, options);
}

}  // namespace alliance
