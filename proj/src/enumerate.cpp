#include "alliance/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "alliance/error.hpp"

namespace alliance {

std::uint64_t bell_number(unsigned n) {
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (unsigned i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

std::vector<std::vector<std::uint8_t>> set_partitions(unsigned n, unsigned max_blocks) {
  std::vector<std::vector<std::uint8_t>> out;
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  if (max_blocks == 0) return out;
  std::vector<std::uint8_t> a(n, 0);
  std::vector<std::uint8_t> top(n, 0);  // top[i] = max(a[0..i])
  for (;;) {
    out.push_back(a);
    // Rightmost position that can still grow.
    int i = static_cast<int>(n) - 1;
    while (i > 0) {
      const unsigned limit = std::min<unsigned>(top[i - 1] + 1u, max_blocks - 1u);
      if (a[i] < limit) break;
      --i;
    }
    if (i <= 0) break;
    ++a[i];
    top[i] = std::max(top[i - 1], a[i]);
    for (unsigned j = i + 1; j < n; ++j) {
      a[j] = 0;
      top[j] = top[j - 1];
    }
  }
  return out;
}

ExactEvaluator::ExactEvaluator(const MultiAttributeGraph& g, std::uint32_t walk_length)
    : carriers_(g.carrier_count()) {
  if (walk_length < 1) throw ConfigError("walk_length must be >= 1");
  if (g.segment_count() == 0) throw DataError("graph has no segments");
  carrier_table_ = mpc_exact(g, AlliancePartition::singletons(carriers_), walk_length);
  shares_.resize(g.segment_count());
  for (SegmentIndex s = 0; s < g.segment_count(); ++s) {
    const Segment& seg = g.segment(s);
    for (const auto& cw : seg.carriers) shares_[s].emplace_back(cw.carrier, cw.weight / seg.total_weight);
  }
}

ObjectiveBreakdown ExactEvaluator::evaluate(const AlliancePartition& p, double beta, double gamma) const {
  if (p.carrier_count() != carriers_) throw IntegrityError("partition does not cover the graph's carriers");
  const std::size_t nk = p.alliance_count();
  const std::size_t nr = carrier_table_.root_count();
  std::vector<double> block_share(nk);
  std::vector<double> hhi(shares_.size());
  for (std::size_t s = 0; s < shares_.size(); ++s) {
    std::fill(block_share.begin(), block_share.end(), 0.0);
    for (const auto& [c, q] : shares_[s]) block_share[p.alliance_of(c)] += q;
    double h = 0.0;
    for (double b : block_share) h += b * b;
    hhi[s] = h;
  }
  std::vector<double> p_block(nk * nr, 0.0);
  for (std::size_t c = 0; c < carriers_; ++c) {
    const std::size_t k = p.alliance_of(static_cast<CarrierIndex>(c));
    for (std::size_t r = 0; r < nr; ++r) p_block[k * nr + r] += carrier_table_.carrier_at(c, r);
  }
  std::vector<double> w(nr);
  std::vector<double> logs(carriers_);
  for (std::size_t c = 0; c < carriers_; ++c) {
    const std::size_t k = p.alliance_of(static_cast<CarrierIndex>(c));
    for (std::size_t r = 0; r < nr; ++r) w[r] = carrier_table_.carrier_at(c, r) * p_block[k * nr + r];
    const double mean = nr == 0 ? 0.0 : pairwise_sum(w) / static_cast<double>(nr);
    logs[c] = std::log(std::max(mean, kEpsilonFloor));
  }
  const double hhi_mean = pairwise_sum(hhi) / static_cast<double>(hhi.size());
  const double mpc = pairwise_sum(logs) / static_cast<double>(carriers_);
  return objective(hhi_mean, mpc, beta, gamma);
}

EnumerationResult enumerate_partitions(const MultiAttributeGraph& g, std::uint32_t walk_length, double beta,
                                       double gamma, unsigned max_carriers) {
  const std::size_t nc = g.carrier_count();
  if (nc == 0) throw DataError("enumerate: graph has no carriers");
  if (nc > max_carriers) {
    throw SizeCapError("enumerate: " + std::to_string(nc) + " carriers exceeds the cap of " +
                       std::to_string(max_carriers));
  }
  const ExactEvaluator evaluator(g, walk_length);
  const auto partitions = set_partitions(static_cast<unsigned>(nc), static_cast<unsigned>(nc));
  EnumerationResult result;
  result.landscape.resize(partitions.size());
  const auto np = static_cast<std::int64_t>(partitions.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t id = 0; id < np; ++id) {
    const auto b = evaluator.evaluate(AlliancePartition::from_blocks(partitions[static_cast<std::size_t>(id)]), beta,
                                      gamma);
    result.landscape[static_cast<std::size_t>(id)] =
        LandscapePoint{static_cast<std::uint64_t>(id), b.hhi_mean, b.mpc_term, b.objective};
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.landscape.size(); ++i) {
    if (result.landscape[i].objective > result.landscape[best].objective) best = i;
  }
  result.best_id = best;
  result.best = AlliancePartition::from_blocks(partitions[best]);
  const auto& pt = result.landscape[best];
  result.best_breakdown = objective(pt.hhi_mean, pt.mpc_term, beta, gamma);
  return result;
}

}  // namespace alliance
