#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "alliance/partition.hpp"
#include "alliance/sampling.hpp"

namespace alliance {

struct GreedyStep {
  std::uint32_t iteration;  // 1-based
  std::uint32_t p;          // surviving block (initial alliance index)
  std::uint32_t q;          // absorbed block
  double objective;         // objective after the merge
  std::uint32_t alliance_count;
};

struct GreedyTrace {
  double initial_objective = 0.0;
  std::uint32_t initial_alliance_count = 0;
  std::vector<GreedyStep> steps;
  AlliancePartition partition;  // canonical labels

  std::size_t completed_merges() const { return steps.size(); }
  double final_objective() const { return steps.empty() ? initial_objective : steps.back().objective; }
};

/// Objective over a set of blocks that the merge engines maximise.
///
/// Contract: gain(p, q) depends only on the contents of blocks p and q, so a
/// merge only invalidates gains of pairs that touch the merged blocks.
class MergeObjective {
 public:
  virtual ~MergeObjective() = default;
  virtual AlliancePartition initial_partition() const = 0;
  virtual double value() const = 0;
  // objective(after merging p and q) - objective(now)
  virtual double gain(std::uint32_t p, std::uint32_t q) const = 0;
  // Block q is absorbed into p.
  virtual void merge(std::uint32_t p, std::uint32_t q) = 0;
  // Standalone contribution of block p (pair-sampling score).
  virtual double standalone(std::uint32_t p) const = 0;
  // Recompute cached state from scratch to shed accumulated rounding.
  virtual void resync() {}
};

struct GreedyOptions {
  std::size_t max_merges = std::numeric_limits<std::size_t>::max();
  std::uint32_t resync_interval = 32;
};

/// Exhaustive agglomerative merging: every iteration takes the pair with the
/// largest gain (ties: lexicographically smallest (p, q)) and stops when the
/// best gain is <= 0 or one block remains. The non-improving merge is not
/// applied.
GreedyTrace greedy_merge(MergeObjective& objective, const GreedyOptions& options = {});

/// Importance-sampled variant: per iteration, n_candidates pairs are drawn
/// with probability proportional to the shifted standalone scores
/// s_p + s_q and only those are evaluated.
GreedyTrace greedy_merge_sampled(MergeObjective& objective, std::size_t n_candidates, std::uint64_t seed,
                                 const GreedyOptions& options = {});

/// Estimated bi-objective (sampled HHI and walk MPC) over one realization,
/// maintained incrementally under merges.
class EstimatedObjective final : public MergeObjective {
 public:
  EstimatedObjective(const Realization& r, std::size_t carrier_count, std::size_t segment_count, double beta,
                     double gamma, const AlliancePartition& start);
  EstimatedObjective(const Realization& r, std::size_t carrier_count, std::size_t segment_count, double beta,
                     double gamma);

  AlliancePartition initial_partition() const override { return start_; }
  double value() const override { return value_; }
  double gain(std::uint32_t p, std::uint32_t q) const override;
  void merge(std::uint32_t p, std::uint32_t q) override;
  double standalone(std::uint32_t p) const override;
  void resync() override;

  double hhi_mean() const;
  double mpc_term() const;
  AlliancePartition partition() const;

 private:
  double block_mpc(std::uint32_t k) const;
  double recompute_value() const;

  std::size_t carriers_;
  std::size_t roots_;
  std::size_t segments_;
  double beta_;
  double gamma_;
  double samples_sq_;  // n_segment_samples^2
  AlliancePartition start_;
  std::vector<double> p_carrier_;             // carriers x roots
  std::vector<std::vector<CarrierIndex>> members_;
  std::vector<double> p_block_;               // blocks x roots
  std::vector<double> gram_;                  // carriers x blocks: <p_carrier[c], p_block[k]>
  std::vector<std::int64_t> cooccur_;         // blocks x blocks, sum over segments of count_p * count_q
  std::vector<double> mpc_block_;
  double value_ = 0.0;
};

GreedyTrace greedy_partition(const Realization& r, std::size_t carrier_count, std::size_t segment_count,
                             double beta, double gamma, const GreedyOptions& options = {});
GreedyTrace greedy_pair_sampling(const Realization& r, std::size_t carrier_count, std::size_t segment_count,
                                 double beta, double gamma, std::size_t n_candidates,
                                 const GreedyOptions& options = {});

namespace reference {
/// Naive greedy: rebuilds the partition for every candidate pair and
/// re-evaluates the full estimated objective.
GreedyTrace greedy_partition(const Realization& r, std::size_t carrier_count, double beta, double gamma);
}  // namespace reference

}  // namespace alliance
