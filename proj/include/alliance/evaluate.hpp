#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "alliance/graph.hpp"
#include "alliance/metrics.hpp"
#include "alliance/partition.hpp"
#include "alliance/sampling.hpp"

namespace alliance {

/// Out-of-sample breakdown on a fresh realization. Throws ConfigError when
/// the realization's seed is one of `optimization_seeds`, IntegrityError when
/// it was drawn on another graph.
ObjectiveBreakdown evaluate_partition(const MultiAttributeGraph& g, const AlliancePartition& p, const Realization& fresh,
                                      std::span<const std::uint64_t> optimization_seeds, double beta, double gamma);

struct MethodSummary {
  std::string method;
  std::vector<ObjectiveBreakdown> per_realization;
  double hhi_mean = 0.0;
  double hhi_std = 0.0;
  double mpc_mean = 0.0;
  double mpc_std = 0.0;
  double objective_mean = 0.0;
  double objective_std = 0.0;
};

struct Comparison {
  std::vector<std::uint64_t> eval_seeds;
  std::vector<MethodSummary> methods;
};

/// Sample mean and (n-1) standard deviation; the deviation is 0 for n = 1.
std::pair<double, double> mean_std(std::span<const double> xs);

/// Evaluates every named partition on each evaluation realization (drawn
/// once per seed with `sampling` apart from its seed). Needs >= 2 partitions.
Comparison compare_partitions(const MultiAttributeGraph& g,
                              const std::vector<std::pair<std::string, AlliancePartition>>& partitions,
                              const SamplingConfig& sampling, std::span<const std::uint64_t> eval_seeds,
                              std::span<const std::uint64_t> optimization_seeds, double beta, double gamma);

// method,hhi_mean,hhi_std,mpc_mean,mpc_std,objective_mean,objective_std
std::string format_comparison_csv(const Comparison& c, const std::string& provenance_comment);
// method,realization,seed,hhi_mean,mpc_term,objective
std::string format_evaluations_csv(const Comparison& c, const std::string& provenance_comment);
nlohmann::ordered_json comparison_json(const Comparison& c);

}  // namespace alliance
