#include "alliance/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include "alliance/error.hpp"
#include "alliance/io.hpp"

namespace alliance {

ObjectiveBreakdown evaluate_partition(const MultiAttributeGraph& g, const AlliancePartition& p, const Realization& fresh,
                                      std::span<const std::uint64_t> optimization_seeds, double beta, double gamma) {
  if (std::find(optimization_seeds.begin(), optimization_seeds.end(), fresh.config.seed) != optimization_seeds.end()) {
    throw ConfigError("evaluation seed " + std::to_string(fresh.config.seed) +
                      " was used during optimization; evaluation needs an independent realization");
  }
  if (fresh.graph_hash != g.content_hash()) throw IntegrityError("evaluation realization was drawn on another graph");
  if (p.carrier_count() != g.carrier_count()) throw DataError("partition does not cover the graph's carriers");
  return estimate_objective(p, fresh, beta, gamma);
}

std::pair<double, double> mean_std(std::span<const double> xs) {
  if (xs.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

Comparison compare_partitions(const MultiAttributeGraph& g,
                              const std::vector<std::pair<std::string, AlliancePartition>>& partitions,
                              const SamplingConfig& sampling, std::span<const std::uint64_t> eval_seeds,
                              std::span<const std::uint64_t> optimization_seeds, double beta, double gamma) {
  if (partitions.size() < 2) throw ConfigError("compare: need at least two partitions");
  if (eval_seeds.empty()) throw ConfigError("compare: need at least one evaluation seed");
  for (const auto& [name, p] : partitions) {
    if (p.carrier_count() != g.carrier_count()) {
      throw DataError("compare: partition '" + name + "' does not match the graph's carriers");
    }
  }
  Comparison out;
  out.eval_seeds.assign(eval_seeds.begin(), eval_seeds.end());
  out.methods.resize(partitions.size());
  for (std::size_t m = 0; m < partitions.size(); ++m) out.methods[m].method = partitions[m].first;
  for (const std::uint64_t seed : eval_seeds) {
    SamplingConfig cfg = sampling;
    cfg.seed = seed;
    const Realization r = draw_realization(g, cfg);
    for (std::size_t m = 0; m < partitions.size(); ++m) {
      out.methods[m].per_realization.push_back(
          evaluate_partition(g, partitions[m].second, r, optimization_seeds, beta, gamma));
    }
  }
  for (auto& ms : out.methods) {
    std::vector<double> h, w, f;
    for (const auto& b : ms.per_realization) {
      h.push_back(b.hhi_mean);
      w.push_back(b.mpc_term);
      f.push_back(b.objective);
    }
    std::tie(ms.hhi_mean, ms.hhi_std) = mean_std(h);
    std::tie(ms.mpc_mean, ms.mpc_std) = mean_std(w);
    std::tie(ms.objective_mean, ms.objective_std) = mean_std(f);
  }
  return out;
}

std::string format_comparison_csv(const Comparison& c, const std::string& provenance_comment) {
  std::string s = provenance_comment + "method,hhi_mean,hhi_std,mpc_mean,mpc_std,objective_mean,objective_std\n";
  for (const auto& m : c.methods) {
    s += m.method + "," + csv_number(m.hhi_mean) + "," + csv_number(m.hhi_std) + "," + csv_number(m.mpc_mean) + "," +
         csv_number(m.mpc_std) + "," + csv_number(m.objective_mean) + "," + csv_number(m.objective_std) + "\n";
  }
  return s;
}

std::string format_evaluations_csv(const Comparison& c, const std::string& provenance_comment) {
  std::string s = provenance_comment + "method,realization,seed,hhi_mean,mpc_term,objective\n";
  for (const auto& m : c.methods) {
    for (std::size_t r = 0; r < m.per_realization.size(); ++r) {
      const auto& b = m.per_realization[r];
      s += m.method + "," + std::to_string(r) + "," + std::to_string(c.eval_seeds[r]) + "," + csv_number(b.hhi_mean) +
           "," + csv_number(b.mpc_term) + "," + csv_number(b.objective) + "\n";
    }
  }
  return s;
}

nlohmann::ordered_json comparison_json(const Comparison& c) {
  nlohmann::ordered_json j;
  j["eval_seeds"] = c.eval_seeds;
  nlohmann::ordered_json methods = nlohmann::ordered_json::array();
  for (const auto& m : c.methods) {
    nlohmann::ordered_json e;
    e["method"] = m.method;
    e["n"] = m.per_realization.size();
    e["hhi_mean"] = m.hhi_mean;
    e["hhi_std"] = m.hhi_std;
    e["mpc_mean"] = m.mpc_mean;
    e["mpc_std"] = m.mpc_std;
    e["objective_mean"] = m.objective_mean;
    e["objective_std"] = m.objective_std;
    nlohmann::ordered_json per = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < m.per_realization.size(); ++r) {
      const auto& b = m.per_realization[r];
      per.push_back({{"realization_id", r},
                     {"seed", c.eval_seeds[r]},
                     {"hhi_mean", b.hhi_mean},
                     {"mpc_term", b.mpc_term},
                     {"objective", b.objective}});
    }
    e["per_realization"] = per;
    methods.push_back(e);
  }
  j["methods"] = methods;
  return j;
}

}  // namespace alliance
