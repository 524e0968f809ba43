#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "alliance/config.hpp"
#include "alliance/enumerate.hpp"
#include "alliance/evaluate.hpp"
#include "alliance/graph.hpp"
#include "alliance/greedy.hpp"
#include "alliance/io.hpp"
#include "alliance/miqp.hpp"
#include "alliance/sampling.hpp"

namespace alliance {

/// Graph from the schedule CSV or the generator spec.
MultiAttributeGraph load_graph(const ExperimentConfig& cfg);

/// Alliance CSV when configured, otherwise the seeded synthetic baseline.
AlliancePartition load_baseline(const ExperimentConfig& cfg, const MultiAttributeGraph& g);

struct OptimizeResult {
  std::optional<AlliancePartition> partition;  // absent for miqp-build
  std::optional<GreedyTrace> trace;
  std::optional<EnumerationResult> enumeration;
  std::optional<MiqpModel> model;
  std::optional<TinySolution> tiny;
  ObjectiveBreakdown in_sample;  // estimated objective of `partition` on the optimization realization
};

OptimizeResult optimize(const ExperimentConfig& cfg, const MultiAttributeGraph& g, const Realization& r);

Provenance make_provenance(const ExperimentConfig& cfg, const MultiAttributeGraph& g);

struct ExperimentResult {
  std::uint64_t config_hash = 0;
  std::uint64_t graph_hash = 0;
  OptimizeResult optimized;
  Comparison comparison;
  std::vector<std::string> files;  // relative to the output directory
};

/// Load, sample, optimize, evaluate and write the bundle under cfg.out_dir.
/// A failing stage is recorded in manifest.json (status, stage, error) and
/// the original exception is rethrown. Bundles carry no timestamps, so equal
/// configs give byte-identical bundles.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace alliance
