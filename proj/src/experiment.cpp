#include "alliance/experiment.hpp"

#include <exception>
#include <functional>

#include "alliance/error.hpp"
#include "alliance/hash.hpp"
#include "alliance/instance.hpp"
#include "alliance/metrics.hpp"
#include "alliance/model_export.hpp"

namespace alliance {

MultiAttributeGraph load_graph(const ExperimentConfig& cfg) {
  if (cfg.schedule_path) {
    const auto records = read_schedule_csv(*cfg.schedule_path);
    return MultiAttributeGraph::build(records);
  }
  if (!cfg.generator) throw ConfigError("config: no input schedule or generator spec");
  return generate_instance(*cfg.generator);
}

AlliancePartition load_baseline(const ExperimentConfig& cfg, const MultiAttributeGraph& g) {
  if (cfg.alliance_path) return read_partition_csv(*cfg.alliance_path, g.carrier_names());
  return baseline_partition(g.carrier_count(), cfg.baseline_alliances, cfg.baseline_seed);
}

OptimizeResult optimize(const ExperimentConfig& cfg, const MultiAttributeGraph& g, const Realization& r) {
  OptimizeResult out;
  const std::size_t nc = g.carrier_count();
  const std::size_t ns = g.segment_count();
  switch (cfg.algorithm) {
    case Algorithm::kGreedy:
      out.trace = greedy_partition(r, nc, ns, cfg.beta, cfg.gamma);
      out.partition = out.trace->partition;
      break;
    case Algorithm::kGreedySampled:
      out.trace = greedy_pair_sampling(r, nc, ns, cfg.beta, cfg.gamma, cfg.n_candidates);
      out.partition = out.trace->partition;
      break;
    case Algorithm::kEnumerate:
      out.enumeration =
          enumerate_partitions(g, cfg.sampling.walk_length, cfg.beta, cfg.gamma, cfg.max_enumerate_carriers);
      out.partition = out.enumeration->best;
      break;
    case Algorithm::kMiqpBuild:
      out.model = build_miqp(g, r, cfg.beta, cfg.gamma, cfg.alliance_count, cfg.epsilon, cfg.n_intervals);
      break;
    case Algorithm::kMiqpTiny:
      out.model = build_miqp(g, r, cfg.beta, cfg.gamma, cfg.alliance_count, cfg.epsilon, cfg.n_intervals);
      out.tiny = solve_tiny(*out.model);
      out.partition = out.tiny->partition;
      break;
  }
  if (out.partition) out.in_sample = estimate_objective(*out.partition, r, cfg.beta, cfg.gamma);
  return out;
}

Provenance make_provenance(const ExperimentConfig& cfg, const MultiAttributeGraph& g) {
  Provenance p;
  p.config_hash = cfg.config_hash();
  p.graph_hash = g.content_hash();
  p.seeds.emplace_back("seed", cfg.sampling.seed);
  if (cfg.generator) p.seeds.emplace_back("generator_seed", cfg.generator->seed);
  p.seeds.emplace_back("baseline_seed", cfg.baseline_seed);
  const auto eval = cfg.evaluation_seeds();
  p.seeds.emplace_back("eval_seed_first", eval.front());
  p.seeds.emplace_back("eval_seed_count", eval.size());
  return p;
}

namespace {

using ojson = nlohmann::ordered_json;

class BundleWriter {
 public:
  explicit BundleWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}
  void text(const std::string& name, const std::string& body) {
    write_text_file(dir_ / name, body);
    files_.push_back(name);
  }
  void json(const std::string& name, const ojson& j) { text(name, j.dump(2) + "\n"); }
  void note(const std::string& name) { files_.push_back(name); }
  const std::vector<std::string>& files() const { return files_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

ojson manifest_json(const ExperimentConfig& cfg, const std::optional<Provenance>& prov, const std::string& status,
                    const std::string& stage, const std::string& error, const std::vector<std::string>& files) {
  ojson m;
  m["format"] = "alliance-bundle";
  m["version"] = 1;
  m["status"] = status;
  if (!stage.empty()) m["failed_stage"] = stage;
  if (!error.empty()) m["error"] = error;
  m["algorithm"] = algorithm_name(cfg.algorithm);
  m["config_hash"] = hex64(cfg.config_hash());
  if (prov) m["provenance"] = prov->to_json();
  m["evaluation_seeds"] = cfg.evaluation_seeds();
  m["files"] = files;
  return m;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  BundleWriter out(cfg.out_dir);
  ExperimentResult res;
  res.config_hash = cfg.config_hash();
  std::optional<Provenance> prov;
  std::string stage;

  auto fail = [&](const std::string& what) {
    try {
      write_text_file(cfg.out_dir / "manifest.json",
                      manifest_json(cfg, prov, "failed", stage, what, out.files()).dump(2) + "\n");
    } catch (const std::exception&) {
      // The original error is more useful than a secondary write failure.
    }
  };

  try {
    stage = "load";
    out.text("config.txt", cfg.canonical_text());
    const MultiAttributeGraph g = load_graph(cfg);
    res.graph_hash = g.content_hash();
    prov = make_provenance(cfg, g);
    ojson summary = graph_summary_json(g);
    summary["provenance"] = prov->to_json();
    out.json("graph_summary.json", summary);
    const AlliancePartition baseline = load_baseline(cfg, g);
    out.text("baseline_partition.csv", format_partition_csv(baseline, g.carrier_names(), &*prov));

    stage = "sample";
    const Realization r = load_or_draw(cfg.out_dir / "sampling_cache.bin", g, cfg.sampling, cfg.force_resample);
    out.note("sampling_cache.bin");

    stage = "optimize";
    res.optimized = optimize(cfg, g, r);
    const auto& opt = res.optimized;
    if (opt.trace) out.text("trace.csv", format_trace_csv(*opt.trace, *prov));
    if (opt.enumeration) out.text("landscape.csv", format_landscape_csv(*opt.enumeration, *prov));
    if (opt.model) {
      out.text("model.json", export_model_json(*opt.model));
      out.text("model.lp", export_model_lp(*opt.model));
    }
    if (opt.partition) out.text("partition.csv", format_partition_csv(*opt.partition, g.carrier_names(), &*prov));

    stage = "evaluate";
    std::vector<std::pair<std::string, AlliancePartition>> methods;
    methods.emplace_back("baseline", baseline);
    if (opt.partition) {
      methods.emplace_back(algorithm_name(cfg.algorithm), *opt.partition);
    } else {
      methods.emplace_back("singletons", AlliancePartition::singletons(g.carrier_count()));
    }
    const auto eval_seeds = cfg.evaluation_seeds();
    const std::vector<std::uint64_t> opt_seeds{cfg.sampling.seed};
    res.comparison = compare_partitions(g, methods, cfg.sampling, eval_seeds, opt_seeds, cfg.beta, cfg.gamma);

    stage = "write";
    out.text("evaluations.csv", format_evaluations_csv(res.comparison, prov->csv_comment()));
    out.text("summary.csv", format_comparison_csv(res.comparison, prov->csv_comment()));
    ojson s = comparison_json(res.comparison);
    s["beta"] = cfg.beta;
    s["gamma"] = cfg.gamma;
    if (opt.partition) {
      s["in_sample"] = {{"hhi_mean", opt.in_sample.hhi_mean},
                        {"mpc_term", opt.in_sample.mpc_term},
                        {"objective", opt.in_sample.objective}};
    }
    if (opt.trace) {
      s["greedy"] = {{"completed_merges", opt.trace->completed_merges()},
                     {"initial_alliances", opt.trace->initial_alliance_count},
                     {"final_alliances", opt.trace->partition.alliance_count()}};
    }
    s["provenance"] = prov->to_json();
    out.json("summary.json", s);
    res.files = out.files();
    res.files.push_back("manifest.json");
    write_text_file(cfg.out_dir / "manifest.json", manifest_json(cfg, prov, "ok", "", "", res.files).dump(2) + "\n");
  } catch (const std::exception& e) {
    fail(e.what());
    throw;
  }
  return res;
}

}  // namespace alliance
