// Command-line front end. Exit codes: 0 ok, 1 unexpected failure, 2 config
// error, 3 data error, 4 size-cap error. ALLIANCE_NUM_THREADS overrides the
// OpenMP thread count and nothing else.

#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "alliance/config.hpp"
#include "alliance/error.hpp"
#include "alliance/evaluate.hpp"
#include "alliance/experiment.hpp"
#include "alliance/hash.hpp"
#include "alliance/instance.hpp"
#include "alliance/io.hpp"
#include "alliance/metrics.hpp"
#include "alliance/model_export.hpp"
#include "alliance/sampling.hpp"

namespace {

using namespace alliance;
using ojson = nlohmann::ordered_json;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitSizeCap = 4;

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* sub, CommonArgs& a) {
  sub->add_option("--config", a.config, "key = value configuration file");
  sub->add_option("--seed", a.seed, "seed override");
  sub->add_option("--out", a.out, "output directory");
}

KeyValueConfig load_kv(const CommonArgs& a) {
  KeyValueConfig kv = a.config.empty() ? KeyValueConfig::parse("", "<defaults>") : KeyValueConfig::from_file(a.config);
  if (a.seed) kv.set("seed", std::to_string(*a.seed));
  if (!a.out.empty()) kv.set("out", a.out);
  return kv;
}

ExperimentConfig finish(const KeyValueConfig& kv) {
  ExperimentConfig cfg = ExperimentConfig::from_kv(kv);
  cfg.validate();
  return cfg;
}

void apply_thread_override() {
  const char* env = std::getenv("ALLIANCE_NUM_THREADS");
  if (env == nullptr || *env == '\0') return;
  const std::string v(env);
  if (v.find_first_not_of("0123456789") != std::string::npos || std::stoul(v) == 0 || v.size() > 6) {
    throw ConfigError("ALLIANCE_NUM_THREADS must be a positive integer, got '" + v + "'");
  }
  omp_set_num_threads(static_cast<int>(std::stoul(v)));
}

void write_json(const std::filesystem::path& p, const ojson& j) { write_text_file(p, j.dump(2) + "\n"); }

int cmd_generate(const CommonArgs& a) {
  KeyValueConfig kv = load_kv(a);
  if (a.seed) kv.set("generator.seed", std::to_string(*a.seed));
  const ExperimentConfig cfg = finish(kv);
  if (!cfg.generator) throw ConfigError("generate: the config names a schedule file; give generator.* keys instead");
  const auto records = generate_records(*cfg.generator);
  const auto g = MultiAttributeGraph::build(records);
  const Provenance prov = make_provenance(cfg, g);
  write_text_file(cfg.out_dir / "schedule.csv", format_schedule_csv(records, &prov));
  ojson s = graph_summary_json(g);
  s["provenance"] = prov.to_json();
  write_json(cfg.out_dir / "graph_summary.json", s);
  const auto baseline = baseline_partition(g.carrier_count(), cfg.baseline_alliances, cfg.baseline_seed);
  write_text_file(cfg.out_dir / "baseline_alliances.csv", format_partition_csv(baseline, g.carrier_names(), &prov));
  std::cout << "generated " << g.airport_count() << " airports, " << g.carrier_count() << " carriers, "
            << g.segment_count() << " segments, graph " << hex64(g.content_hash()) << "\n";
  return 0;
}

int cmd_sample(const CommonArgs& a, bool force) {
  const KeyValueConfig kv = load_kv(a);
  ExperimentConfig cfg = finish(kv);
  cfg.force_resample = cfg.force_resample || force;
  const auto g = load_graph(cfg);
  const auto r = load_or_draw(cfg.out_dir / "sampling_cache.bin", g, cfg.sampling, cfg.force_resample);
  ojson s;
  s["roots"] = r.walks.root_count();
  s["n_walks"] = r.config.n_walks;
  s["walk_length"] = r.config.walk_length;
  s["n_segment_samples"] = r.config.n_segment_samples;
  s["segments"] = r.segments.segment_count();
  s["provenance"] = make_provenance(cfg, g).to_json();
  write_json(cfg.out_dir / "sampling_summary.json", s);
  std::cout << "sampling cache " << (cfg.out_dir / "sampling_cache.bin").string() << "\n";
  return 0;
}

int cmd_optimize(const CommonArgs& a, bool force) {
  const KeyValueConfig kv = load_kv(a);
  ExperimentConfig cfg = finish(kv);
  cfg.force_resample = cfg.force_resample || force;
  const auto g = load_graph(cfg);
  const auto r = load_or_draw(cfg.out_dir / "sampling_cache.bin", g, cfg.sampling, cfg.force_resample);
  const auto res = optimize(cfg, g, r);
  const Provenance prov = make_provenance(cfg, g);
  if (res.trace) write_text_file(cfg.out_dir / "trace.csv", format_trace_csv(*res.trace, prov));
  if (res.enumeration) write_text_file(cfg.out_dir / "landscape.csv", format_landscape_csv(*res.enumeration, prov));
  if (res.model) write_text_file(cfg.out_dir / "model.json", export_model_json(*res.model));
  ojson s;
  s["algorithm"] = algorithm_name(cfg.algorithm);
  if (res.partition) {
    write_text_file(cfg.out_dir / "partition.csv", format_partition_csv(*res.partition, g.carrier_names(), &prov));
    s["alliances"] = res.partition->alliance_count();
    s["in_sample"] = {{"hhi_mean", res.in_sample.hhi_mean},
                      {"mpc_term", res.in_sample.mpc_term},
                      {"objective", res.in_sample.objective}};
  }
  if (res.trace) s["completed_merges"] = res.trace->completed_merges();
  s["provenance"] = prov.to_json();
  write_json(cfg.out_dir / "optimize_summary.json", s);
  std::cout << "optimized with " << algorithm_name(cfg.algorithm) << "\n";
  return 0;
}

int cmd_evaluate(const CommonArgs& a) {
  // --seed names the evaluation realization here; `seed` in the config stays
  // the optimization seed it must differ from.
  CommonArgs base = a;
  base.seed.reset();
  const KeyValueConfig kv = load_kv(base);
  const auto partition_path = kv.find("partition");
  const std::uint32_t realization = kv.get_u32("realization", 0);
  const ExperimentConfig cfg = finish(kv);
  const auto g = load_graph(cfg);
  const AlliancePartition p =
      partition_path ? read_partition_csv(*partition_path, g.carrier_names()) : load_baseline(cfg, g);
  const auto eval_seeds = cfg.evaluation_seeds();
  if (!a.seed && realization >= eval_seeds.size()) throw ConfigError("evaluate: realization index out of range");
  const std::uint64_t seed = a.seed ? *a.seed : eval_seeds[realization];
  SamplingConfig sc = cfg.sampling;
  sc.seed = seed;
  const std::vector<std::uint64_t> opt_seeds{cfg.sampling.seed};
  if (seed == cfg.sampling.seed) {
    throw ConfigError("evaluation seed " + std::to_string(seed) + " equals the optimization seed");
  }
  const Realization r = draw_realization(g, sc);
  const auto b = evaluate_partition(g, p, r, opt_seeds, cfg.beta, cfg.gamma);
  Provenance prov = make_provenance(cfg, g);
  prov.seeds.emplace_back("eval_seed", seed);
  write_text_file(cfg.out_dir / "hhi.csv", format_hhi_csv(g, hhi_segments_estimate(r.segments, p), prov));
  write_text_file(cfg.out_dir / "mpc.csv", format_mpc_csv(g, mpc_estimate(r.walks, p), prov));
  write_json(cfg.out_dir / "objective.json", objective_json(b, seed, realization, prov));
  std::cout << "objective " << b.objective << " (hhi " << b.hhi_mean << ", mpc " << b.mpc_term << ")\n";
  return 0;
}

int cmd_compare(const CommonArgs& a) {
  const KeyValueConfig kv = load_kv(a);
  std::vector<std::pair<std::string, std::string>> named;
  for (const auto& [k, v] : kv.values()) {
    if (k.rfind("compare.", 0) == 0) {
      kv.find(k);
      named.emplace_back(k.substr(8), v);
    }
  }
  const ExperimentConfig cfg = finish(kv);
  const auto g = load_graph(cfg);
  std::vector<std::pair<std::string, AlliancePartition>> parts;
  parts.emplace_back("baseline", load_baseline(cfg, g));
  for (const auto& [name, path] : named) parts.emplace_back(name, read_partition_csv(path, g.carrier_names()));
  const auto eval_seeds = cfg.evaluation_seeds();
  const std::vector<std::uint64_t> opt_seeds{cfg.sampling.seed};
  const auto c = compare_partitions(g, parts, cfg.sampling, eval_seeds, opt_seeds, cfg.beta, cfg.gamma);
  const Provenance prov = make_provenance(cfg, g);
  write_text_file(cfg.out_dir / "comparison.csv", format_comparison_csv(c, prov.csv_comment()));
  write_text_file(cfg.out_dir / "evaluations.csv", format_evaluations_csv(c, prov.csv_comment()));
  ojson j = comparison_json(c);
  j["provenance"] = prov.to_json();
  write_json(cfg.out_dir / "comparison.json", j);
  for (const auto& m : c.methods) {
    std::cout << m.method << ": objective " << m.objective_mean << " +- " << m.objective_std << "\n";
  }
  return 0;
}

int cmd_export_model(const CommonArgs& a, const std::string& format_flag, bool force) {
  const KeyValueConfig kv = load_kv(a);
  const std::string format = format_flag.empty() ? kv.get_string("format", "both") : format_flag;
  ExperimentConfig cfg = finish(kv);
  cfg.force_resample = cfg.force_resample || force;
  std::vector<ModelFormat> formats;
  if (format == "both") {
    formats = {ModelFormat::kJson, ModelFormat::kLp};
  } else {
    formats = {parse_model_format(format)};
  }
  const auto g = load_graph(cfg);
  const auto r = load_or_draw(cfg.out_dir / "sampling_cache.bin", g, cfg.sampling, cfg.force_resample);
  const auto m = build_miqp(g, r, cfg.beta, cfg.gamma, cfg.alliance_count, cfg.epsilon, cfg.n_intervals);
  for (auto f : formats) {
    const auto path = cfg.out_dir / (f == ModelFormat::kJson ? "model.json" : "model.lp");
    write_text_file(path, export_model(m, f));
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}

int cmd_run(const CommonArgs& a) {
  const KeyValueConfig kv = load_kv(a);
  const ExperimentConfig cfg = finish(kv);
  const auto res = run_experiment(cfg);
  for (const auto& m : res.comparison.methods) {
    std::cout << m.method << ": objective " << m.objective_mean << " +- " << m.objective_std << "\n";
  }
  std::cout << "bundle " << cfg.out_dir.string() << " (config " << hex64(res.config_hash) << ", graph "
            << hex64(res.graph_hash) << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Airline alliance partitioning: sampling, metrics and optimization"};
  app.require_subcommand(1);
  CommonArgs a;
  bool force = false;
  std::string format;

  auto* gen = app.add_subcommand("generate", "write a synthetic schedule, summary and baseline alliances");
  add_common(gen, a);
  auto* smp = app.add_subcommand("sample", "draw or reuse the sampling cache");
  add_common(smp, a);
  smp->add_flag("--force", force, "regenerate the sampling cache");
  auto* opt = app.add_subcommand("optimize", "run the configured partitioning algorithm");
  add_common(opt, a);
  opt->add_flag("--force", force, "regenerate the sampling cache");
  auto* ev = app.add_subcommand("evaluate", "out-of-sample metrics of one partition");
  add_common(ev, a);
  auto* cmp = app.add_subcommand("compare", "mean/std comparison of named partitions");
  add_common(cmp, a);
  auto* exp = app.add_subcommand("export-model", "build the MIQP and write it as json and/or lp");
  add_common(exp, a);
  exp->add_option("--format", format, "json, lp or both");
  exp->add_flag("--force", force, "regenerate the sampling cache");
  auto* run = app.add_subcommand("run", "full experiment bundle");
  add_common(run, a);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    apply_thread_override();
    if (gen->parsed()) return cmd_generate(a);
    if (smp->parsed()) return cmd_sample(a, force);
    if (opt->parsed()) return cmd_optimize(a, force);
    if (ev->parsed()) return cmd_evaluate(a);
    if (cmp->parsed()) return cmd_compare(a);
    if (exp->parsed()) return cmd_export_model(a, format, force);
    if (run->parsed()) return cmd_run(a);
  } catch (const SizeCapError& e) {
    std::cerr << "size cap: " << e.what() << "\n";
    return kExitSizeCap;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
