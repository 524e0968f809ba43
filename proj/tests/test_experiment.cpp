#include <doctest.h>

#include <json.hpp>

#include "alliance/error.hpp"
#include "alliance/experiment.hpp"
#include "helpers.hpp"

using namespace alliance;

namespace {

ExperimentConfig small_config(const std::filesystem::path& out) {
  ExperimentConfig cfg;
  cfg.generator = testing::toy_spec(21);
  cfg.sampling.seed = 1;
  cfg.sampling.n_walks = 20;
  cfg.sampling.n_segment_samples = 20;
  cfg.eval_seed_count = 3;
  cfg.out_dir = out;
  return cfg;
}

std::map<std::string, std::string> bundle(const ExperimentResult& r, const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& f : r.files) files[f] = read_text_file(dir / f);
  return files;
}

}  // namespace

TEST_CASE("bundles are byte-identical across runs and thread counts") {
  for (const char* algo : {"greedy", "greedy-sampled", "enumerate", "miqp-tiny"}) {
    CAPTURE(algo);
    auto a = small_config(testing::scratch_dir("exp_a"));
    a.algorithm = parse_algorithm(algo);
    a.alliance_count = 3;
    a.n_intervals = 40;
    auto b = a;
    b.out_dir = testing::scratch_dir("exp_b");
    const auto ra = testing::with_threads(1, [&] { return run_experiment(a); });
    const auto rb = testing::with_threads(4, [&] { return run_experiment(b); });
    CHECK(ra.files == rb.files);
    CHECK(bundle(ra, a.out_dir) == bundle(rb, b.out_dir));
    const auto again = run_experiment(a);
    CHECK(bundle(again, a.out_dir) == bundle(ra, a.out_dir));
  }
}

TEST_CASE("greedy bundle contents") {
  const auto cfg = small_config(testing::scratch_dir("exp_contents"));
  const auto r = run_experiment(cfg);
  REQUIRE(r.optimized.partition.has_value());
  CHECK(r.comparison.methods.size() == 2);
  CHECK(r.comparison.methods[0].method == "baseline");
  CHECK(r.comparison.methods[1].per_realization.size() == 3);
  const auto manifest = nlohmann::json::parse(read_text_file(cfg.out_dir / "manifest.json"));
  CHECK(manifest["status"] == "ok");
  CHECK(read_text_file(cfg.out_dir / "trace.csv").rfind("# config_hash=", 0) == 0);
  const auto summary = nlohmann::json::parse(read_text_file(cfg.out_dir / "summary.json"));
  CHECK(summary["greedy"]["final_alliances"].get<std::uint32_t>() ==
        6 - summary["greedy"]["completed_merges"].get<std::uint32_t>());
}

TEST_CASE("model-only run compares baseline with singletons") {
  auto cfg = small_config(testing::scratch_dir("exp_model"));
  cfg.algorithm = Algorithm::kMiqpBuild;
  cfg.n_intervals = 30;
  const auto r = run_experiment(cfg);
  CHECK(!r.optimized.partition);
  CHECK(r.optimized.model.has_value());
  CHECK(std::filesystem::exists(cfg.out_dir / "model.lp"));
  CHECK(r.comparison.methods[1].method == "singletons");
}

TEST_CASE("failed stage is recorded in the manifest") {
  auto cfg = small_config(testing::scratch_dir("exp_fail"));
  cfg.algorithm = Algorithm::kEnumerate;
  cfg.max_enumerate_carriers = 4;
  CHECK_THROWS_AS(run_experiment(cfg), SizeCapError);
  const auto manifest = nlohmann::json::parse(read_text_file(cfg.out_dir / "manifest.json"));
  CHECK(manifest["status"] == "failed");
  CHECK(manifest["failed_stage"] == "optimize");
}

TEST_CASE("evaluation refuses the optimization seed") {
  const auto g = testing::small_random_graph(2, 20, 500, 4);
  SamplingConfig s;
  s.seed = 9;
  const auto r = draw_realization(g, s);
  const std::vector<std::uint64_t> opt{9};
  CHECK_THROWS_AS(evaluate_partition(g, AlliancePartition::singletons(4), r, opt, 0.7, 0.3), ConfigError);
  const std::vector<std::uint64_t> other{8};
  CHECK_NOTHROW(evaluate_partition(g, AlliancePartition::singletons(4), r, other, 0.7, 0.3));
  const auto g2 = testing::small_random_graph(3, 20, 500, 4);
  CHECK_THROWS_AS(evaluate_partition(g2, AlliancePartition::singletons(4), r, other, 0.7, 0.3), IntegrityError);
}

TEST_CASE("comparison statistics") {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const auto [m, sd] = mean_std(xs);
  CHECK(m == 2.5);
  CHECK(sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
  const auto g = testing::small_random_graph(2, 20, 500, 4);
  SamplingConfig s;
  const std::vector<std::uint64_t> eval{1, 2}, opt{0};
  std::vector<std::pair<std::string, AlliancePartition>> one{{"a", AlliancePartition::singletons(4)}};
  CHECK_THROWS_AS(compare_partitions(g, one, s, eval, opt, 0.7, 0.3), ConfigError);
  one.emplace_back("b", AlliancePartition::single_alliance(4));
  const auto c = compare_partitions(g, one, s, eval, opt, 0.7, 0.3);
  CHECK(c.methods[1].hhi_mean == 1.0);
  CHECK(c.methods[1].hhi_std == 0.0);
}
