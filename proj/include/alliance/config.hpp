#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "alliance/sampling.hpp"

namespace alliance {

/// Flat `key = value` file. `#` starts a comment; blank lines are ignored.
/// Duplicate keys are a ConfigError. Every typed getter marks its key as
/// consumed so leftovers can be reported as unknown.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text, const std::string& origin = "<config>");
  static KeyValueConfig from_file(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::optional<std::string> find(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::uint32_t get_u32(const std::string& key, std::uint32_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  /// Throws ConfigError naming every key no getter asked for.
  void reject_unknown() const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::string origin_;
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
};

struct GeneratorSpec {
  std::uint32_t n_airports = 20;
  std::uint32_t n_segment_records = 2000;
  std::uint32_t n_carriers = 6;
  double weight_min = 1e3;
  double weight_max = 1e7;
  std::uint64_t seed = 0;
  std::uint64_t retry_cap = 100000;

  void validate() const;
};

enum class Algorithm { kGreedy, kGreedySampled, kEnumerate, kMiqpBuild, kMiqpTiny };

Algorithm parse_algorithm(std::string_view name);
std::string algorithm_name(Algorithm a);

struct ExperimentConfig {
  std::optional<std::filesystem::path> schedule_path;
  std::optional<std::filesystem::path> alliance_path;
  std::optional<GeneratorSpec> generator;

  SamplingConfig sampling;  // sampling.seed is the optimization seed
  double beta = 0.7;
  double gamma = 0.3;
  Algorithm algorithm = Algorithm::kGreedy;
  std::uint32_t alliance_count = 4;  // K for the MIQP
  double epsilon = 1e-6;
  std::uint32_t n_intervals = 540;
  std::uint32_t n_candidates = 64;  // greedy-sampled
  std::uint32_t max_enumerate_carriers = 10;
  std::uint32_t eval_seed_count = 10;
  std::optional<std::uint64_t> eval_seed_base;
  std::uint32_t baseline_alliances = 3;
  std::uint64_t baseline_seed = 0;
  bool force_resample = false;
  std::filesystem::path out_dir = "out";

  /// Reads every recognised key, then rejects unknown ones.
  static ExperimentConfig from_kv(const KeyValueConfig& kv);

  void validate() const;

  /// Evaluation seeds: eval_seed_base (default optimization seed + 1) upward.
  /// validate() rejects any overlap with the optimization seed.
  std::vector<std::uint64_t> evaluation_seeds() const;

  /// Canonical `key = value` text of every effective setting except the
  /// output directory; config_hash() hashes it.
  std::string canonical_text() const;
  std::uint64_t config_hash() const;
};

}  // namespace alliance
