#include "alliance/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "alliance/error.hpp"
#include "alliance/hash.hpp"

namespace alliance {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text, const std::string& origin) {
  KeyValueConfig kv;
  kv.origin_ = origin;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (!kv.values_.emplace(key, value).second) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

KeyValueConfig KeyValueConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

std::optional<std::string> KeyValueConfig::find(const std::string& key) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  return find(key).value_or(fallback);
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto v = find(key);
  if (!v) return fallback;
  if (v->empty() || v->find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError(origin_ + ": '" + key + "' must be a non-negative integer, got '" + *v + "'");
  }
  try {
    return std::stoull(*v);
  } catch (const std::out_of_range&) {
    throw ConfigError(origin_ + ": '" + key + "' is out of range");
  }
}

std::uint32_t KeyValueConfig::get_u32(const std::string& key, std::uint32_t fallback) const {
  const std::uint64_t v = get_u64(key, fallback);
  if (v > 0xffffffffULL) throw ConfigError(origin_ + ": '" + key + "' is out of range");
  return static_cast<std::uint32_t>(v);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto v = find(key);
  if (!v) return fallback;
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(*v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v->size() || !std::isfinite(d)) {
    throw ConfigError(origin_ + ": '" + key + "' must be a finite number, got '" + *v + "'");
  }
  return d;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto v = find(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ConfigError(origin_ + ": '" + key + "' must be true or false, got '" + *v + "'");
}

void KeyValueConfig::reject_unknown() const {
  std::string unknown;
  for (const auto& [k, v] : values_) {
    if (consumed_.count(k) == 0) unknown += (unknown.empty() ? "" : ", ") + k;
  }
  if (!unknown.empty()) throw ConfigError(origin_ + ": unknown keys: " + unknown);
}

void GeneratorSpec::validate() const {
  if (n_airports < 2) throw ConfigError("generator: need at least 2 airports");
  if (n_carriers < 1) throw ConfigError("generator: need at least 1 carrier");
  // Every airport needs an outgoing record.
  if (n_segment_records < n_airports) {
    throw ConfigError("generator: n_segment_records must be >= n_airports");
  }
  if (!(weight_min > 0.0) || !(weight_max >= weight_min) || !std::isfinite(weight_max)) {
    throw ConfigError("generator: weight range must satisfy 0 < min <= max");
  }
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "greedy") return Algorithm::kGreedy;
  if (name == "greedy-sampled") return Algorithm::kGreedySampled;
  if (name == "enumerate") return Algorithm::kEnumerate;
  if (name == "miqp-build") return Algorithm::kMiqpBuild;
  if (name == "miqp-tiny") return Algorithm::kMiqpTiny;
  throw ConfigError("unknown algorithm '" + std::string(name) +
                    "' (expected greedy, greedy-sampled, enumerate, miqp-build or miqp-tiny)");
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kGreedy: return "greedy";
    case Algorithm::kGreedySampled: return "greedy-sampled";
    case Algorithm::kEnumerate: return "enumerate";
    case Algorithm::kMiqpBuild: return "miqp-build";
    case Algorithm::kMiqpTiny: return "miqp-tiny";
  }
  return "greedy";
}

ExperimentConfig ExperimentConfig::from_kv(const KeyValueConfig& kv) {
  ExperimentConfig c;
  if (auto v = kv.find("schedule")) c.schedule_path = *v;
  if (auto v = kv.find("alliances")) c.alliance_path = *v;
  const bool any_generator = kv.has("generator.airports") || kv.has("generator.records") ||
                             kv.has("generator.carriers") || kv.has("generator.weight_min") ||
                             kv.has("generator.weight_max") || kv.has("generator.seed") ||
                             kv.has("generator.retry_cap");
  c.sampling.seed = kv.get_u64("seed", 0);
  if (any_generator || !c.schedule_path) {
    GeneratorSpec g;
    g.n_airports = kv.get_u32("generator.airports", g.n_airports);
    g.n_segment_records = kv.get_u32("generator.records", g.n_segment_records);
    g.n_carriers = kv.get_u32("generator.carriers", g.n_carriers);
    g.weight_min = kv.get_double("generator.weight_min", g.weight_min);
    g.weight_max = kv.get_double("generator.weight_max", g.weight_max);
    g.seed = kv.get_u64("generator.seed", c.sampling.seed);
    g.retry_cap = kv.get_u64("generator.retry_cap", g.retry_cap);
    c.generator = g;
  }
  c.sampling.n_walks = kv.get_u32("n_walks", c.sampling.n_walks);
  c.sampling.walk_length = kv.get_u32("walk_length", c.sampling.walk_length);
  c.sampling.n_segment_samples = kv.get_u32("n_segment_samples", c.sampling.n_segment_samples);
  c.beta = kv.get_double("beta", c.beta);
  c.gamma = kv.get_double("gamma", c.gamma);
  c.algorithm = parse_algorithm(kv.get_string("algorithm", "greedy"));
  c.alliance_count = kv.get_u32("K", c.alliance_count);
  c.epsilon = kv.get_double("epsilon", c.epsilon);
  c.n_intervals = kv.get_u32("n_intervals", c.n_intervals);
  c.n_candidates = kv.get_u32("n_candidates", c.n_candidates);
  c.max_enumerate_carriers = kv.get_u32("max_enumerate_carriers", c.max_enumerate_carriers);
  c.eval_seed_count = kv.get_u32("eval_seeds", c.eval_seed_count);
  if (kv.has("eval_seed_base")) c.eval_seed_base = kv.get_u64("eval_seed_base", 0);
  c.baseline_alliances = kv.get_u32("baseline.alliances", c.baseline_alliances);
  c.baseline_seed = kv.get_u64("baseline.seed", c.sampling.seed);
  c.force_resample = kv.get_bool("force_resample", false);
  c.out_dir = kv.get_string("out", "out");
  kv.reject_unknown();
  return c;
}

void ExperimentConfig::validate() const {
  if (schedule_path && generator) {
    throw ConfigError("config: give either 'schedule' or generator.* keys, not both");
  }
  if (!schedule_path && !generator) throw ConfigError("config: no input schedule or generator spec");
  if (alliance_path && !schedule_path) throw ConfigError("config: 'alliances' requires 'schedule'");
  if (generator) generator->validate();
  sampling.validate();
  if (beta < 0.0 || gamma < 0.0) throw ConfigError("config: beta and gamma must be non-negative");
  if (alliance_count < 1) throw ConfigError("config: K must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("config: epsilon must lie in (0, 1)");
  if (n_intervals < 2) throw ConfigError("config: n_intervals must be >= 2");
  if (n_candidates < 1) throw ConfigError("config: n_candidates must be >= 1");
  if (eval_seed_count < 1) throw ConfigError("config: eval_seeds must be >= 1");
  const auto seeds = evaluation_seeds();
  if (std::find(seeds.begin(), seeds.end(), sampling.seed) != seeds.end()) {
    throw ConfigError("config: evaluation seeds overlap the optimization seed " + std::to_string(sampling.seed));
  }
}

std::vector<std::uint64_t> ExperimentConfig::evaluation_seeds() const {
  const std::uint64_t base = eval_seed_base.value_or(sampling.seed + 1);
  std::vector<std::uint64_t> out(eval_seed_count);
  for (std::uint32_t i = 0; i < eval_seed_count; ++i) out[i] = base + i;
  return out;
}

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream o;
  if (schedule_path) o << "schedule = " << schedule_path->generic_string() << '\n';
  if (alliance_path) o << "alliances = " << alliance_path->generic_string() << '\n';
  if (generator) {
    o << "generator.airports = " << generator->n_airports << '\n'
      << "generator.records = " << generator->n_segment_records << '\n'
      << "generator.carriers = " << generator->n_carriers << '\n'
      << "generator.weight_min = " << fmt_double(generator->weight_min) << '\n'
      << "generator.weight_max = " << fmt_double(generator->weight_max) << '\n'
      << "generator.seed = " << generator->seed << '\n'
      << "generator.retry_cap = " << generator->retry_cap << '\n';
  }
  o << "seed = " << sampling.seed << '\n'
    << "n_walks = " << sampling.n_walks << '\n'
    << "walk_length = " << sampling.walk_length << '\n'
    << "n_segment_samples = " << sampling.n_segment_samples << '\n'
    << "beta = " << fmt_double(beta) << '\n'
    << "gamma = " << fmt_double(gamma) << '\n'
    << "algorithm = " << algorithm_name(algorithm) << '\n'
    << "K = " << alliance_count << '\n'
    << "epsilon = " << fmt_double(epsilon) << '\n'
    << "n_intervals = " << n_intervals << '\n'
    << "n_candidates = " << n_candidates << '\n'
    << "max_enumerate_carriers = " << max_enumerate_carriers << '\n'
    << "eval_seeds = " << eval_seed_count << '\n'
    << "eval_seed_base = " << eval_seed_base.value_or(sampling.seed + 1) << '\n'
    << "baseline.alliances = " << baseline_alliances << '\n'
    << "baseline.seed = " << baseline_seed << '\n';
  return o.str();
}

std::uint64_t ExperimentConfig::config_hash() const {
  Fnv1a h;
  h.str(canonical_text());
  return h.digest();
}

}  // namespace alliance
