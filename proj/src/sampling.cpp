#include "alliance/sampling.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "alliance/error.hpp"
#include "alliance/rng.hpp"

namespace alliance {

void SamplingConfig::validate() const {
  if (n_walks < 1) throw ConfigError("n_walks must be >= 1");
  if (walk_length < 1) throw ConfigError("walk_length must be >= 1");
  if (n_segment_samples < 1) throw ConfigError("n_segment_samples must be >= 1");
}

namespace {

void require_roots(const MultiAttributeGraph& g) {
  if (g.walk_roots().empty()) throw DataError("graph has no airport with outgoing segments");
}

}  // namespace

WalkTensors run_walks(const MultiAttributeGraph& g, const SamplingConfig& cfg) {
  cfg.validate();
  require_roots(g);
  WalkTensors t;
  t.roots.assign(g.walk_roots().begin(), g.walk_roots().end());
  t.n_walks = cfg.n_walks;
  t.walk_length = cfg.walk_length;
  const std::size_t n = t.walk_count();
  const std::size_t stride = cfg.walk_length + 1;
  t.lengths.assign(n, 0);
  t.airports.assign(n * stride, kNoIndex);

  const auto total = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t w = 0; w < total; ++w) {
    const std::size_t r = static_cast<std::size_t>(w) / cfg.n_walks;
    const std::size_t j = static_cast<std::size_t>(w) % cfg.n_walks;
    const StreamRng rng(cfg.seed, Stream::kWalk, t.roots[r], j);
    AirportIndex* path = &t.airports[static_cast<std::size_t>(w) * stride];
    path[0] = t.roots[r];
    std::uint32_t len = 0;
    for (std::uint32_t l = 0; l < cfg.walk_length; ++l) {
      const SegmentIndex s = g.draw_out_segment(path[l], rng.uniform_at(l));
      if (s == kNoIndex) break;  // dead end: truncate
      path[l + 1] = g.segment(s).destination;
      ++len;
    }
    t.lengths[static_cast<std::size_t>(w)] = len;
  }
  return t;
}

StepSamples conditional_sample(const MultiAttributeGraph& g, const WalkTensors& walks, const SamplingConfig& cfg) {
  const std::size_t n = walks.walk_count();
  const std::size_t len = walks.walk_length;
  if (walks.airports.size() != n * (len + 1) || walks.lengths.size() != n) {
    throw IntegrityError("walk tensor shape does not match its dimensions");
  }
  StepSamples out;
  out.carriers.assign(n * len, kNoIndex);
  out.weights.assign(n * len, 0.0);

  const auto total = static_cast<std::int64_t>(n);
  bool bad = false;
#pragma omp parallel for schedule(static) reduction(|| : bad)
  for (std::int64_t w = 0; w < total; ++w) {
    const std::size_t wi = static_cast<std::size_t>(w);
    const std::size_t r = wi / walks.n_walks;
    const std::size_t j = wi % walks.n_walks;
    const StreamRng rng(cfg.seed, Stream::kCarrier, walks.roots[r], j);
    for (std::uint32_t l = 0; l < walks.lengths[wi]; ++l) {
      const auto seg = g.find_segment(walks.airport(wi, l), walks.airport(wi, l + 1));
      if (!seg) {
        bad = true;
        break;
      }
      const Segment& s = g.segment(*seg);
      const auto& cw = s.carriers[g.draw_carrier_slot(*seg, rng.uniform_at(l))];
      out.carriers[wi * len + l] = cw.carrier;
      out.weights[wi * len + l] = cw.weight;
    }
  }
  if (bad) throw IntegrityError("walk tensor references a pair that is not a segment of this graph");
  return out;
}

WalkTensors sample_walks(const MultiAttributeGraph& g, const SamplingConfig& cfg) {
  WalkTensors t = run_walks(g, cfg);
  StepSamples s = conditional_sample(g, t, cfg);
  t.carriers = std::move(s.carriers);
  t.weights = std::move(s.weights);
  return t;
}

SegmentSampleSet sample_segments(const MultiAttributeGraph& g, const SamplingConfig& cfg) {
  cfg.validate();
  SegmentSampleSet out;
  out.per_segment = cfg.n_segment_samples;
  out.draws.resize(g.segment_count() * cfg.n_segment_samples);
  const auto total = static_cast<std::int64_t>(g.segment_count());
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < total; ++s) {
    const auto seg = static_cast<SegmentIndex>(s);
    const StreamRng rng(cfg.seed, Stream::kSegment, seg);
    const auto& carriers = g.segment(seg).carriers;
    CarrierIndex* dst = &out.draws[static_cast<std::size_t>(s) * cfg.n_segment_samples];
    for (std::uint32_t k = 0; k < cfg.n_segment_samples; ++k) {
      dst[k] = carriers[g.draw_carrier_slot(seg, rng.uniform_at(k))].carrier;
    }
  }
  return out;
}

Realization draw_realization(const MultiAttributeGraph& g, const SamplingConfig& cfg) {
  Realization r;
  r.config = cfg;
  r.graph_hash = g.content_hash();
  r.walks = sample_walks(g, cfg);
  r.segments = sample_segments(g, cfg);
  return r;
}

namespace {

static_assert(std::endian::native == std::endian::little, "cache format is little-endian");

constexpr char kMagic[4] = {'A', 'L', 'W', 'T'};
constexpr std::uint32_t kCacheVersion = 1;

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void put_vec(std::ofstream& out, const std::vector<T>& v) {
  put<std::uint64_t>(out, v.size());
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw DataError("realization cache truncated");
  return v;
}

template <typename T>
std::vector<T> get_vec(std::ifstream& in, std::uint64_t expected) {
  const auto n = get<std::uint64_t>(in);
  if (n != expected) throw DataError("realization cache: array length does not match header dimensions");
  std::vector<T> v(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
  if (!in) throw DataError("realization cache truncated");
  return v;
}

}  // namespace

void save_realization(const std::filesystem::path& path, const Realization& r) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(kMagic, 4);
  put(out, kCacheVersion);
  put<std::uint64_t>(out, r.walks.roots.size());
  put(out, r.walks.n_walks);
  put(out, r.walks.walk_length);
  put(out, r.config.n_walks);
  put(out, r.config.walk_length);
  put(out, r.config.n_segment_samples);
  put(out, r.config.seed);
  put(out, r.graph_hash);
  put<std::uint64_t>(out, r.segments.segment_count());
  put(out, r.segments.per_segment);
  put_vec(out, r.walks.roots);
  put_vec(out, r.walks.lengths);
  put_vec(out, r.walks.airports);
  put_vec(out, r.walks.carriers);
  put_vec(out, r.walks.weights);
  put_vec(out, r.segments.draws);
  if (!out) throw DataError("failed writing " + path.string());
}

Realization load_realization(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw DataError(path.string() + ": not a realization cache");
  const auto version = get<std::uint32_t>(in);
  if (version != kCacheVersion) throw DataError(path.string() + ": unsupported cache version " + std::to_string(version));
  Realization r;
  const auto n_roots = get<std::uint64_t>(in);
  r.walks.n_walks = get<std::uint32_t>(in);
  r.walks.walk_length = get<std::uint32_t>(in);
  r.config.n_walks = get<std::uint32_t>(in);
  r.config.walk_length = get<std::uint32_t>(in);
  r.config.n_segment_samples = get<std::uint32_t>(in);
  r.config.seed = get<std::uint64_t>(in);
  r.graph_hash = get<std::uint64_t>(in);
  const auto n_segments = get<std::uint64_t>(in);
  r.segments.per_segment = get<std::uint32_t>(in);
  const std::uint64_t walks = n_roots * r.walks.n_walks;
  r.walks.roots = get_vec<AirportIndex>(in, n_roots);
  r.walks.lengths = get_vec<std::uint32_t>(in, walks);
  r.walks.airports = get_vec<AirportIndex>(in, walks * (r.walks.walk_length + 1));
  r.walks.carriers = get_vec<CarrierIndex>(in, walks * r.walks.walk_length);
  r.walks.weights = get_vec<double>(in, walks * r.walks.walk_length);
  r.segments.draws = get_vec<CarrierIndex>(in, n_segments * r.segments.per_segment);
  return r;
}

Realization load_or_draw(const std::filesystem::path& path, const MultiAttributeGraph& g, const SamplingConfig& cfg,
                         bool force) {
  if (!force && std::filesystem::exists(path)) {
    Realization r = load_realization(path);
    const bool same = r.graph_hash == g.content_hash() && r.config.seed == cfg.seed &&
                      r.config.n_walks == cfg.n_walks && r.config.walk_length == cfg.walk_length &&
                      r.config.n_segment_samples == cfg.n_segment_samples;
    if (same) return r;
  }
  Realization r = draw_realization(g, cfg);
  save_realization(path, r);
  return r;
}

}  // namespace alliance
