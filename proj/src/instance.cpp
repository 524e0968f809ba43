#include "alliance/instance.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "alliance/error.hpp"
#include "alliance/rng.hpp"

namespace alliance {

namespace {

std::string padded(char prefix, std::uint64_t i, std::uint64_t n) {
  const int width = static_cast<int>(std::to_string(n > 0 ? n - 1 : 0).size());
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*llu", prefix, width, static_cast<unsigned long long>(i));
  return buf;
}

struct RawRecord {
  std::uint32_t origin;
  std::uint32_t destination;
  std::uint32_t carrier;
  double weight;
};

RawRecord draw_record(const GeneratorSpec& spec, StreamRng& rng, std::uint32_t origin) {
  RawRecord r{};
  r.origin = origin;
  auto dst = static_cast<std::uint32_t>(rng.below(spec.n_airports - 1));
  if (dst >= origin) ++dst;
  r.destination = dst;
  r.carrier = static_cast<std::uint32_t>(rng.below(spec.n_carriers));
  const double lo = std::log(spec.weight_min);
  const double hi = std::log(spec.weight_max);
  r.weight = std::exp(lo + (hi - lo) * rng.uniform());
  return r;
}

}  // namespace

std::vector<ScheduleRecord> generate_records(const GeneratorSpec& spec) {
  spec.validate();
  std::vector<RawRecord> raw(spec.n_segment_records);
  std::vector<std::uint32_t> out_degree(spec.n_airports, 0);
  for (std::uint32_t i = 0; i < spec.n_segment_records; ++i) {
    StreamRng rng(spec.seed, Stream::kGenerator, 0, i);
    const auto origin = static_cast<std::uint32_t>(rng.below(spec.n_airports));
    raw[i] = draw_record(spec, rng, origin);
    ++out_degree[origin];
  }

  std::uint64_t picks = 0;
  StreamRng repair(spec.seed, Stream::kGenerator, 1, 0);
  for (std::uint32_t u = 0; u < spec.n_airports; ++u) {
    while (out_degree[u] == 0) {
      if (picks >= spec.retry_cap || spec.n_segment_records == 0) {
        std::string missing;
        std::size_t shown = 0;
        for (std::uint32_t v = 0; v < spec.n_airports; ++v) {
          if (out_degree[v] != 0) continue;
          if (shown++ < 20) missing += (missing.empty() ? "" : ", ") + padded('A', v, spec.n_airports);
        }
        throw DataError("generator: retry cap of " + std::to_string(spec.retry_cap) +
                        " re-draws exhausted; airports without outgoing segments: " + missing +
                        (shown > 20 ? " (+" + std::to_string(shown - 20) + " more)" : ""));
      }
      ++picks;
      const auto j = static_cast<std::size_t>(repair.below(spec.n_segment_records));
      if (out_degree[raw[j].origin] < 2) continue;
      --out_degree[raw[j].origin];
      raw[j] = draw_record(spec, repair, u);
      ++out_degree[u];
    }
  }

  std::vector<ScheduleRecord> out;
  out.reserve(raw.size());
  for (const auto& r : raw) {
    out.push_back(ScheduleRecord{padded('A', r.origin, spec.n_airports), padded('A', r.destination, spec.n_airports),
                                 padded('C', r.carrier, spec.n_carriers), r.weight});
  }
  return out;
}

MultiAttributeGraph generate_instance(const GeneratorSpec& spec) {
  const auto records = generate_records(spec);
  return MultiAttributeGraph::build(records);
}

AlliancePartition baseline_partition(std::size_t carrier_count, std::uint32_t alliances, std::uint64_t seed) {
  if (carrier_count == 0) throw DataError("baseline: no carriers");
  if (alliances < 1) throw ConfigError("baseline: need at least one alliance");
  std::vector<std::uint32_t> order(carrier_count);
  std::iota(order.begin(), order.end(), 0u);
  StreamRng rng(seed, Stream::kBaseline, 0, 0);
  for (std::size_t i = carrier_count - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(order[i], order[j]);
  }
  const std::size_t members = (carrier_count + 1) / 2;
  std::vector<std::uint32_t> a(carrier_count);
  std::uint32_t next = alliances;
  for (std::size_t i = 0; i < carrier_count; ++i) {
    a[order[i]] = i < members ? static_cast<std::uint32_t>(i % alliances) : next++;
  }
  return AlliancePartition(std::move(a), next).canonical();
}

}  // namespace alliance
