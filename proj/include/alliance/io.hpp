#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "alliance/enumerate.hpp"
#include "alliance/graph.hpp"
#include "alliance/greedy.hpp"
#include "alliance/metrics.hpp"
#include "alliance/partition.hpp"

namespace alliance {

/// Hashes and seeds stamped on every output. CSV files carry them as a
/// leading `# key=value ...` comment line; JSON files as a "provenance" object.
struct Provenance {
  std::uint64_t config_hash = 0;
  std::uint64_t graph_hash = 0;
  std::vector<std::pair<std::string, std::uint64_t>> seeds;

  std::string csv_comment() const;
  nlohmann::ordered_json to_json() const;
};

// 6 significant digits for CSV cells.
std::string csv_number(double v);

// Writes atomically enough for batch use: truncates, writes, checks the stream.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

// Schedule CSV: header `origin,destination,carrier,asm`. Lines starting with
// '#' are skipped. Throws DataError with the line number on malformed rows.
std::vector<ScheduleRecord> read_schedule_csv(const std::filesystem::path& path);
std::vector<ScheduleRecord> parse_schedule_csv(const std::string& text, const std::string& origin = "<schedule>");
std::string format_schedule_csv(std::span<const ScheduleRecord> records, const Provenance* prov = nullptr);

/// Alliance / partition CSV: header `carrier,alliance`. Labels that are all
/// positive integers are used as 1-based alliance numbers; otherwise labels
/// are numbered in order of first appearance. Carriers of `carrier_names`
/// absent from the file become singleton alliances. A `# alliance_count=K`
/// comment fixes K. Unknown carriers or duplicate rows throw DataError.
AlliancePartition parse_partition_csv(const std::string& text, const std::vector<std::string>& carrier_names,
                                      const std::string& origin = "<partition>");
AlliancePartition read_partition_csv(const std::filesystem::path& path, const std::vector<std::string>& carrier_names);
std::string format_partition_csv(const AlliancePartition& p, const std::vector<std::string>& carrier_names,
                                 const Provenance* prov = nullptr);

std::string format_hhi_csv(const MultiAttributeGraph& g, std::span<const double> hhi, const Provenance& prov);
std::string format_mpc_csv(const MultiAttributeGraph& g, const MpcTable& t, const Provenance& prov);
nlohmann::ordered_json objective_json(const ObjectiveBreakdown& b, std::uint64_t seed, std::uint64_t realization_id,
                                      const Provenance& prov);
std::string format_trace_csv(const GreedyTrace& t, const Provenance& prov);
std::string format_landscape_csv(const EnumerationResult& r, const Provenance& prov);

nlohmann::ordered_json graph_summary_json(const MultiAttributeGraph& g);

}  // namespace alliance
