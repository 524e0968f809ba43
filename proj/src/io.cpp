#include "alliance/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

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

// Unquoted CSV; ids must not contain commas.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct CsvLine {
  std::size_t lineno;
  std::vector<std::string> fields;
};

// Returns the comment lines and the data lines (header first).
std::pair<std::vector<std::string>, std::vector<CsvLine>> read_csv_lines(const std::string& text) {
  std::vector<std::string> comments;
  std::vector<CsvLine> lines;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      comments.push_back(t);
      continue;
    }
    lines.push_back(CsvLine{lineno, split_csv(line)});
  }
  return {comments, lines};
}

void expect_header(const std::vector<CsvLine>& lines, const std::vector<std::string>& header, const std::string& origin) {
  if (lines.empty()) throw DataError(origin + ": missing header line");
  if (lines.front().fields != header) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    throw DataError(origin + ":" + std::to_string(lines.front().lineno) + ": expected header '" + want + "'");
  }
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string Provenance::csv_comment() const {
  std::string s = "# config_hash=" + hex64(config_hash) + " graph_hash=" + hex64(graph_hash);
  for (const auto& [k, v] : seeds) s += " " + k + "=" + std::to_string(v);
  return s + "\n";
}

nlohmann::ordered_json Provenance::to_json() const {
  nlohmann::ordered_json j;
  j["config_hash"] = hex64(config_hash);
  j["graph_hash"] = hex64(graph_hash);
  nlohmann::ordered_json s = nlohmann::ordered_json::object();
  for (const auto& [k, v] : seeds) s[k] = v;
  j["seeds"] = s;
  return j;
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw DataError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<ScheduleRecord> parse_schedule_csv(const std::string& text, const std::string& origin) {
  const auto [comments, lines] = read_csv_lines(text);
  expect_header(lines, {"origin", "destination", "carrier", "asm"}, origin);
  std::vector<ScheduleRecord> out;
  out.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    const std::string where = origin + ":" + std::to_string(l.lineno);
    if (l.fields.size() != 4) throw DataError(where + ": expected 4 fields, found " + std::to_string(l.fields.size()));
    double w = 0.0;
    std::size_t used = 0;
    try {
      w = std::stod(l.fields[3], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != l.fields[3].size()) throw DataError(where + ": asm '" + l.fields[3] + "' is not a number");
    out.push_back(ScheduleRecord{l.fields[0], l.fields[1], l.fields[2], w});
  }
  return out;
}

std::vector<ScheduleRecord> read_schedule_csv(const std::filesystem::path& path) {
  return parse_schedule_csv(read_text_file(path), path.string());
}

std::string format_schedule_csv(std::span<const ScheduleRecord> records, const Provenance* prov) {
  std::string s;
  if (prov) s += prov->csv_comment();
  s += "origin,destination,carrier,asm\n";
  for (const auto& r : records) s += r.origin + "," + r.destination + "," + r.carrier + "," + fmt17(r.asm_weight) + "\n";
  return s;
}

AlliancePartition parse_partition_csv(const std::string& text, const std::vector<std::string>& carrier_names,
                                      const std::string& origin) {
  const auto [comments, lines] = read_csv_lines(text);
  expect_header(lines, {"carrier", "alliance"}, origin);
  std::unordered_map<std::string, CarrierIndex> lookup;
  for (CarrierIndex c = 0; c < carrier_names.size(); ++c) lookup.emplace(carrier_names[c], c);

  std::optional<std::uint32_t> fixed_k;
  for (const auto& c : comments) {
    const auto pos = c.find("alliance_count=");
    if (pos == std::string::npos) continue;
    try {
      fixed_k = static_cast<std::uint32_t>(std::stoul(c.substr(pos + 15)));
    } catch (const std::exception&) {
      throw DataError(origin + ": malformed alliance_count comment");
    }
  }

  std::vector<std::string> label_of(carrier_names.size());
  std::vector<bool> seen(carrier_names.size(), false);
  bool numeric = true;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    const std::string where = origin + ":" + std::to_string(l.lineno);
    if (l.fields.size() != 2) throw DataError(where + ": expected 2 fields");
    const auto it = lookup.find(l.fields[0]);
    if (it == lookup.end()) throw DataError(where + ": unknown carrier '" + l.fields[0] + "'");
    if (seen[it->second]) throw DataError(where + ": carrier '" + l.fields[0] + "' listed twice");
    if (l.fields[1].empty()) throw DataError(where + ": empty alliance label");
    seen[it->second] = true;
    label_of[it->second] = l.fields[1];
    const auto& lab = l.fields[1];
    if (lab.find_first_not_of("0123456789") != std::string::npos || lab.size() > 9 || std::stoul(lab) == 0) {
      numeric = false;
    }
  }

  std::vector<std::uint32_t> assignment(carrier_names.size(), 0);
  std::uint32_t k = 0;
  if (numeric) {
    for (std::size_t c = 0; c < carrier_names.size(); ++c) {
      if (!seen[c]) continue;
      assignment[c] = static_cast<std::uint32_t>(std::stoul(label_of[c]) - 1);
      k = std::max(k, assignment[c] + 1);
    }
  } else {
    // Numbered by first appearance in carrier order.
    std::map<std::string, std::uint32_t> ids;
    for (std::size_t c = 0; c < carrier_names.size(); ++c) {
      if (!seen[c]) continue;
      const auto [it, fresh] = ids.emplace(label_of[c], k);
      if (fresh) ++k;
      assignment[c] = it->second;
    }
  }
  if (fixed_k) {
    if (*fixed_k < k) throw DataError(origin + ": alliance_count comment is smaller than the labels used");
    k = *fixed_k;
  }
  for (std::size_t c = 0; c < carrier_names.size(); ++c) {
    if (!seen[c]) assignment[c] = k++;
  }
  return AlliancePartition(std::move(assignment), k);
}

AlliancePartition read_partition_csv(const std::filesystem::path& path, const std::vector<std::string>& carrier_names) {
  return parse_partition_csv(read_text_file(path), carrier_names, path.string());
}

std::string format_partition_csv(const AlliancePartition& p, const std::vector<std::string>& carrier_names,
                                 const Provenance* prov) {
  if (p.carrier_count() != carrier_names.size()) throw IntegrityError("partition does not cover the carrier list");
  std::string s;
  if (prov) s += prov->csv_comment();
  s += "# alliance_count=" + std::to_string(p.alliance_count()) + "\n";
  s += "carrier,alliance\n";
  for (CarrierIndex c = 0; c < carrier_names.size(); ++c) {
    s += carrier_names[c] + "," + std::to_string(p.alliance_of(c) + 1) + "\n";
  }
  return s;
}

std::string format_hhi_csv(const MultiAttributeGraph& g, std::span<const double> hhi, const Provenance& prov) {
  if (hhi.size() != g.segment_count()) throw IntegrityError("HHI vector does not match the segment count");
  std::string s = prov.csv_comment() + "origin,destination,hhi\n";
  for (SegmentIndex i = 0; i < g.segment_count(); ++i) {
    const auto& seg = g.segment(i);
    s += g.airport_name(seg.origin) + "," + g.airport_name(seg.destination) + "," + csv_number(hhi[i]) + "\n";
  }
  return s;
}

std::string format_mpc_csv(const MultiAttributeGraph& g, const MpcTable& t, const Provenance& prov) {
  if (t.w_carrier.size() != g.carrier_count()) throw IntegrityError("MPC table does not match the carrier count");
  std::string s = prov.csv_comment() + "carrier,mpc_log\n";
  for (CarrierIndex c = 0; c < g.carrier_count(); ++c) s += g.carrier_name(c) + "," + csv_number(t.w_carrier[c]) + "\n";
  return s;
}

nlohmann::ordered_json objective_json(const ObjectiveBreakdown& b, std::uint64_t seed, std::uint64_t realization_id,
                                      const Provenance& prov) {
  nlohmann::ordered_json j;
  j["beta"] = b.beta;
  j["gamma"] = b.gamma;
  j["hhi_mean"] = b.hhi_mean;
  j["mpc_term"] = b.mpc_term;
  j["objective"] = b.objective;
  j["seed"] = seed;
  j["realization_id"] = realization_id;
  j["provenance"] = prov.to_json();
  return j;
}

std::string format_trace_csv(const GreedyTrace& t, const Provenance& prov) {
  std::string s = prov.csv_comment() + "iteration,p,q,objective,K\n";
  s += "0,,," + csv_number(t.initial_objective) + "," + std::to_string(t.initial_alliance_count) + "\n";
  for (const auto& st : t.steps) {
    s += std::to_string(st.iteration) + "," + std::to_string(st.p) + "," + std::to_string(st.q) + "," +
         csv_number(st.objective) + "," + std::to_string(st.alliance_count) + "\n";
  }
  return s;
}

std::string format_landscape_csv(const EnumerationResult& r, const Provenance& prov) {
  std::string s = prov.csv_comment() + "partition_id,hhi_mean,mpc_term,objective\n";
  for (const auto& pt : r.landscape) {
    s += std::to_string(pt.partition_id) + "," + csv_number(pt.hhi_mean) + "," + csv_number(pt.mpc_term) + "," +
         csv_number(pt.objective) + "\n";
  }
  return s;
}

nlohmann::ordered_json graph_summary_json(const MultiAttributeGraph& g) {
  nlohmann::ordered_json j;
  j["graph_hash"] = hex64(g.content_hash());
  j["airports"] = g.airport_count();
  j["carriers"] = g.carrier_count();
  j["segments"] = g.segment_count();
  j["records"] = g.record_count();
  j["walk_roots"] = g.walk_roots().size();
  j["isolated_airports"] = g.isolated_airports().size();
  std::size_t pairs = 0;
  double total = 0.0;
  for (const auto& s : g.segments()) {
    pairs += s.carriers.size();
    total += s.total_weight;
  }
  j["segment_carrier_pairs"] = pairs;
  j["total_asm"] = total;
  return j;
}

}  // namespace alliance
