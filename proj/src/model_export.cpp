#include "alliance/model_export.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "alliance/error.hpp"
#include "alliance/hash.hpp"

namespace alliance {

using ojson = nlohmann::ordered_json;

ModelFormat parse_model_format(std::string_view id) {
  if (id == "json") return ModelFormat::kJson;
  if (id == "lp") return ModelFormat::kLp;
  throw ConfigError("unknown model format '" + std::string(id) + "' (expected json or lp)");
}

std::string export_model(const MiqpModel& m, ModelFormat format) {
  return format == ModelFormat::kJson ? export_model_json(m) : export_model_lp(m);
}

// ---------------------------------------------------------------------------
// JSON

std::string export_model_json(const MiqpModel& m) {
  m.validate();
  ojson j;
  j["format"] = "alliance-miqp";
  j["version"] = kModelFormatVersion;
  j["sense"] = "minimize";
  ojson meta;
  meta["beta"] = m.meta.beta;
  meta["gamma"] = m.meta.gamma;
  meta["K"] = m.meta.alliance_count;
  meta["epsilon"] = m.meta.epsilon;
  meta["n_intervals"] = m.meta.n_intervals;
  meta["seed"] = m.meta.seed;
  meta["graph_hash"] = hex64(m.meta.graph_hash);
  meta["n_walks"] = m.meta.n_walks;
  meta["walk_length"] = m.meta.walk_length;
  meta["n_segment_samples"] = m.meta.n_segment_samples;
  ojson params = ojson::array();
  for (const auto& [k, v] : m.meta.solver_params) params.push_back(ojson::array({k, v}));
  meta["solver_params"] = params;
  j["metadata"] = meta;
  j["carriers"] = m.carrier_names;
  j["counts"] = {{"binaries", m.binary_count()},
                 {"assignment_rows", m.assignment_row_count()},
                 {"pwl_curves", m.pwl_curve_count()}};
  j["bounds"] = {{"z", {m.z_lower, m.z_upper}}, {"y", {m.y_lower, m.y_upper}}};
  ojson pairs = ojson::array();
  for (const auto& t : m.hhi_pairs) pairs.push_back(ojson::array({t.i, t.j, t.coef}));
  j["hhi_pairs"] = pairs;
  j["y_objective"] = m.y_objective;
  ojson rows = ojson::array();
  for (const auto& row : m.z_rows) {
    ojson r = ojson::array();
    for (const auto& t : row) r.push_back(ojson::array({t.partner, t.coef}));
    rows.push_back(r);
  }
  j["z_rows"] = rows;
  ojson curves = ojson::array();
  for (const auto& c : m.pwl) curves.push_back({{"breakpoints", c.breakpoints}, {"values", c.values}});
  j["pwl"] = curves;
  return j.dump(1) + "\n";
}

MiqpModel model_from_json(std::string_view text) {
  MiqpModel m;
  try {
    const ojson j = ojson::parse(text);
    if (j.at("format").get<std::string>() != "alliance-miqp") throw DataError("model JSON: unexpected format tag");
    if (j.at("version").get<int>() != kModelFormatVersion) throw DataError("model JSON: unsupported version");
    const auto& meta = j.at("metadata");
    m.meta.beta = meta.at("beta").get<double>();
    m.meta.gamma = meta.at("gamma").get<double>();
    m.meta.alliance_count = meta.at("K").get<std::uint32_t>();
    m.meta.epsilon = meta.at("epsilon").get<double>();
    m.meta.n_intervals = meta.at("n_intervals").get<std::uint32_t>();
    m.meta.seed = meta.at("seed").get<std::uint64_t>();
    const auto hash = parse_hex64(meta.at("graph_hash").get<std::string>());
    if (!hash) throw DataError("model JSON: malformed graph_hash");
    m.meta.graph_hash = *hash;
    m.meta.n_walks = meta.at("n_walks").get<std::uint32_t>();
    m.meta.walk_length = meta.at("walk_length").get<std::uint32_t>();
    m.meta.n_segment_samples = meta.at("n_segment_samples").get<std::uint32_t>();
    for (const auto& p : meta.at("solver_params")) {
      m.meta.solver_params.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    }
    m.carrier_names = j.at("carriers").get<std::vector<std::string>>();
    const auto& b = j.at("bounds");
    m.z_lower = b.at("z").at(0).get<double>();
    m.z_upper = b.at("z").at(1).get<double>();
    m.y_lower = b.at("y").at(0).get<double>();
    m.y_upper = b.at("y").at(1).get<double>();
    for (const auto& t : j.at("hhi_pairs")) {
      m.hhi_pairs.push_back(
          CoefficientPair{t.at(0).get<std::uint32_t>(), t.at(1).get<std::uint32_t>(), t.at(2).get<double>()});
    }
    m.y_objective = j.at("y_objective").get<std::vector<double>>();
    for (const auto& row : j.at("z_rows")) {
      auto& dst = m.z_rows.emplace_back();
      for (const auto& t : row) dst.push_back(PartnerTerm{t.at(0).get<CarrierIndex>(), t.at(1).get<double>()});
    }
    for (const auto& c : j.at("pwl")) {
      m.pwl.push_back(PwlCurve{c.at("breakpoints").get<std::vector<double>>(), c.at("values").get<std::vector<double>>()});
    }
    const auto& counts = j.at("counts");
    m.validate();
    if (counts.at("binaries").get<std::size_t>() != m.binary_count() ||
        counts.at("assignment_rows").get<std::size_t>() != m.assignment_row_count() ||
        counts.at("pwl_curves").get<std::size_t>() != m.pwl_curve_count()) {
      throw DataError("model JSON: recorded counts disagree with the model body");
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model JSON: ") + e.what());
  }
  return m;
}

// ---------------------------------------------------------------------------
// LP text

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string xname(std::size_t c, std::size_t k) { return "x_" + std::to_string(c) + "_" + std::to_string(k); }

// Accumulates terms and wraps lines; continuation lines start with a space.
class LineWriter {
 public:
  explicit LineWriter(std::ostringstream& out) : out_(out) {}
  void start(const std::string& head) {
    flush();
    line_ = " " + head;
  }
  void add(const std::string& token) {
    if (line_.size() + token.size() + 1 > kWidth) {
      out_ << line_ << '\n';
      line_ = " ";
    }
    line_ += ' ';
    line_ += token;
  }
  void term(double coef, const std::string& var) {
    add(coef < 0.0 || std::signbit(coef) ? "-" : "+");
    add(num(std::fabs(coef)));
    add(var);
  }
  void quad(double coef, const std::string& a, const std::string& b) {
    add(coef < 0.0 || std::signbit(coef) ? "-" : "+");
    add(num(std::fabs(coef)));
    add(a);
    if (a == b) {
      add("^");
      add("2");
    } else {
      add("*");
      add(b);
    }
  }
  void flush() {
    if (!line_.empty()) out_ << line_ << '\n';
    line_.clear();
  }

 private:
  static constexpr std::size_t kWidth = 200;
  std::ostringstream& out_;
  std::string line_;
};

}  // namespace

std::string export_model_lp(const MiqpModel& m) {
  m.validate();
  const std::size_t nc = m.carrier_count();
  const std::uint32_t nk = m.meta.alliance_count;
  std::ostringstream out;
  out << "\\ alliance-miqp " << kModelFormatVersion << '\n';
  out << "\\ graph_hash " << hex64(m.meta.graph_hash) << '\n';
  out << "\\ seed " << m.meta.seed << '\n';
  out << "\\ beta " << num(m.meta.beta) << '\n';
  out << "\\ gamma " << num(m.meta.gamma) << '\n';
  out << "\\ K " << nk << '\n';
  out << "\\ epsilon " << num(m.meta.epsilon) << '\n';
  out << "\\ n_intervals " << m.meta.n_intervals << '\n';
  out << "\\ n_walks " << m.meta.n_walks << '\n';
  out << "\\ walk_length " << m.meta.walk_length << '\n';
  out << "\\ n_segment_samples " << m.meta.n_segment_samples << '\n';
  for (const auto& [k, v] : m.meta.solver_params) out << "\\ solver " << k << ' ' << v << '\n';
  for (std::size_t c = 0; c < nc; ++c) out << "\\ carrier " << c << ' ' << m.carrier_names[c] << '\n';

  LineWriter w(out);
  out << "Minimize\n";
  w.start("obj:");
  for (std::size_t c = 0; c < nc; ++c) w.term(m.y_objective[c], "y_" + std::to_string(c));
  if (!m.hhi_pairs.empty()) {
    w.add("+");
    w.add("[");
    for (std::uint32_t k = 0; k < nk; ++k) {
      for (const auto& t : m.hhi_pairs) w.quad(2.0 * t.coef, xname(t.i, k), xname(t.j, k));
    }
    w.add("]");
    w.add("/");
    w.add("2");
  }
  w.flush();

  out << "Subject To\n";
  for (std::size_t c = 0; c < nc; ++c) {
    w.start("assign_" + std::to_string(c) + ":");
    for (std::uint32_t k = 0; k < nk; ++k) w.term(1.0, xname(c, k));
    w.add("=");
    w.add("1");
  }
  for (std::size_t c = 0; c < nc; ++c) {
    const std::string cs = std::to_string(c);
    w.start("zdef_" + cs + ":");
    w.term(1.0, "z_" + cs);
    if (!m.z_rows[c].empty()) {
      w.add("+");
      w.add("[");
      for (std::uint32_t k = 0; k < nk; ++k) {
        for (const auto& t : m.z_rows[c]) w.quad(-t.coef, xname(c, k), xname(t.partner, k));
      }
      w.add("]");
    }
    w.add("=");
    w.add("0");
  }
  // Lambda encoding of y = pwl(z): points (0, V_1), (I_1, V_1), ..., (I_n, V_n)
  // with one adjacency binary per segment.
  for (std::size_t c = 0; c < nc; ++c) {
    const std::string cs = std::to_string(c);
    const auto& curve = m.pwl[c];
    const std::size_t np = curve.breakpoints.size() + 1;
    auto lam = [&](std::size_t p) { return "lam_" + cs + "_" + std::to_string(p); };
    auto sel = [&](std::size_t s) { return "sel_" + cs + "_" + std::to_string(s); };
    auto point_z = [&](std::size_t p) { return p == 0 ? 0.0 : curve.breakpoints[p - 1]; };
    auto point_y = [&](std::size_t p) { return p == 0 ? curve.values[0] : curve.values[p - 1]; };
    w.start("conv_" + cs + ":");
    for (std::size_t p = 0; p < np; ++p) w.term(1.0, lam(p));
    w.add("=");
    w.add("1");
    w.start("zlam_" + cs + ":");
    w.term(1.0, "z_" + cs);
    for (std::size_t p = 0; p < np; ++p) w.term(-point_z(p), lam(p));
    w.add("=");
    w.add("0");
    w.start("ylam_" + cs + ":");
    w.term(1.0, "y_" + cs);
    for (std::size_t p = 0; p < np; ++p) w.term(-point_y(p), lam(p));
    w.add("=");
    w.add("0");
    w.start("sos_" + cs + ":");
    for (std::size_t s = 0; s + 1 < np; ++s) w.term(1.0, sel(s));
    w.add("=");
    w.add("1");
    for (std::size_t p = 0; p < np; ++p) {
      w.start("adj_" + cs + "_" + std::to_string(p) + ":");
      w.term(1.0, lam(p));
      if (p > 0) w.term(-1.0, sel(p - 1));
      if (p + 1 < np) w.term(-1.0, sel(p));
      w.add("<=");
      w.add("0");
    }
  }
  w.flush();

  out << "Bounds\n";
  for (std::size_t c = 0; c < nc; ++c) {
    const std::string cs = std::to_string(c);
    out << ' ' << num(m.z_lower) << " <= z_" << cs << " <= " << num(m.z_upper) << '\n';
    out << ' ' << num(m.y_lower) << " <= y_" << cs << " <= " << num(m.y_upper) << '\n';
    for (std::size_t p = 0; p <= m.pwl[c].breakpoints.size(); ++p) out << " 0 <= lam_" << cs << '_' << p << " <= 1\n";
  }
  out << "Binaries\n";
  for (std::size_t c = 0; c < nc; ++c) {
    w.start("");
    for (std::uint32_t k = 0; k < nk; ++k) w.add(xname(c, k));
    for (std::size_t s = 0; s < m.pwl[c].breakpoints.size(); ++s) w.add("sel_" + std::to_string(c) + "_" + std::to_string(s));
  }
  w.flush();
  out << "End\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// LP parser

namespace {

double parse_number(const std::string& tok) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || errno == ERANGE) throw DataError("LP: malformed number '" + tok + "'");
  return v;
}

bool is_number(const std::string& tok) {
  if (tok.empty()) return false;
  char* end = nullptr;
  std::strtod(tok.c_str(), &end);
  return end != tok.c_str() && *end == '\0';
}

class TokenStream {
 public:
  explicit TokenStream(std::vector<std::string> toks) : toks_(std::move(toks)) {}
  bool done() const { return pos_ >= toks_.size(); }
  const std::string& peek() const {
    static const std::string kEmpty;
    return done() ? kEmpty : toks_[pos_];
  }
  std::string next() {
    if (done()) throw DataError("LP: unexpected end of input");
    return toks_[pos_++];
  }
  void expect(const std::string& t) {
    const std::string got = next();
    if (got != t) throw DataError("LP: expected '" + t + "', found '" + got + "'");
  }

 private:
  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
};

bool is_section(const std::string& t) {
  return t == "Minimize" || t == "Subject" || t == "Bounds" || t == "Binaries" || t == "End";
}

bool is_sense(const std::string& t) { return t == "=" || t == "<=" || t == ">="; }

// Optional sign, optional coefficient; returns the signed coefficient.
double read_coef(TokenStream& ts) {
  double sign = 1.0;
  if (ts.peek() == "+" || ts.peek() == "-") sign = ts.next() == "-" ? -1.0 : 1.0;
  if (is_number(ts.peek())) return sign * parse_number(ts.next());
  return sign;
}

void read_bracket(TokenStream& ts, std::vector<LpQuadTerm>& out) {
  ts.expect("[");
  while (ts.peek() != "]") {
    const double c = read_coef(ts);
    const std::string a = ts.next();
    const std::string op = ts.next();
    if (op == "^") {
      ts.expect("2");
      out.push_back(LpQuadTerm{a, a, c});
    } else if (op == "*") {
      out.push_back(LpQuadTerm{a, ts.next(), c});
    } else {
      throw DataError("LP: expected '^' or '*' in quadratic term, found '" + op + "'");
    }
  }
  ts.expect("]");
}

// Reads linear terms and at most one bracket until a sense token or a new
// section / row label.
void read_expression(TokenStream& ts, std::vector<LpTerm>& linear, std::vector<LpQuadTerm>& quad, bool objective) {
  while (!ts.done()) {
    const std::string& t = ts.peek();
    if (is_sense(t) || is_section(t) || (t.size() > 1 && t.back() == ':')) return;
    if (t == "[" ) {
      const std::size_t before = quad.size();
      read_bracket(ts, quad);
      if (objective) {
        ts.expect("/");
        ts.expect("2");
        for (std::size_t i = before; i < quad.size(); ++i) quad[i].coef /= 2.0;
      }
      continue;
    }
    if ((t == "+" || t == "-")) {
      // Either a signed linear term or a sign in front of a bracket.
      const std::string sign = ts.next();
      if (ts.peek() == "[") {
        const std::size_t before = quad.size();
        read_bracket(ts, quad);
        if (objective) {
          ts.expect("/");
          ts.expect("2");
          for (std::size_t i = before; i < quad.size(); ++i) quad[i].coef /= 2.0;
        }
        if (sign == "-") {
          for (std::size_t i = before; i < quad.size(); ++i) quad[i].coef = -quad[i].coef;
        }
        continue;
      }
      double c = sign == "-" ? -1.0 : 1.0;
      if (is_number(ts.peek())) c *= parse_number(ts.next());
      linear.push_back(LpTerm{ts.next(), c});
      continue;
    }
    const double c = read_coef(ts);
    linear.push_back(LpTerm{ts.next(), c});
  }
}

}  // namespace

const LpRow& LpProblem::row(std::string_view name) const {
  for (const auto& r : rows) {
    if (r.name == name) return r;
  }
  throw DataError("LP: no row named '" + std::string(name) + "'");
}

LpProblem parse_lp(std::string_view text) {
  LpProblem lp;
  std::vector<std::string> toks;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '\\') {
      std::string body = line.substr(1);
      const auto b = body.find_first_not_of(' ');
      if (b == std::string::npos) continue;
      body = body.substr(b);
      const auto sp = body.find(' ');
      if (sp == std::string::npos) lp.header.emplace_back(body, "");
      else lp.header.emplace_back(body.substr(0, sp), body.substr(sp + 1));
      continue;
    }
    std::istringstream ls(line);
    std::string t;
    while (ls >> t) toks.push_back(t);
  }

  TokenStream ts(std::move(toks));
  ts.expect("Minimize");
  if (ts.peek().size() > 1 && ts.peek().back() == ':') ts.next();
  read_expression(ts, lp.objective_linear, lp.objective_quadratic, true);
  ts.expect("Subject");
  ts.expect("To");
  while (!ts.done() && !is_section(ts.peek())) {
    LpRow r;
    std::string label = ts.next();
    if (label.size() < 2 || label.back() != ':') throw DataError("LP: expected a row label, found '" + label + "'");
    label.pop_back();
    r.name = label;
    read_expression(ts, r.linear, r.quadratic, false);
    r.sense = ts.next();
    if (!is_sense(r.sense)) throw DataError("LP: row '" + r.name + "' lacks a relation");
    const double sign = ts.peek() == "-" ? (ts.next(), -1.0) : 1.0;
    r.rhs = sign * parse_number(ts.next());
    lp.rows.push_back(std::move(r));
  }
  if (ts.peek() == "Bounds") {
    ts.next();
    while (!ts.done() && !is_section(ts.peek())) {
      const double lo = parse_number(ts.next());
      ts.expect("<=");
      const std::string var = ts.next();
      ts.expect("<=");
      const double hi = parse_number(ts.next());
      lp.bounds[var] = LpBound{lo, hi};
    }
  }
  if (ts.peek() == "Binaries") {
    ts.next();
    while (!ts.done() && !is_section(ts.peek())) lp.binaries.push_back(ts.next());
  }
  ts.expect("End");
  return lp;
}

namespace {

// Parses "<prefix><a>_<b>" into (a, b); "<prefix><a>" when second is null.
bool split_name(const std::string& name, std::string_view prefix, std::size_t& a, std::size_t* b) {
  if (name.rfind(prefix, 0) != 0) return false;
  const std::string rest = name.substr(prefix.size());
  try {
    if (b == nullptr) {
      std::size_t used = 0;
      a = std::stoul(rest, &used);
      return used == rest.size();
    }
    const auto us = rest.find('_');
    if (us == std::string::npos) return false;
    std::size_t u1 = 0, u2 = 0;
    a = std::stoul(rest.substr(0, us), &u1);
    *b = std::stoul(rest.substr(us + 1), &u2);
    return u1 == us && u2 == rest.size() - us - 1;
  } catch (const std::exception&) {
    return false;
  }
}

std::string header_value(const LpProblem& lp, const std::string& key) {
  for (const auto& [k, v] : lp.header) {
    if (k == key) return v;
  }
  throw DataError("LP: missing header '" + key + "'");
}

std::uint64_t header_u64(const LpProblem& lp, const std::string& key) {
  const std::string v = header_value(lp, key);
  try {
    std::size_t used = 0;
    const auto x = std::stoull(v, &used);
    if (used != v.size()) throw DataError("LP: malformed header '" + key + "'");
    return x;
  } catch (const std::logic_error&) {
    throw DataError("LP: malformed header '" + key + "'");
  }
}

}  // namespace

MiqpModel model_from_lp(std::string_view text) {
  const LpProblem lp = parse_lp(text);
  MiqpModel m;
  if (header_u64(lp, "alliance-miqp") != static_cast<std::uint64_t>(kModelFormatVersion)) {
    throw DataError("LP: unsupported model version");
  }
  const auto hash = parse_hex64(header_value(lp, "graph_hash"));
  if (!hash) throw DataError("LP: malformed graph_hash");
  m.meta.graph_hash = *hash;
  m.meta.seed = header_u64(lp, "seed");
  m.meta.beta = parse_number(header_value(lp, "beta"));
  m.meta.gamma = parse_number(header_value(lp, "gamma"));
  m.meta.alliance_count = static_cast<std::uint32_t>(header_u64(lp, "K"));
  m.meta.epsilon = parse_number(header_value(lp, "epsilon"));
  m.meta.n_intervals = static_cast<std::uint32_t>(header_u64(lp, "n_intervals"));
  m.meta.n_walks = static_cast<std::uint32_t>(header_u64(lp, "n_walks"));
  m.meta.walk_length = static_cast<std::uint32_t>(header_u64(lp, "walk_length"));
  m.meta.n_segment_samples = static_cast<std::uint32_t>(header_u64(lp, "n_segment_samples"));
  for (const auto& [k, v] : lp.header) {
    if (k == "solver") {
      const auto sp = v.find(' ');
      if (sp == std::string::npos) throw DataError("LP: malformed solver header");
      m.meta.solver_params.emplace_back(v.substr(0, sp), v.substr(sp + 1));
    } else if (k == "carrier") {
      const auto sp = v.find(' ');
      if (sp == std::string::npos) throw DataError("LP: malformed carrier header");
      if (std::stoul(v.substr(0, sp)) != m.carrier_names.size()) throw DataError("LP: carrier headers out of order");
      m.carrier_names.push_back(v.substr(sp + 1));
    }
  }
  const std::size_t nc = m.carrier_names.size();
  if (nc == 0) throw DataError("LP: no carriers");

  m.y_objective.assign(nc, 0.0);
  for (const auto& t : lp.objective_linear) {
    std::size_t c = 0;
    if (!split_name(t.var, "y_", c, nullptr) || c >= nc) throw DataError("LP: unexpected objective term " + t.var);
    m.y_objective[c] = t.coef;
  }
  for (const auto& t : lp.objective_quadratic) {
    std::size_t a = 0, ka = 0, b = 0, kb = 0;
    if (!split_name(t.a, "x_", a, &ka) || !split_name(t.b, "x_", b, &kb) || ka != kb) {
      throw DataError("LP: unexpected quadratic objective term");
    }
    if (ka != 0) continue;  // replicated per alliance
    m.hhi_pairs.push_back(CoefficientPair{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), t.coef});
  }

  m.z_rows.resize(nc);
  m.pwl.resize(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    const std::string cs = std::to_string(c);
    for (const auto& t : lp.row("zdef_" + cs).quadratic) {
      std::size_t a = 0, ka = 0, b = 0, kb = 0;
      if (!split_name(t.a, "x_", a, &ka) || !split_name(t.b, "x_", b, &kb) || a != c || ka != kb) {
        throw DataError("LP: unexpected term in zdef_" + cs);
      }
      if (ka != 0) continue;
      m.z_rows[c].push_back(PartnerTerm{static_cast<CarrierIndex>(b), -t.coef});
    }
    const auto& zl = lp.row("zlam_" + cs).linear;
    const auto& yl = lp.row("ylam_" + cs).linear;
    if (zl.size() != yl.size() || zl.size() < 3) throw DataError("LP: malformed lambda rows for carrier " + cs);
    // Term 0 is z/y itself, term 1 the floor point.
    for (std::size_t p = 2; p < zl.size(); ++p) {
      m.pwl[c].breakpoints.push_back(-zl[p].coef);
      m.pwl[c].values.push_back(-yl[p].coef);
    }
  }
  std::size_t assign_rows = 0;
  for (const auto& r : lp.rows) assign_rows += r.name.rfind("assign_", 0) == 0 ? 1 : 0;
  if (assign_rows != nc) throw DataError("LP: assignment row count does not match the carriers");

  const auto zb = lp.bounds.find("z_0");
  const auto yb = lp.bounds.find("y_0");
  if (zb == lp.bounds.end() || yb == lp.bounds.end()) throw DataError("LP: missing z/y bounds");
  m.z_lower = zb->second.lower;
  m.z_upper = zb->second.upper;
  m.y_lower = yb->second.lower;
  m.y_upper = yb->second.upper;
  m.validate();
  return m;
}

namespace {

bool close(double a, double b, double tol) {
  if (a == b) return true;
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

bool close_all(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!close(a[i], b[i], tol)) return false;
  }
  return true;
}

}  // namespace

bool models_equal(const MiqpModel& a, const MiqpModel& b, double tol) {
  const auto& ma = a.meta;
  const auto& mb = b.meta;
  if (ma.alliance_count != mb.alliance_count || ma.n_intervals != mb.n_intervals || ma.seed != mb.seed ||
      ma.graph_hash != mb.graph_hash || ma.n_walks != mb.n_walks || ma.walk_length != mb.walk_length ||
      ma.n_segment_samples != mb.n_segment_samples || ma.solver_params != mb.solver_params) {
    return false;
  }
  if (!close(ma.beta, mb.beta, tol) || !close(ma.gamma, mb.gamma, tol) || !close(ma.epsilon, mb.epsilon, tol)) {
    return false;
  }
  if (a.carrier_names != b.carrier_names || a.hhi_pairs.size() != b.hhi_pairs.size()) return false;
  for (std::size_t i = 0; i < a.hhi_pairs.size(); ++i) {
    const auto& x = a.hhi_pairs[i];
    const auto& y = b.hhi_pairs[i];
    if (x.i != y.i || x.j != y.j || !close(x.coef, y.coef, tol)) return false;
  }
  if (!close_all(a.y_objective, b.y_objective, tol) || a.z_rows.size() != b.z_rows.size()) return false;
  for (std::size_t c = 0; c < a.z_rows.size(); ++c) {
    if (a.z_rows[c].size() != b.z_rows[c].size()) return false;
    for (std::size_t i = 0; i < a.z_rows[c].size(); ++i) {
      if (a.z_rows[c][i].partner != b.z_rows[c][i].partner ||
          !close(a.z_rows[c][i].coef, b.z_rows[c][i].coef, tol)) {
        return false;
      }
    }
  }
  if (a.pwl.size() != b.pwl.size()) return false;
  for (std::size_t c = 0; c < a.pwl.size(); ++c) {
    if (!close_all(a.pwl[c].breakpoints, b.pwl[c].breakpoints, tol) ||
        !close_all(a.pwl[c].values, b.pwl[c].values, tol)) {
      return false;
    }
  }
  return close(a.z_lower, b.z_lower, tol) && close(a.z_upper, b.z_upper, tol) && close(a.y_lower, b.y_lower, tol) &&
         close(a.y_upper, b.y_upper, tol);
}

}  // namespace alliance
