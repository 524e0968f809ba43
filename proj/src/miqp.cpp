#include "alliance/miqp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "alliance/enumerate.hpp"
#include "alliance/error.hpp"
#include "alliance/metrics.hpp"

namespace alliance {

PwlCurve pwl_breakpoints(double epsilon, std::uint32_t n_intervals) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("pwl: epsilon must lie in (0, 1)");
  if (n_intervals < 2) throw ConfigError("pwl: n_intervals must be >= 2");
  PwlCurve c;
  c.breakpoints.resize(n_intervals);
  c.values.resize(n_intervals);
  const double span = 1.0 - epsilon;
  const double denom = static_cast<double>(n_intervals - 1);
  for (std::uint32_t m = 0; m < n_intervals; ++m) {
    c.breakpoints[m] = epsilon + (static_cast<double>(m) / denom) * span;
  }
  c.breakpoints.front() = epsilon;
  c.breakpoints.back() = 1.0;
  for (std::uint32_t m = 0; m < n_intervals; ++m) c.values[m] = std::log(c.breakpoints[m]);
  for (std::uint32_t m = 1; m < n_intervals; ++m) {
    if (!(c.breakpoints[m] > c.breakpoints[m - 1])) {
      throw ConfigError("pwl: breakpoints are not strictly increasing for this epsilon and n_intervals");
    }
  }
  return c;
}

double pwl_eval(const PwlCurve& curve, double z) {
  const auto& bp = curve.breakpoints;
  if (z <= bp.front()) return curve.values.front();
  if (z >= bp.back()) return curve.values.back();
  const auto it = std::upper_bound(bp.begin(), bp.end(), z);
  const auto m = static_cast<std::size_t>(it - bp.begin()) - 1;
  const double t = (z - bp[m]) / (bp[m + 1] - bp[m]);
  return curve.values[m] + t * (curve.values[m + 1] - curve.values[m]);
}

double max_chord_error(const PwlCurve& curve) {
  double worst = 0.0;
  for (std::size_t m = 0; m + 1 < curve.breakpoints.size(); ++m) {
    const double a = curve.breakpoints[m];
    const double b = curve.breakpoints[m + 1];
    const double slope = (curve.values[m + 1] - curve.values[m]) / (b - a);
    const double z = 1.0 / slope;
    const double err = std::log(z) - (curve.values[m] + slope * (z - a));
    worst = std::max(worst, err);
  }
  return worst;
}

std::vector<std::pair<std::string, std::string>> default_solver_params() {
  return {
      {"TimeLimit", "72,000"},  {"NodefileStart", "0.5"}, {"SoftMemLimit", "54GB"},
      {"MIPGap", "0.001"},      {"SolutionLimit", "inf"}, {"Heuristics", "0.15"},
      {"MIPFocus", "1"},        {"Cuts", "0"},            {"Presolve", "0"},
      {"ScaleFlag", "1"},       {"Method", "1"},          {"FeasibilityTol", "1e-2"},
      {"IntFeasTol", "1e-3"},
  };
}

void MiqpModel::validate() const {
  const std::size_t nc = carrier_count();
  if (nc == 0) throw IntegrityError("model has no carriers");
  if (meta.alliance_count < 1) throw IntegrityError("model has K < 1");
  if (y_objective.size() != nc || z_rows.size() != nc || pwl.size() != nc) {
    throw IntegrityError("model arrays do not match the carrier count");
  }
  for (const auto& t : hhi_pairs) {
    if (t.i > t.j || t.j >= nc) throw IntegrityError("model HHI pair out of range");
  }
  for (const auto& row : z_rows) {
    for (const auto& t : row) {
      if (t.partner >= nc) throw IntegrityError("model z row partner out of range");
    }
  }
  for (const auto& c : pwl) {
    if (c.breakpoints.size() < 2 || c.breakpoints.size() != c.values.size()) {
      throw IntegrityError("model PWL curve is malformed");
    }
  }
}

MiqpModel build_miqp(const MultiAttributeGraph& g, const Realization& r, double beta, double gamma,
                     std::uint32_t alliance_count, double epsilon, std::uint32_t n_intervals) {
  const std::size_t nc = g.carrier_count();
  const std::size_t ns = g.segment_count();
  if (nc == 0) throw DataError("miqp: graph has no carriers");
  if (alliance_count < 1) throw ConfigError("miqp: K must be >= 1");
  if (alliance_count > nc) throw ConfigError("miqp: K exceeds the carrier count");
  if (beta < 0.0 || gamma < 0.0) throw ConfigError("miqp: beta and gamma must be non-negative");
  if (r.graph_hash != g.content_hash()) throw IntegrityError("miqp: realization was drawn on a different graph");
  if (r.segments.segment_count() != ns || r.segments.per_segment == 0) {
    throw IntegrityError("miqp: segment samples do not match the graph");
  }
  const std::size_t nr = r.walks.root_count();
  if (nr == 0) throw IntegrityError("miqp: walk tensors have no roots");

  MiqpModel m;
  m.meta.beta = beta;
  m.meta.gamma = gamma;
  m.meta.alliance_count = alliance_count;
  m.meta.epsilon = epsilon;
  m.meta.n_intervals = n_intervals;
  m.meta.seed = r.config.seed;
  m.meta.graph_hash = r.graph_hash;
  m.meta.n_walks = r.config.n_walks;
  m.meta.walk_length = r.config.walk_length;
  m.meta.n_segment_samples = r.segments.per_segment;
  m.meta.solver_params = default_solver_params();
  m.carrier_names = g.carrier_names();

  // HHI: sum over segments of (count_tau * count_sigma), exact in integers.
  std::vector<std::int64_t> co(nc * nc, 0);
  std::vector<std::uint32_t> counts(nc, 0);
  std::vector<CarrierIndex> touched;
  for (SegmentIndex s = 0; s < ns; ++s) {
    touched.clear();
    for (CarrierIndex c : r.segments.of(s)) {
      if (c >= nc) throw IntegrityError("miqp: segment sample carrier out of range");
      if (counts[c]++ == 0) touched.push_back(c);
    }
    for (auto a : touched)
      for (auto b : touched) co[a * nc + b] += static_cast<std::int64_t>(counts[a]) * counts[b];
    for (auto a : touched) counts[a] = 0;
  }
  const double n = r.segments.per_segment;
  const double scale = beta / (static_cast<double>(ns) * n * n);
  for (std::uint32_t a = 0; a < nc; ++a) {
    for (std::uint32_t b = a; b < nc; ++b) {
      const std::int64_t v = co[a * nc + b];
      if (v == 0) continue;
      const double mult = a == b ? 1.0 : 2.0;
      m.hhi_pairs.push_back(CoefficientPair{a, b, mult * scale * static_cast<double>(v)});
    }
  }

  m.y_objective.assign(nc, -gamma / static_cast<double>(nc));

  // z rows: a_{tau,sigma} = (1/R) sum_i p(tau|i) p(sigma|i).
  const auto p = carrier_root_probabilities(r.walks, nc);
  m.z_rows.resize(nc);
  for (std::size_t a = 0; a < nc; ++a) {
    for (std::size_t b = 0; b < nc; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < nr; ++i) dot += p[a * nr + i] * p[b * nr + i];
      if (dot != 0.0) m.z_rows[a].push_back(PartnerTerm{static_cast<CarrierIndex>(b), dot / static_cast<double>(nr)});
    }
  }

  const PwlCurve curve = pwl_breakpoints(epsilon, n_intervals);
  m.pwl.assign(nc, curve);
  m.z_lower = 0.0;
  m.z_upper = 1.0;
  m.y_lower = curve.values.front();
  m.y_upper = 0.0;
  return m;
}

ModelEvaluation evaluate_model(const MiqpModel& m, std::span<const std::uint32_t> assignment) {
  const std::size_t nc = m.carrier_count();
  if (assignment.size() != nc) throw IntegrityError("assignment does not cover the model's carriers");
  for (auto k : assignment) {
    if (k >= m.meta.alliance_count) throw IntegrityError("assignment label exceeds K");
  }
  ModelEvaluation e;
  for (const auto& t : m.hhi_pairs) {
    if (assignment[t.i] == assignment[t.j]) e.hhi_term += t.coef;
  }
  e.z.assign(nc, 0.0);
  e.y.assign(nc, 0.0);
  for (std::size_t c = 0; c < nc; ++c) {
    double z = 0.0;
    for (const auto& t : m.z_rows[c]) {
      if (assignment[t.partner] == assignment[c]) z += t.coef;
    }
    e.z[c] = z;
    e.y[c] = pwl_eval(m.pwl[c], z);
    e.mpc_term += m.y_objective[c] * e.y[c];
  }
  e.objective = e.hhi_term + e.mpc_term;
  return e;
}

double model_objective(const MiqpModel& m, std::span<const std::uint32_t> assignment) {
  return evaluate_model(m, assignment).objective;
}

TinySolution solve_tiny(const MiqpModel& m, std::uint32_t max_carriers, std::uint32_t max_alliances) {
  m.validate();
  const std::size_t nc = m.carrier_count();
  if (nc > max_carriers) {
    throw SizeCapError("solve_tiny: " + std::to_string(nc) + " carriers exceeds the cap of " +
                       std::to_string(max_carriers));
  }
  if (m.meta.alliance_count > max_alliances) {
    throw SizeCapError("solve_tiny: K = " + std::to_string(m.meta.alliance_count) + " exceeds the cap of " +
                       std::to_string(max_alliances));
  }
  const auto strings = set_partitions(static_cast<unsigned>(nc), m.meta.alliance_count);
  TinySolution best;
  best.objective = std::numeric_limits<double>::infinity();
  std::vector<std::uint32_t> a(nc);
  for (const auto& s : strings) {
    std::copy(s.begin(), s.end(), a.begin());
    const double f = model_objective(m, a);
    ++best.evaluated;
    if (f < best.objective) {
      best.objective = f;
      best.assignment = a;
    }
  }
  best.partition = AlliancePartition(best.assignment, m.meta.alliance_count).canonical();
  return best;
}

}  // namespace alliance
