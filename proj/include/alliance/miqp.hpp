#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "alliance/graph.hpp"
#include "alliance/partition.hpp"
#include "alliance/sampling.hpp"

namespace alliance {

struct PwlCurve {
  std::vector<double> breakpoints;  // I_1 = eps < ... < I_n = 1
  std::vector<double> values;       // V_m = log I_m
  bool operator==(const PwlCurve&) const = default;
};

/// I_m = eps + (m-1)/(n-1) * (1-eps), m = 1..n; the last breakpoint is set to
/// exactly 1. Throws ConfigError unless 0 < eps < 1 and n >= 2.
PwlCurve pwl_breakpoints(double epsilon, std::uint32_t n_intervals);

/// Linear interpolation; z below I_1 evaluates to V_1, z above I_n to V_n.
/// Returns V_m exactly at z = I_m.
double pwl_eval(const PwlCurve& curve, double z);

/// Largest log(z) - pwl(z) over [I_1, I_n], from the per-interval tangency
/// point z* = (b - a) / (log b - log a).
double max_chord_error(const PwlCurve& curve);

struct CoefficientPair {
  std::uint32_t i;
  std::uint32_t j;
  double coef;
  bool operator==(const CoefficientPair&) const = default;
};

struct PartnerTerm {
  CarrierIndex partner;
  double coef;
  bool operator==(const PartnerTerm&) const = default;
};

struct MiqpMetadata {
  double beta = 0.0;
  double gamma = 0.0;
  std::uint32_t alliance_count = 0;  // K
  double epsilon = 0.0;
  std::uint32_t n_intervals = 0;
  std::uint64_t seed = 0;
  std::uint64_t graph_hash = 0;
  std::uint32_t n_walks = 0;
  std::uint32_t walk_length = 0;
  std::uint32_t n_segment_samples = 0;
  // External solver settings, carried verbatim and never interpreted.
  std::vector<std::pair<std::string, std::string>> solver_params;
  bool operator==(const MiqpMetadata&) const = default;
};

/// Solver-agnostic minimisation model over binaries x[tau,k] (index tau*K+k),
/// continuous z[tau], y[tau]:
///
///   min  sum_k sum_{(tau,sigma) in hhi_pairs} q * x[tau,k] x[sigma,k] + sum_tau c_tau y[tau]
///   s.t. sum_k x[tau,k] = 1                                     (assignment rows)
///        z[tau] = sum_k sum_{sigma} a_{tau,sigma} x[tau,k] x[sigma,k]  (z rows)
///        y[tau] = pwl_tau(max(z[tau], I_1))
///
/// hhi_pairs lists tau <= sigma once and is replicated over every alliance k.
struct MiqpModel {
  MiqpMetadata meta;
  std::vector<std::string> carrier_names;
  std::vector<CoefficientPair> hhi_pairs;
  std::vector<double> y_objective;                 // -gamma / |T| per carrier
  std::vector<std::vector<PartnerTerm>> z_rows;    // sorted by partner
  std::vector<PwlCurve> pwl;                       // one per carrier
  double z_lower = 0.0;
  double z_upper = 1.0;
  double y_lower = 0.0;  // log eps
  double y_upper = 0.0;

  std::size_t carrier_count() const { return carrier_names.size(); }
  std::uint32_t alliance_count() const { return meta.alliance_count; }
  std::size_t binary_count() const { return carrier_count() * meta.alliance_count; }
  std::size_t assignment_row_count() const { return carrier_count(); }
  std::size_t pwl_curve_count() const { return pwl.size(); }
  std::size_t x_index(std::size_t carrier, std::size_t alliance) const { return carrier * meta.alliance_count + alliance; }

  /// Throws IntegrityError when shapes or ranges are inconsistent.
  void validate() const;
  bool operator==(const MiqpModel&) const = default;
};

/// Solver settings recorded in every model's metadata.
std::vector<std::pair<std::string, std::string>> default_solver_params();

MiqpModel build_miqp(const MultiAttributeGraph& g, const Realization& r, double beta, double gamma,
                     std::uint32_t alliance_count, double epsilon, std::uint32_t n_intervals);

struct ModelEvaluation {
  double hhi_term = 0.0;     // quadratic part
  double mpc_term = 0.0;     // sum_tau c_tau y_tau
  double objective = 0.0;    // minimisation value
  std::vector<double> z;
  std::vector<double> y;
};

/// Evaluates the model at a feasible assignment (alliance label per carrier,
/// labels < K).
ModelEvaluation evaluate_model(const MiqpModel& m, std::span<const std::uint32_t> assignment);
double model_objective(const MiqpModel& m, std::span<const std::uint32_t> assignment);

struct TinySolution {
  AlliancePartition partition;  // canonical labels
  std::vector<std::uint32_t> assignment;
  double objective = 0.0;  // minimisation value
  std::uint64_t evaluated = 0;
};

/// Exhaustive search over assignments modulo alliance relabelling
/// (restricted-growth strings with at most K blocks). Ties keep the first
/// string in lexicographic order. Throws SizeCapError above the caps.
TinySolution solve_tiny(const MiqpModel& m, std::uint32_t max_carriers = 8, std::uint32_t max_alliances = 4);

}  // namespace alliance
