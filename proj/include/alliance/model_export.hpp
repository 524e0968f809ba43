#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alliance/miqp.hpp"

namespace alliance {

enum class ModelFormat { kJson, kLp };

inline constexpr int kModelFormatVersion = 1;

/// "json" or "lp". Throws ConfigError otherwise.
ModelFormat parse_model_format(std::string_view id);

std::string export_model(const MiqpModel& m, ModelFormat format);
std::string export_model_json(const MiqpModel& m);
std::string export_model_lp(const MiqpModel& m);

MiqpModel model_from_json(std::string_view text);

// Generic LP-style problem as read by parse_lp. Quadratic objective
// coefficients are stored after applying the "/ 2" of the bracket.
struct LpTerm {
  std::string var;
  double coef = 0.0;
};

struct LpQuadTerm {
  std::string a;
  std::string b;  // equal to a for squares
  double coef = 0.0;
};

struct LpRow {
  std::string name;
  std::vector<LpTerm> linear;
  std::vector<LpQuadTerm> quadratic;
  std::string sense;  // "=", "<=", ">="
  double rhs = 0.0;
};

struct LpBound {
  double lower = 0.0;
  double upper = 0.0;
};

struct LpProblem {
  std::vector<std::pair<std::string, std::string>> header;  // "\ key value" comment lines, in order
  std::vector<LpTerm> objective_linear;
  std::vector<LpQuadTerm> objective_quadratic;
  std::vector<LpRow> rows;
  std::map<std::string, LpBound> bounds;
  std::vector<std::string> binaries;

  /// Throws DataError when no row has this name.
  const LpRow& row(std::string_view name) const;
};

/// Parses the LP dialect written by export_model_lp. Throws DataError on
/// malformed input.
LpProblem parse_lp(std::string_view text);
MiqpModel model_from_lp(std::string_view text);

/// Structural equality with coefficients compared to a relative tolerance.
bool models_equal(const MiqpModel& a, const MiqpModel& b, double tol);

}  // namespace alliance
