#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wmc/core.h"

namespace wmc {

enum class VarKind { Continuous, Binary, Integer };

struct LpVar {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lo = 0.0;
  double hi = 0.0;
};

struct LpTerm {
  double coef = 0.0;
  std::string var;

  bool operator==(const LpTerm&) const = default;
};

enum class Sense { Le, Ge, Eq };

struct LpRow {
  std::string name;
  std::vector<LpTerm> terms;
  Sense sense = Sense::Le;
  double rhs = 0.0;
};

struct LpModel {
  std::vector<std::string> comments;
  std::vector<LpTerm> objective;
  std::vector<LpRow> rows;
  std::vector<LpVar> vars;
  int k_max = 0;
  int b_max = 0;
  double big_m = 0.0;

  const LpVar* find(const std::string& name) const;
};

inline constexpr int kMaxLpCustomers = 12;

struct LpOptions {
  int k_max = 0;      // 0: ceil(Σd/Q) + 3
  int b_max = -1;     // negative: k_max
  double big_m = 0.0; // 0: 2·Σ τ_ij; raised if smaller than the safe bound
};

// Linearized routing model over nodes 0..n plus the end depot n+1.
// Throws InputError for n > 12 or fleet bounds below ceil(Σd/Q).
LpModel build_lp_model(const Instance& instance, const LpOptions& options = {});

std::string to_lp_text(const LpModel& model);
std::string export_lp(const Instance& instance, const LpOptions& options = {});

// Reads the dialect written above (CPLEX LP subset). Throws InputError.
LpModel parse_lp(std::istream& in);
LpModel parse_lp(const std::string& text);

using LpPoint = std::map<std::string, double>;

// Variable values that encode a solution; variables not listed are zero.
LpPoint lp_point_from_solution(const LpModel& model, const Solution& solution,
                               const Instance& instance);

double lp_objective(const LpModel& model, const LpPoint& point);

// Names of violated rows, bounds and integrality requirements.
std::vector<std::string> check_point(const LpModel& model, const LpPoint& point,
                                     double tol = 1e-6);

} // namespace wmc
