#pragma once

#include <iosfwd>
#include <string>

#include "wmc/core.h"

namespace wmc {

// Line-oriented instance format:
//
//   NAME <string>
//   SIZE <n>
//   CAPACITY <Q>
//   BATTERY_MTEV <P>
//   BATTERY_MCT <beta>
//   GAMMA <gamma>
//   PHI <phi>
//   COST_DIST <kappa_t>
//   COST_MTEV <kappa_v>
//   COST_MCT <kappa_c>
//   NODES
//   <id> <x> <y> <demand>      (n+1 lines, depot first)
//   [MATRIX
//   <lower-diagonal-row integers, (n+1)(n+2)/2 values>]
//   EOF
//
// '#' starts a comment. Without MATRIX, distances come from coordinates.
Instance parse_instance(std::istream& in);
Instance read_instance(const std::string& path);
void write_instance(std::ostream& out, const Instance& instance, bool with_matrix = false);

// Solution format, routes and tours numbered from 1:
//
//   ROUTE k: 0 v1 ... 0 | MASK <hex>
//   MCT b: (route,edge) (route,edge) ...
//   COST dist=<d> mtev=<v> mct=<c> total=<t>
//
// Parsing rebuilds charge jobs from the routes; tour traces are left empty.
Solution parse_solution(std::istream& in, const Instance& instance);
Solution read_solution(const std::string& path, const Instance& instance);
void write_solution(std::ostream& out, const Solution& solution);

// Shortest round-trip decimal text for a double.
std::string format_number(double value);

} // namespace wmc
