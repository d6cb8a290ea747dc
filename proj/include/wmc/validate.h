#pragma once

#include <string>
#include <vector>

#include "wmc/core.h"

namespace wmc {

struct Violation {
  std::string constraint; // e.g. "capacity", "mtev-battery", "sync"
  std::string message;
};

using ValidationReport = std::vector<Violation>;

// Checks a solution against every model constraint: capacity, MTEV time and
// battery recursions, MCT time/battery recursions and synchronization,
// visit-once and depot-to-depot structure of both fleets, and the stated
// cost breakdown. An empty report means the solution is feasible.
ValidationReport validate_solution(const Solution& solution, const Instance& instance);

std::string to_string(const Violation& v);

} // namespace wmc
