#pragma once

#include <span>
#include <vector>

#include "wmc/bdp.h"
#include "wmc/core.h"

namespace wmc {

// Brute-force references for tests and acceptance runs.

inline constexpr std::size_t kMaxNaiveEdges = 20;
inline constexpr int kMaxExhaustiveCustomers = 7;
inline constexpr std::size_t kMaxExhaustiveJobs = 16;

// Every mask simulated, then reduced to the inclusion-minimal feasible ones.
std::vector<ChargePlan> naive_charge_plans(const BdpInput& input);

// Fewest tours covering `jobs`, trying every job order for subsets of up to
// seven jobs. Returns -1 if some job cannot be served at all.
int exhaustive_min_tours(std::span<const ChargeJob> jobs, const Instance& instance);

// Minimum number of MCTs over every combination of minimal plans.
// Returns -1 if no combination can be served.
int exhaustive_min_mct(const std::vector<Route>& routes, const Instance& instance);

// Optimum over all sets of routes (ties to the lexicographically smallest
// sorted route set), with a witness plan and tour assignment.
Solution exhaustive_solve(const Instance& instance);

// (best / reference - 1) * 100.
double gap(double best, double reference);

} // namespace wmc
