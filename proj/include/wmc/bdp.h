#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "wmc/core.h"

namespace wmc {

// Largest route (in edges) the bitmask DP accepts; state arrays hold 2^m entries.
inline constexpr std::size_t kMaxBdpEdges = 24;

struct BdpInput {
  std::vector<Distance> taus; // edge lengths, edge e is taus[e-1]
  double capacity = 0.0;      // P
  double gamma = 0.0;

  // Throws std::invalid_argument unless 1 <= m <= kMaxBdpEdges and taus >= 0.
  void check(std::size_t max_edges = kMaxBdpEdges) const;
};

BdpInput make_bdp_input(const Route& route, const Instance& instance);

// Battery after an uncharged / charged edge of length tau.
inline double drive_level(double level, Distance tau) {
  return level - static_cast<double>(tau);
}
inline double charge_level(double level, Distance tau, double gamma, double capacity) {
  return std::min(level + (gamma - 1.0) * static_cast<double>(tau), capacity);
}

// r(e) = Σ_{i>e} τ(i): battery still needed after edge e.
std::vector<Distance> required_remaining(std::span<const Distance> taus);

struct PlanSimulation {
  bool feasible = false;
  std::vector<double> trace; // level after each edge
};

PlanSimulation simulate_plan(const BdpInput& input, ChargePlan plan);
// simulate_plan(...).feasible without building the trace.
bool plan_feasible(const BdpInput& input, ChargePlan plan);

struct BdpResult {
  std::vector<ChargePlan> plans;   // inclusion-minimal, ascending by mask
  std::vector<ChargePlan> recorded; // states marked feasible, in record order
  std::uint64_t expanded = 0;      // states whose transitions were evaluated
};

// In-place bitmask DP over charging decisions, one battery value per mask.
BdpResult run_bdp(const BdpInput& input);

// All inclusion-minimal feasible charge plans; empty when the route cannot be
// completed even charging every edge.
std::vector<ChargePlan> bdp_charge_plans(const BdpInput& input);

// Same contract, explicit (edge, mask) table without in-place updates.
// Limited to 18 edges.
std::vector<ChargePlan> bdp_reference_2d(const BdpInput& input);

// Keeps the inclusion-minimal masks, ascending by mask value.
std::vector<ChargePlan> prune_supersets(std::vector<ChargePlan> masks);

} // namespace wmc
