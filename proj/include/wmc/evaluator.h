#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "wmc/core.h"

namespace wmc {

struct CostingOptions {
  std::size_t plan_cap = 32;            // plans kept per route
  std::uint64_t dfs_budget = 1'000'000; // MCT assignment nodes when materializing
  std::uint64_t search_budget = 200;    // same, for candidate costing inside searches
  double penalty = 1e6;                 // per charging-infeasible route
};

// Candidate charge plans of one route: inclusion-minimal, servable by a
// dedicated MCT, ordered by (edges charged, energy) and capped.
struct RoutePlans {
  std::vector<ChargePlan> plans;

  bool feasible() const { return !plans.empty(); }
  bool needs_charge() const { return feasible() && plans.front().mask != 0; }
};

RoutePlans compute_route_plans(const Route& route, const Instance& instance,
                               std::size_t plan_cap);

struct Evaluation {
  CostBreakdown cost;
  int infeasible_routes = 0;
  double penalty = 0.0;
  bool exact = true; // MCT count proven minimal within search_budget

  double objective() const { return cost.total + penalty; }
};

// Thread-safe memo tables shared by searches on the same instance.
class CostCache;
std::shared_ptr<CostCache> make_cost_cache();

// Costs route sets: per-route plans via the bitmask DP (memoized by visit
// sequence), the fleet of MCTs via assign_min_mct (memoized by the set of
// routes that need charging).
class Evaluator {
public:
  Evaluator(const Instance& instance, CostingOptions options = {},
            std::shared_ptr<CostCache> cache = nullptr);

  const Instance& instance() const { return *instance_; }
  const CostingOptions& options() const { return options_; }

  const RoutePlans& plans(const Route& route);
  Evaluation evaluate(const std::vector<Route>& routes);
  double objective(const std::vector<Route>& routes) { return evaluate(routes).objective(); }

  // Full solution with chosen plans and MCT tours, using dfs_budget. Throws
  // Infeasible if a route has no usable plan. `exact` reports whether the
  // MCT count was proven minimal.
  Solution materialize(const std::vector<Route>& routes, bool* exact = nullptr);

private:
  const Instance* instance_;
  CostingOptions options_;
  std::shared_ptr<CostCache> cache_;
};

} // namespace wmc
