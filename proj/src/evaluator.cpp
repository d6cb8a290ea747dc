#include "wmc/evaluator.h"

#include <algorithm>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "wmc/bdp.h"
#include "wmc/mct_assign.h"

namespace wmc {

namespace {

struct SequenceHash {
  std::size_t operator()(const std::vector<NodeId>& seq) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (NodeId v : seq) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// Charged route sequences, flattened with -1 separators.
using FleetKey = std::vector<NodeId>;

struct FleetResult {
  int mcts = 0;
  bool exact = true;
};

template <class Key, class Value>
class ConcurrentMemo {
public:
  template <class Compute>
  const Value& get(const Key& key, Compute&& compute) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = table_.find(key); it != table_.end()) {
        return it->second;
      }
    }
    Value value = compute();
    std::unique_lock lock(mutex_);
    return table_.try_emplace(key, std::move(value)).first->second;
  }

private:
  std::shared_mutex mutex_;
  std::unordered_map<Key, Value, SequenceHash> table_;
};

} // namespace

class CostCache {
public:
  ConcurrentMemo<std::vector<NodeId>, RoutePlans> plans;
  ConcurrentMemo<FleetKey, FleetResult> fleets;
};

std::shared_ptr<CostCache> make_cost_cache() { return std::make_shared<CostCache>(); }

RoutePlans compute_route_plans(const Route& route, const Instance& instance,
                               std::size_t plan_cap) {
  RoutePlans out;
  if (route.edge_count() > kMaxBdpEdges) {
    return out;
  }
  const auto input = make_bdp_input(route, instance);
  struct Scored {
    ChargePlan plan;
    double energy;
  };
  std::vector<Scored> scored;
  for (const auto plan : bdp_charge_plans(input)) {
    double energy = 0.0;
    bool servable = true;
    for (std::size_t e = 1; e <= route.edge_count() && servable; ++e) {
      if (plan.charges(e)) {
        const auto job = make_job(0, route, e, instance);
        servable = serves_alone(job, instance);
        energy += job.energy;
      }
    }
    if (servable) {
      scored.push_back({plan, energy});
    }
  }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    const int ca = a.plan.count();
    const int cb = b.plan.count();
    if (ca != cb) {
      return ca < cb;
    }
    if (a.energy != b.energy) {
      return a.energy < b.energy;
    }
    return a.plan.mask < b.plan.mask;
  });
  if (scored.size() > plan_cap) {
    scored.resize(plan_cap);
  }
  for (const auto& s : scored) {
    out.plans.push_back(s.plan);
  }
  return out;
}

Evaluator::Evaluator(const Instance& instance, CostingOptions options,
                     std::shared_ptr<CostCache> cache)
    : instance_(&instance), options_(options),
      cache_(cache ? std::move(cache) : make_cost_cache()) {}

const RoutePlans& Evaluator::plans(const Route& route) {
  return cache_->plans.get(route.visits, [&] {
    return compute_route_plans(route, *instance_, options_.plan_cap);
  });
}

namespace {

// Charged routes in a canonical order so that equal fleets share work and
// results regardless of route order.
std::vector<std::size_t> charged_order(const std::vector<Route>& routes,
                                       const std::vector<const RoutePlans*>& plans) {
  std::vector<std::size_t> idx;
  for (std::size_t r = 0; r < routes.size(); ++r) {
    if (plans[r]->needs_charge()) {
      idx.push_back(r);
    }
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return routes[a].visits < routes[b].visits;
  });
  return idx;
}

} // namespace

Evaluation Evaluator::evaluate(const std::vector<Route>& routes) {
  Evaluation ev;
  Distance total = 0;
  std::vector<const RoutePlans*> route_plans;
  route_plans.reserve(routes.size());
  for (const auto& r : routes) {
    total += route_length(r, *instance_);
    route_plans.push_back(&plans(r));
    if (!route_plans.back()->feasible()) {
      ++ev.infeasible_routes;
    }
  }

  const auto order = charged_order(routes, route_plans);
  int mcts = 0;
  if (!order.empty()) {
    FleetKey key;
    for (std::size_t r : order) {
      key.insert(key.end(), routes[r].visits.begin(), routes[r].visits.end());
      key.push_back(-1);
    }
    const auto& fleet = cache_->fleets.get(key, [&] {
      std::vector<Route> sub;
      std::vector<std::vector<ChargePlan>> sets;
      for (std::size_t r : order) {
        sub.push_back(routes[r]);
        sets.push_back(route_plans[r]->plans);
      }
      const auto a = assign_min_mct(sub, sets, *instance_, {options_.search_budget});
      return FleetResult{static_cast<int>(a.tours.size()), a.exact};
    });
    mcts = fleet.mcts;
    ev.exact = fleet.exact;
  }
  ev.cost = make_cost(total, routes.size(), static_cast<std::size_t>(mcts), instance_->params);
  ev.penalty = options_.penalty * ev.infeasible_routes;
  return ev;
}

Solution Evaluator::materialize(const std::vector<Route>& routes, bool* exact) {
  if (exact) {
    *exact = true;
  }
  Solution sol;
  sol.routes = routes;
  sol.plans.assign(routes.size(), ChargePlan{});
  std::vector<const RoutePlans*> route_plans;
  for (std::size_t r = 0; r < routes.size(); ++r) {
    route_plans.push_back(&plans(routes[r]));
    if (!route_plans.back()->feasible()) {
      throw Infeasible("route " + std::to_string(r + 1) + " cannot be completed with charging");
    }
  }
  const auto order = charged_order(routes, route_plans);
  if (!order.empty()) {
    std::vector<Route> sub;
    std::vector<std::vector<ChargePlan>> sets;
    for (std::size_t r : order) {
      sub.push_back(routes[r]);
      sets.push_back(route_plans[r]->plans);
    }
    auto a = assign_min_mct(sub, sets, *instance_, {options_.dfs_budget});
    if (exact) {
      *exact = a.exact;
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
      sol.plans[order[i]] = a.plans[i];
    }
    for (auto& tour : a.tours) {
      for (auto& job : tour.jobs) {
        job.route = static_cast<int>(order[static_cast<std::size_t>(job.route)]);
      }
      sol.tours.push_back(std::move(tour));
    }
  }
  sol.cost = eval_cost(sol, *instance_);
  return sol;
}

} // namespace wmc
