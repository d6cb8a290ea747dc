#include "wmc/lns.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "wmc/bdp.h"
#include "wmc/local_search.h"

namespace wmc {

std::string to_string(RemovalOp op) {
  switch (op) {
  case RemovalOp::Random:
    return "RR";
  case RemovalOp::Distance:
    return "DR";
  case RemovalOp::String:
    return "SR";
  case RemovalOp::Worst:
    return "WR";
  case RemovalOp::Shaw:
    return "ShR";
  }
  return "?";
}

std::string to_string(InsertionOp op) {
  switch (op) {
  case InsertionOp::Random:
    return "RI";
  case InsertionOp::Greedy:
    return "GI";
  case InsertionOp::Sequential:
    return "SI";
  case InsertionOp::Regret2:
    return "R2I";
  case InsertionOp::Regret3:
    return "R3I";
  }
  return "?";
}

namespace {

constexpr double kObjEps = 1e-7;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Routes longer than this cannot be planned by the DP.
constexpr std::size_t kMaxVisits = kMaxBdpEdges - 1;

Distance detour(const Instance& inst, NodeId a, NodeId v, NodeId b) {
  return inst.tau(a, v) + inst.tau(v, b) - inst.tau(a, b);
}

// Distance saved by dropping the customer at visit index i.
Distance removal_saving(const Instance& inst, const Route& r, std::size_t i) {
  return detour(inst, r.stop(i), r.visits[i], r.stop(i + 2));
}

void drop_empty(std::vector<Route>& routes) {
  std::erase_if(routes, [](const Route& r) { return r.visits.empty(); });
}

void remove_customer(std::vector<Route>& routes, NodeId v) {
  for (auto& r : routes) {
    std::erase(r.visits, v);
  }
}

struct Slot {
  double cost = kInf;
  std::size_t route = 0; // routes.size() means a new route
  std::size_t pos = 0;
};

bool fits(const Route& r, int load, NodeId v, const Instance& inst) {
  return load + inst.demand(v) <= inst.params.capacity && r.visits.size() < kMaxVisits;
}

// Cheapest position of v in route r by added distance, earliest on ties.
Slot best_in_route(const Route& r, std::size_t index, NodeId v, const Instance& inst) {
  Slot best;
  best.route = index;
  for (std::size_t p = 0; p <= r.visits.size(); ++p) {
    const double c =
        inst.params.cost_dist * static_cast<double>(detour(inst, r.stop(p), v, r.stop(p + 1)));
    if (c < best.cost) {
      best.cost = c;
      best.pos = p;
    }
  }
  return best;
}

double new_route_cost(NodeId v, const Instance& inst) {
  return inst.params.cost_dist * static_cast<double>(2 * inst.tau(kDepot, v)) +
         inst.params.cost_mtev;
}

// One option per route with room plus the fresh-route option, sorted by cost.
std::vector<Slot> options_for(const std::vector<Route>& routes, const std::vector<int>& loads,
                              NodeId v, const Instance& inst) {
  std::vector<Slot> out;
  for (std::size_t r = 0; r < routes.size(); ++r) {
    if (fits(routes[r], loads[r], v, inst)) {
      out.push_back(best_in_route(routes[r], r, v, inst));
    }
  }
  out.push_back(Slot{new_route_cost(v, inst), routes.size(), 0});
  std::stable_sort(out.begin(), out.end(),
                   [](const Slot& a, const Slot& b) { return a.cost < b.cost; });
  return out;
}

void apply(std::vector<Route>& routes, std::vector<int>& loads, const Slot& s, NodeId v,
           const Instance& inst) {
  if (s.route == routes.size()) {
    routes.push_back(Route{{v}});
    loads.push_back(inst.demand(v));
    return;
  }
  auto& visits = routes[s.route].visits;
  visits.insert(visits.begin() + static_cast<std::ptrdiff_t>(s.pos), v);
  loads[s.route] += inst.demand(v);
}

std::vector<int> loads_of(const std::vector<Route>& routes, const Instance& inst) {
  std::vector<int> loads;
  for (const auto& r : routes) {
    loads.push_back(route_load(r, inst));
  }
  return loads;
}

double regret_of(const std::vector<Slot>& opts, int k) {
  if (opts.size() < static_cast<std::size_t>(k)) {
    // Fewer options than k: insert before it runs out of room.
    return kInf;
  }
  double regret = 0.0;
  for (int h = 1; h < k; ++h) {
    regret += opts[static_cast<std::size_t>(h)].cost - opts.front().cost;
  }
  return regret;
}

std::vector<NodeId> all_customers(const std::vector<Route>& routes) {
  std::vector<NodeId> out;
  for (const auto& r : routes) {
    out.insert(out.end(), r.visits.begin(), r.visits.end());
  }
  return out;
}

} // namespace

std::vector<Route> initial_routes(Evaluator& eval) {
  const auto& inst = eval.instance();
  const int n = inst.customer_count();
  std::vector<bool> done(static_cast<std::size_t>(n) + 1, false);
  int left = n;
  std::vector<Route> routes;
  while (left > 0) {
    Route route;
    int load = 0;
    NodeId at = kDepot;
    while (true) {
      std::vector<NodeId> cand;
      for (NodeId v = 1; v <= n; ++v) {
        if (!done[static_cast<std::size_t>(v)] && fits(route, load, v, inst)) {
          cand.push_back(v);
        }
      }
      std::stable_sort(cand.begin(), cand.end(),
                       [&](NodeId a, NodeId b) { return inst.tau(at, a) < inst.tau(at, b); });
      bool extended = false;
      for (NodeId v : cand) {
        Route trial = route;
        trial.visits.push_back(v);
        if (eval.plans(trial).feasible()) {
          route = std::move(trial);
          load += inst.demand(v);
          at = v;
          done[static_cast<std::size_t>(v)] = true;
          --left;
          extended = true;
          break;
        }
      }
      if (!extended) {
        break;
      }
    }
    if (route.visits.empty()) {
      for (NodeId v = 1; v <= n; ++v) {
        if (!done[static_cast<std::size_t>(v)]) {
          throw Infeasible("customer " + std::to_string(v) + " cannot be served on its own route");
        }
      }
    }
    routes.push_back(std::move(route));
  }
  return routes;
}

Solution initial_solution(const Instance& instance, const CostingOptions& costing) {
  Evaluator eval(instance, costing);
  return eval.materialize(initial_routes(eval));
}

int draw_removal_count(int customers, double lo, double hi, Rng& rng) {
  if (customers <= 0) {
    return 0;
  }
  const int a = std::max(1, static_cast<int>(std::floor(lo * customers)));
  const int b = std::max(2, static_cast<int>(std::floor(hi * customers)));
  const int q = std::uniform_int_distribution<int>(a, std::max(a, b))(rng);
  return std::min(q, customers);
}

Partial destroy(const std::vector<Route>& routes, RemovalOp op, int q, Rng& rng,
                Evaluator& eval) {
  const auto& inst = eval.instance();
  Partial out{routes, {}};
  auto customers = all_customers(routes);
  q = std::clamp(q, 0, static_cast<int>(customers.size()));
  auto take = [&](NodeId v) {
    remove_customer(out.routes, v);
    out.removed.push_back(v);
  };

  switch (op) {
  case RemovalOp::Random: {
    std::sort(customers.begin(), customers.end());
    std::shuffle(customers.begin(), customers.end(), rng);
    for (int i = 0; i < q; ++i) {
      take(customers[static_cast<std::size_t>(i)]);
    }
    break;
  }
  case RemovalOp::Distance: {
    for (int i = 0; i < q; ++i) {
      NodeId pick = -1;
      Distance best = std::numeric_limits<Distance>::min();
      for (const auto& r : out.routes) {
        for (std::size_t k = 0; k < r.visits.size(); ++k) {
          const Distance s = removal_saving(inst, r, k);
          if (s > best || (s == best && r.visits[k] < pick)) {
            best = s;
            pick = r.visits[k];
          }
        }
      }
      take(pick);
    }
    break;
  }
  case RemovalOp::String: {
    while (static_cast<int>(out.removed.size()) < q) {
      std::vector<std::size_t> nonempty;
      for (std::size_t r = 0; r < out.routes.size(); ++r) {
        if (!out.routes[r].visits.empty()) {
          nonempty.push_back(r);
        }
      }
      const auto r = nonempty[std::uniform_int_distribution<std::size_t>(
          0, nonempty.size() - 1)(rng)];
      auto& visits = out.routes[r].visits;
      const std::size_t want = static_cast<std::size_t>(q) - out.removed.size();
      const std::size_t len = std::uniform_int_distribution<std::size_t>(
          1, std::min(want, visits.size()))(rng);
      const std::size_t start =
          std::uniform_int_distribution<std::size_t>(0, visits.size() - len)(rng);
      const std::vector<NodeId> seg(visits.begin() + static_cast<std::ptrdiff_t>(start),
                                    visits.begin() + static_cast<std::ptrdiff_t>(start + len));
      for (NodeId v : seg) {
        take(v);
      }
    }
    break;
  }
  case RemovalOp::Worst: {
    for (int i = 0; i < q; ++i) {
      auto remaining = all_customers(out.routes);
      std::sort(remaining.begin(), remaining.end());
      NodeId pick = -1;
      double best = kInf;
      for (NodeId v : remaining) {
        auto trial = out.routes;
        remove_customer(trial, v);
        drop_empty(trial);
        const double obj = eval.objective(trial);
        if (obj < best) {
          best = obj;
          pick = v;
        }
      }
      take(pick);
    }
    break;
  }
  case RemovalOp::Shaw: {
    if (q == 0) {
      break;
    }
    std::sort(customers.begin(), customers.end());
    const NodeId seed =
        customers[std::uniform_int_distribution<std::size_t>(0, customers.size() - 1)(rng)];
    Distance max_d = 1;
    int dmin = std::numeric_limits<int>::max();
    int dmax = std::numeric_limits<int>::min();
    for (NodeId v : customers) {
      max_d = std::max(max_d, inst.tau(seed, v));
      dmin = std::min(dmin, inst.demand(v));
      dmax = std::max(dmax, inst.demand(v));
    }
    const double span = std::max(1, dmax - dmin);
    auto related = [&](NodeId v) {
      return 0.75 * static_cast<double>(inst.tau(seed, v)) / static_cast<double>(max_d) +
             0.25 * std::abs(inst.demand(seed) - inst.demand(v)) / span;
    };
    std::vector<NodeId> order;
    for (NodeId v : customers) {
      if (v != seed) {
        order.push_back(v);
      }
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return related(a) < related(b); });
    take(seed);
    for (int i = 0; i + 1 < q; ++i) {
      take(order[static_cast<std::size_t>(i)]);
    }
    break;
  }
  }
  drop_empty(out.routes);
  return out;
}

double insertion_regret(const std::vector<Route>& routes, NodeId customer, int k,
                        const Instance& instance) {
  return regret_of(options_for(routes, loads_of(routes, instance), customer, instance), k);
}

std::vector<Route> repair(Partial partial, InsertionOp op, Rng& rng, Evaluator& eval) {
  const auto& inst = eval.instance();
  auto& routes = partial.routes;
  auto loads = loads_of(routes, inst);
  auto pending = partial.removed;

  switch (op) {
  case InsertionOp::Random: {
    for (NodeId v : pending) {
      std::vector<std::size_t> room;
      for (std::size_t r = 0; r < routes.size(); ++r) {
        if (fits(routes[r], loads[r], v, inst)) {
          room.push_back(r);
        }
      }
      Slot s{0.0, routes.size(), 0};
      if (!room.empty()) {
        const auto r = room[std::uniform_int_distribution<std::size_t>(0, room.size() - 1)(rng)];
        s = best_in_route(routes[r], r, v, inst);
      }
      apply(routes, loads, s, v, inst);
    }
    break;
  }
  case InsertionOp::Sequential: {
    for (NodeId v : pending) {
      apply(routes, loads, options_for(routes, loads, v, inst).front(), v, inst);
    }
    break;
  }
  case InsertionOp::Greedy:
  case InsertionOp::Regret2:
  case InsertionOp::Regret3: {
    const int k = op == InsertionOp::Regret2 ? 2 : 3;
    std::sort(pending.begin(), pending.end());
    while (!pending.empty()) {
      std::size_t pick = 0;
      Slot pick_slot;
      double pick_key = kInf;
      for (std::size_t i = 0; i < pending.size(); ++i) {
        const auto opts = options_for(routes, loads, pending[i], inst);
        // Greedy minimizes cost; regret maximizes regret (negated here).
        const double key = op == InsertionOp::Greedy ? opts.front().cost : -regret_of(opts, k);
        if (i == 0 || key < pick_key) {
          pick_key = key;
          pick = i;
          pick_slot = opts.front();
        }
      }
      apply(routes, loads, pick_slot, pending[pick], inst);
      pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    break;
  }
  }
  return routes;
}

std::vector<Route> charge_removal_insertion(const std::vector<Route>& routes, Rng& rng,
                                            Evaluator& eval) {
  const auto& inst = eval.instance();
  auto out = routes;
  std::vector<NodeId> removed;
  for (auto& r : out) {
    const auto& plans = eval.plans(r);
    if (r.visits.empty() || (plans.feasible() && !plans.needs_charge())) {
      continue;
    }
    std::size_t pick = 0;
    Distance best = std::numeric_limits<Distance>::min();
    for (std::size_t k = 0; k < r.visits.size(); ++k) {
      const Distance s = removal_saving(inst, r, k);
      if (s > best || (s == best && r.visits[k] < r.visits[pick])) {
        best = s;
        pick = k;
      }
    }
    removed.push_back(r.visits[pick]);
    r.visits.erase(r.visits.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  if (removed.empty()) {
    return out;
  }
  drop_empty(out);
  std::shuffle(removed.begin(), removed.end(), rng);

  for (NodeId v : removed) {
    const auto loads = loads_of(out, inst);
    auto opts = options_for(out, loads, v, inst);
    std::vector<Route> best_routes;
    double best_obj = kInf;
    for (const auto& s : opts) {
      auto trial = out;
      auto trial_loads = loads;
      apply(trial, trial_loads, s, v, inst);
      const double obj = eval.objective(trial);
      if (obj < best_obj - kObjEps) {
        best_obj = obj;
        best_routes = std::move(trial);
      }
    }
    out = std::move(best_routes);
  }
  return out;
}

SearchResult lns_search(const Instance& instance, const SearchConfig& config,
                        std::shared_ptr<CostCache> cache) {
  using Clock = std::chrono::steady_clock;
  Evaluator eval(instance, config.costing, std::move(cache));
  Rng rng(config.seed);
  SearchResult result;

  std::vector<RemovalOp> removals;
  std::vector<InsertionOp> insertions;
  for (std::size_t i = 0; i < kRemovalOps.size(); ++i) {
    if (config.removal_enabled[i]) {
      removals.push_back(kRemovalOps[i]);
    }
  }
  for (std::size_t i = 0; i < kInsertionOps.size(); ++i) {
    if (config.insertion_enabled[i]) {
      insertions.push_back(kInsertionOps[i]);
    }
  }
  if (removals.empty() || insertions.empty()) {
    throw InputError("at least one removal and one insertion operator must be enabled");
  }
  for (auto op : kRemovalOps) {
    result.stats.push_back({to_string(op)});
  }
  for (auto op : kInsertionOps) {
    result.stats.push_back({to_string(op)});
  }
  result.stats.push_back({"CR/CI"});
  result.stats.push_back({"LS"});
  auto& cr_stats = result.stats[10];
  auto& ls_stats = result.stats[11];

  auto timed = [](OperatorStats& st, auto&& fn) {
    const auto t0 = Clock::now();
    auto value = fn();
    st.total_time_us += std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
    ++st.usage;
    return value;
  };
  auto improve = [&](std::vector<Route> routes) {
    if (!config.local_search) {
      return routes;
    }
    return timed(ls_stats, [&] { return local_search(std::move(routes), eval); });
  };

  // LS polishes the incumbent only; the destroy/repair trajectory keeps the
  // unpolished routes, which escape local optima more easily.
  std::vector<Route> current = initial_routes(eval);
  double current_obj = eval.objective(current);
  std::vector<Route> best = improve(current);
  double best_obj = eval.objective(best);
  const int n = instance.customer_count();

  int stale = 0;
  while (n > 0 && stale < config.max_nonimprove) {
    ++result.iterations;
    const auto rop =
        removals[std::uniform_int_distribution<std::size_t>(0, removals.size() - 1)(rng)];
    const auto iop =
        insertions[std::uniform_int_distribution<std::size_t>(0, insertions.size() - 1)(rng)];
    auto& rst = result.stats[static_cast<std::size_t>(rop)];
    auto& ist = result.stats[5 + static_cast<std::size_t>(iop)];
    const int q = draw_removal_count(n, config.destroy_min, config.destroy_max, rng);

    auto partial = timed(rst, [&] { return destroy(current, rop, q, rng, eval); });
    auto cand = timed(ist, [&] { return repair(std::move(partial), iop, rng, eval); });
    if (config.charge_pair) {
      cand = timed(cr_stats, [&] { return charge_removal_insertion(cand, rng, eval); });
    }
    const double obj = eval.objective(cand);

    if (obj < current_obj - kObjEps) {
      ++rst.updates;
      ++ist.updates;
      current = cand;
      current_obj = obj;
      stale = 0;
    } else {
      ++stale;
    }
    if (obj < best_obj - kObjEps) {
      best = improve(std::move(cand));
      best_obj = eval.objective(best);
    }
    result.best_trajectory.push_back(best_obj);
  }
  result.best = eval.materialize(best, &result.exact);
  return result;
}

Solution lns_run(const Instance& instance, const SearchConfig& config) {
  return lns_search(instance, config).best;
}

std::string stats_csv(const std::vector<OperatorStats>& stats) {
  std::ostringstream out;
  out << "operator,usage,updates,total_time_us\n";
  for (const auto& s : stats) {
    out << s.op << ',' << s.usage << ',' << s.updates << ','
        << static_cast<long long>(std::llround(s.total_time_us)) << '\n';
  }
  return out.str();
}

} // namespace wmc
