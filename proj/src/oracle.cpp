#include "wmc/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <tuple>

#include "wmc/mct_assign.h"

namespace wmc {

std::vector<ChargePlan> naive_charge_plans(const BdpInput& input) {
  input.check(kMaxNaiveEdges);
  const std::size_t m = input.taus.size();
  const std::uint64_t full = std::uint64_t{1} << m;
  std::vector<std::uint8_t> feasible(full, 0);
  for (std::uint64_t mask = 0; mask < full; ++mask) {
    feasible[mask] = plan_feasible(input, ChargePlan{mask}) ? 1 : 0;
  }
  // has_sub[S]: some strict subset of S is feasible (subset-sum transform).
  std::vector<std::uint8_t> any_sub = feasible;
  for (std::size_t b = 0; b < m; ++b) {
    for (std::uint64_t mask = 0; mask < full; ++mask) {
      if (mask >> b & 1U) {
        any_sub[mask] |= any_sub[mask ^ (std::uint64_t{1} << b)];
      }
    }
  }
  std::vector<ChargePlan> out;
  for (std::uint64_t mask = 0; mask < full; ++mask) {
    if (!feasible[mask]) {
      continue;
    }
    bool minimal = true;
    for (std::size_t b = 0; b < m && minimal; ++b) {
      if (mask >> b & 1U) {
        minimal = !any_sub[mask ^ (std::uint64_t{1} << b)];
      }
    }
    if (minimal) {
      out.push_back(ChargePlan{mask});
    }
  }
  return out;
}

namespace {

// Straight simulation of one MCT serving `jobs` in the given order.
bool serves_in_order(const std::vector<const ChargeJob*>& jobs, const Instance& inst) {
  const auto& p = inst.params;
  NodeId at = kDepot;
  Time clock = 0;
  double level = p.mct_battery;
  bool home = false;
  std::vector<NodeId> seen;
  auto visit = [&](NodeId v) {
    if (std::find(seen.begin(), seen.end(), v) != seen.end()) {
      return false;
    }
    seen.push_back(v);
    return true;
  };
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& j = *jobs[i];
    if (home) {
      return false;
    }
    if (j.from == kDepot) {
      if (i != 0) {
        return false;
      }
    } else if (at != j.from) {
      if (!visit(j.from)) {
        return false;
      }
      clock += inst.tau(at, j.from);
      level -= p.phi * static_cast<double>(inst.tau(at, j.from));
    }
    if (clock > j.depart) {
      return false;
    }
    level -= j.energy;
    if (j.to == kDepot) {
      home = true;
    } else if (!visit(j.to)) {
      return false;
    }
    at = j.to;
    clock = j.arrive;
    if (level < -kEnergyEps) {
      return false;
    }
  }
  level -= p.phi * static_cast<double>(inst.tau(at, kDepot));
  return level >= -kEnergyEps;
}

// Order in which the subset can be served, empty if none.
std::vector<std::size_t> serving_order(std::span<const ChargeJob> jobs, std::uint64_t subset,
                                       const Instance& inst) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (subset >> i & 1U) {
      idx.push_back(i);
    }
  }
  auto check = [&] {
    std::vector<const ChargeJob*> seq;
    for (std::size_t i : idx) {
      seq.push_back(&jobs[i]);
    }
    return serves_in_order(seq, inst);
  };
  if (idx.size() <= 7) {
    do {
      if (check()) {
        return idx;
      }
    } while (std::next_permutation(idx.begin(), idx.end()));
    return {};
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(jobs[a].depart, jobs[a].arrive) < std::tie(jobs[b].depart, jobs[b].arrive);
  });
  return check() ? idx : std::vector<std::size_t>{};
}

struct Cover {
  int count = -1;
  std::vector<std::vector<std::size_t>> tours; // job indices in serving order
};

Cover min_cover(std::span<const ChargeJob> jobs, const Instance& inst) {
  if (jobs.size() > kMaxExhaustiveJobs) {
    throw std::invalid_argument("exhaustive cover limited to " +
                                std::to_string(kMaxExhaustiveJobs) + " jobs");
  }
  const std::uint64_t full = std::uint64_t{1} << jobs.size();
  std::vector<std::vector<std::size_t>> order(full);
  std::vector<std::uint8_t> ok(full, 0);
  ok[0] = 1;
  for (std::uint64_t s = 1; s < full; ++s) {
    order[s] = serving_order(jobs, s, inst);
    ok[s] = !order[s].empty();
  }
  constexpr int kNone = std::numeric_limits<int>::max();
  std::vector<int> best(full, kNone);
  std::vector<std::uint64_t> pick(full, 0);
  best[0] = 0;
  for (std::uint64_t s = 1; s < full; ++s) {
    const std::uint64_t low = s & (~s + 1);
    // Subsets of s that contain its lowest job.
    const std::uint64_t rest = s ^ low;
    for (std::uint64_t t = rest;; t = (t - 1) & rest) {
      const std::uint64_t part = t | low;
      if (ok[part] && best[s ^ part] != kNone && best[s ^ part] + 1 < best[s]) {
        best[s] = best[s ^ part] + 1;
        pick[s] = part;
      }
      if (t == 0) {
        break;
      }
    }
  }
  Cover out;
  if (best[full - 1] == kNone) {
    return out;
  }
  out.count = best[full - 1];
  for (std::uint64_t s = full - 1; s != 0; s ^= pick[s]) {
    out.tours.push_back(order[pick[s]]);
  }
  return out;
}

struct FleetChoice {
  int mcts = -1;
  std::vector<ChargePlan> plans;
  std::vector<std::vector<ChargeJob>> tours;
};

FleetChoice best_fleet(const std::vector<Route>& routes,
                       const std::vector<std::vector<ChargePlan>>& plan_sets,
                       const Instance& inst) {
  FleetChoice best;
  std::vector<std::size_t> pick(routes.size(), 0);
  while (true) {
    std::vector<ChargePlan> plans;
    for (std::size_t r = 0; r < routes.size(); ++r) {
      plans.push_back(plan_sets[r][pick[r]]);
    }
    const auto jobs = build_jobs(routes, plans, inst);
    const auto cover = min_cover(jobs, inst);
    if (cover.count >= 0 && (best.mcts < 0 || cover.count < best.mcts)) {
      best.mcts = cover.count;
      best.plans = plans;
      best.tours.clear();
      for (const auto& t : cover.tours) {
        std::vector<ChargeJob> tour;
        for (std::size_t i : t) {
          tour.push_back(jobs[i]);
        }
        best.tours.push_back(std::move(tour));
      }
    }
    std::size_t r = 0;
    while (r < routes.size() && ++pick[r] == plan_sets[r].size()) {
      pick[r] = 0;
      ++r;
    }
    if (r == routes.size()) {
      break;
    }
  }
  return best;
}

std::vector<std::vector<ChargePlan>> naive_sets(const std::vector<Route>& routes,
                                                const Instance& inst) {
  std::vector<std::vector<ChargePlan>> sets;
  for (const auto& r : routes) {
    sets.push_back(naive_charge_plans(make_bdp_input(r, inst)));
  }
  return sets;
}

void enumerate(const Instance& inst, int v, std::vector<Route>& routes, std::vector<int>& loads,
               std::vector<std::vector<Route>>& out) {
  if (v > inst.customer_count()) {
    out.push_back(routes);
    return;
  }
  const int d = inst.demand(v);
  for (std::size_t r = 0; r < routes.size(); ++r) {
    if (loads[r] + d > inst.params.capacity) {
      continue;
    }
    loads[r] += d;
    // deeper calls append routes, so re-index instead of holding a reference
    for (std::size_t p = 0; p <= routes[r].visits.size(); ++p) {
      routes[r].visits.insert(routes[r].visits.begin() + static_cast<std::ptrdiff_t>(p), v);
      enumerate(inst, v + 1, routes, loads, out);
      routes[r].visits.erase(routes[r].visits.begin() + static_cast<std::ptrdiff_t>(p));
    }
    loads[r] -= d;
  }
  if (d <= inst.params.capacity) {
    routes.push_back(Route{{v}});
    loads.push_back(d);
    enumerate(inst, v + 1, routes, loads, out);
    routes.pop_back();
    loads.pop_back();
  }
}

} // namespace

int exhaustive_min_tours(std::span<const ChargeJob> jobs, const Instance& instance) {
  return min_cover(jobs, instance).count;
}

int exhaustive_min_mct(const std::vector<Route>& routes, const Instance& instance) {
  const auto sets = naive_sets(routes, instance);
  for (const auto& s : sets) {
    if (s.empty()) {
      return -1;
    }
  }
  return best_fleet(routes, sets, instance).mcts;
}

Solution exhaustive_solve(const Instance& instance) {
  const int n = instance.customer_count();
  if (n > kMaxExhaustiveCustomers) {
    throw std::invalid_argument("exhaustive_solve limited to " +
                                std::to_string(kMaxExhaustiveCustomers) + " customers");
  }
  const auto& p = instance.params;
  std::vector<std::vector<Route>> all;
  {
    std::vector<Route> routes;
    std::vector<int> loads;
    enumerate(instance, 1, routes, loads, all);
  }
  for (auto& routes : all) {
    std::sort(routes.begin(), routes.end());
  }
  struct Candidate {
    double base;
    std::size_t index;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Distance d = 0;
    for (const auto& r : all[i]) {
      d += route_length(r, instance);
    }
    cands.push_back({make_cost(d, all[i].size(), 0, p).total, i});
  }
  std::sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
    return std::tie(a.base, all[a.index]) < std::tie(b.base, all[b.index]);
  });

  std::map<std::vector<NodeId>, std::vector<ChargePlan>> plan_memo;
  auto plans_of = [&](const Route& r) -> const std::vector<ChargePlan>& {
    auto it = plan_memo.find(r.visits);
    if (it == plan_memo.end()) {
      it = plan_memo.emplace(r.visits, naive_charge_plans(make_bdp_input(r, instance))).first;
    }
    return it->second;
  };

  constexpr double kTieEps = 1e-7;
  double best_total = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> best_index;
  FleetChoice best_fleet_choice;
  for (const auto& c : cands) {
    if (c.base > best_total + kTieEps) {
      break;
    }
    const auto& routes = all[c.index];
    std::vector<Route> charged;
    std::vector<std::vector<ChargePlan>> sets;
    std::vector<std::size_t> where;
    bool feasible = true;
    for (std::size_t r = 0; r < routes.size() && feasible; ++r) {
      const auto& s = plans_of(routes[r]);
      feasible = !s.empty();
      if (feasible && s.front().mask != 0) {
        charged.push_back(routes[r]);
        sets.push_back(s);
        where.push_back(r);
      }
    }
    if (!feasible) {
      continue;
    }
    if (!charged.empty() && c.base + p.cost_mct > best_total + kTieEps) {
      continue;
    }
    FleetChoice fleet;
    fleet.mcts = 0;
    if (!charged.empty()) {
      fleet = best_fleet(charged, sets, instance);
      if (fleet.mcts < 0) {
        continue;
      }
      for (auto& t : fleet.tours) {
        for (auto& job : t) {
          job.route = static_cast<int>(where[static_cast<std::size_t>(job.route)]);
        }
      }
      std::vector<ChargePlan> full(routes.size());
      for (std::size_t i = 0; i < where.size(); ++i) {
        full[where[i]] = fleet.plans[i];
      }
      fleet.plans = std::move(full);
    } else {
      fleet.plans.assign(routes.size(), ChargePlan{});
    }
    const double total = c.base + p.cost_mct * fleet.mcts;
    const bool better = !best_index || total < best_total - kTieEps ||
                        (total <= best_total + kTieEps && routes < all[*best_index]);
    if (better) {
      best_total = total;
      best_index = c.index;
      best_fleet_choice = std::move(fleet);
    }
  }
  if (!best_index) {
    throw Infeasible("no feasible solution exists");
  }
  Solution sol;
  sol.routes = all[*best_index];
  sol.plans = best_fleet_choice.plans;
  for (const auto& t : best_fleet_choice.tours) {
    sol.tours.push_back(tour_feasible(t, instance).tour);
  }
  sol.cost = eval_cost(sol, instance);
  return sol;
}

double gap(double best, double reference) {
  if (reference == 0.0) {
    throw std::invalid_argument("gap: zero reference");
  }
  return (best / reference - 1.0) * 100.0;
}

} // namespace wmc
