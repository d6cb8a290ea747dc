#pragma once

#include <algorithm>
#include <random>
#include <tuple>
#include <vector>

#include "wmc/bdp.h"

#include "wmc/commands.h"
#include "wmc/core.h"

namespace wmc::test {

// Depot first. Each point is {x, y, demand}.
inline Instance make_instance(const std::vector<std::tuple<double, double, int>>& points,
                              Params params = default_params()) {
  Instance inst;
  inst.name = "t";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& [x, y, d] = points[i];
    inst.nodes.push_back({static_cast<NodeId>(i), x, y, d});
  }
  inst.dist = dist_from_coords(inst.nodes);
  inst.params = params;
  return inst;
}

inline Instance generated(int n, std::uint64_t seed, Params params = default_params()) {
  GenOptions g;
  g.customers = n;
  g.seed = seed;
  g.params = params;
  return generate_instance(g);
}

// Random routes over a small instance where charging is usually needed.
struct AssignCase {
  Instance instance;
  std::vector<Route> routes;
  std::vector<std::vector<ChargePlan>> plan_sets;
  std::size_t max_jobs = 0; // largest job count over plan combinations
};

inline AssignCase assign_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Params p = default_params();
  p.mtev_battery = uni(700, 1800);
  p.mct_battery = uni(1200, 6000);
  const double gammas[] = {1.5, 2.0, 3.0};
  p.gamma = gammas[uni(0, 2)];
  p.phi = uni(0, 1) == 0 ? 1.0 : 0.5;
  const int n = uni(2, 7);
  std::vector<std::tuple<double, double, int>> pts{{500, 500, 0}};
  for (int i = 0; i < n; ++i) {
    pts.emplace_back(uni(0, 1000), uni(0, 1000), 1);
  }
  AssignCase c{make_instance(pts, p), {}, {}, 0};
  std::vector<NodeId> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    order[static_cast<std::size_t>(i)] = i + 1;
  }
  std::shuffle(order.begin(), order.end(), rng);
  const int k = uni(1, std::min(3, n));
  c.routes.resize(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < order.size(); ++i) {
    // first k customers seed the k routes, the rest go anywhere
    auto r = i < static_cast<std::size_t>(k) ? i : static_cast<std::size_t>(uni(0, k - 1));
    c.routes[r].visits.push_back(order[i]);
  }
  for (const auto& route : c.routes) {
    auto plans = bdp_charge_plans(make_bdp_input(route, c.instance));
    std::size_t widest = 0;
    for (auto plan : plans) {
      widest = std::max(widest, static_cast<std::size_t>(plan.count()));
    }
    c.max_jobs += widest;
    c.plan_sets.push_back(std::move(plans));
  }
  return c;
}

} // namespace wmc::test
