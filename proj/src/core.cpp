#include "wmc/core.h"

#include <cmath>
#include <numeric>

namespace wmc {

std::vector<std::string> Params::check() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) {
      throw InputError(std::string("parameter ") + what + " must be positive");
    }
  };
  positive(mtev_battery, "BATTERY_MTEV");
  positive(mct_battery, "BATTERY_MCT");
  positive(gamma, "GAMMA");
  positive(phi, "PHI");
  positive(capacity, "CAPACITY");
  positive(cost_dist, "COST_DIST");
  positive(cost_mtev, "COST_MTEV");
  positive(cost_mct, "COST_MCT");

  std::vector<std::string> warnings;
  if (gamma <= 1.0) {
    warnings.emplace_back("GAMMA <= 1: charging never yields a net battery gain");
  }
  return warnings;
}

int Instance::total_demand() const {
  return std::accumulate(nodes.begin(), nodes.end(), 0,
                         [](int acc, const Node& n) { return acc + n.demand; });
}

void Instance::check() const {
  if (nodes.empty()) {
    throw InputError("instance has no nodes");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id != static_cast<NodeId>(i)) {
      throw InputError("node ids must be contiguous from 0, got " +
                       std::to_string(nodes[i].id) + " at position " + std::to_string(i));
    }
    if (nodes[i].demand < 0) {
      throw InputError("negative demand at node " + std::to_string(i));
    }
  }
  if (nodes[0].demand != 0) {
    throw InputError("depot demand must be 0");
  }
  if (dist.size() != nodes.size()) {
    throw InputError("distance matrix size does not match node count");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto a = static_cast<NodeId>(i);
    if (dist(a, a) != 0) {
      throw InputError("distance matrix diagonal must be zero");
    }
    for (std::size_t j = 0; j < i; ++j) {
      const auto b = static_cast<NodeId>(j);
      if (dist(a, b) != dist(b, a) || dist(a, b) < 0) {
        throw InputError("distance matrix must be symmetric and non-negative");
      }
    }
  }
  params.check();
}

DistanceMatrix dist_from_coords(const std::vector<Node>& nodes) {
  DistanceMatrix dist(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double dx = nodes[i].x - nodes[j].x;
      const double dy = nodes[i].y - nodes[j].y;
      const auto d = static_cast<Distance>(std::floor(std::sqrt(dx * dx + dy * dy) + 0.5));
      dist.set(static_cast<NodeId>(i), static_cast<NodeId>(j), d);
    }
  }
  return dist;
}

std::vector<Distance> route_taus(const Route& route, const Instance& instance) {
  std::vector<Distance> taus;
  taus.reserve(route.edge_count());
  for (std::size_t e = 1; e <= route.edge_count(); ++e) {
    taus.push_back(instance.tau(route.stop(e - 1), route.stop(e)));
  }
  return taus;
}

Distance route_length(const Route& route, const Instance& instance) {
  Distance total = 0;
  for (std::size_t e = 1; e <= route.edge_count(); ++e) {
    total += instance.tau(route.stop(e - 1), route.stop(e));
  }
  return total;
}

int route_load(const Route& route, const Instance& instance) {
  int load = 0;
  for (NodeId v : route.visits) {
    if (v <= kDepot || v > instance.customer_count()) {
      throw InputError("unknown customer id " + std::to_string(v));
    }
    load += instance.demand(v);
  }
  return load;
}

std::vector<Time> mtev_times(const Route& route, const Instance& instance) {
  std::vector<Time> times{0};
  times.reserve(route.edge_count() + 1);
  for (std::size_t e = 1; e <= route.edge_count(); ++e) {
    times.push_back(times.back() + instance.tau(route.stop(e - 1), route.stop(e)));
  }
  return times;
}

CostBreakdown make_cost(Distance total_dist, std::size_t mtevs, std::size_t mcts,
                        const Params& params) {
  CostBreakdown cost;
  cost.dist_cost = params.cost_dist * static_cast<double>(total_dist);
  cost.mtev_cost = params.cost_mtev * static_cast<double>(mtevs);
  cost.mct_cost = params.cost_mct * static_cast<double>(mcts);
  cost.total = cost.dist_cost + cost.mtev_cost + cost.mct_cost;
  return cost;
}

CostBreakdown eval_cost(const Solution& solution, const Instance& instance) {
  Distance total = 0;
  for (const auto& r : solution.routes) {
    total += route_length(r, instance);
  }
  return make_cost(total, solution.routes.size(), solution.tours.size(), instance.params);
}

} // namespace wmc
