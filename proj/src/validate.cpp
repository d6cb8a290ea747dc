#include "wmc/validate.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace wmc {

namespace {

class Reporter {
public:
  void add(std::string constraint, std::string message) {
    report_.push_back({std::move(constraint), std::move(message)});
  }
  ValidationReport take() { return std::move(report_); }

private:
  ValidationReport report_;
};

std::string route_tag(std::size_t r) { return "route " + std::to_string(r + 1); }
std::string tour_tag(std::size_t b) { return "MCT " + std::to_string(b + 1); }

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-6 * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

std::string to_string(const Violation& v) { return "[" + v.constraint + "] " + v.message; }

ValidationReport validate_solution(const Solution& solution, const Instance& instance) {
  Reporter out;
  const auto& p = instance.params;
  const int n = instance.customer_count();
  const auto& routes = solution.routes;

  if (solution.plans.size() != routes.size()) {
    out.add("structure", "plan count " + std::to_string(solution.plans.size()) +
                             " differs from route count " + std::to_string(routes.size()));
    return out.take();
  }

  // Visit-once and route structure.
  std::vector<int> seen(static_cast<std::size_t>(n) + 1, 0);
  std::vector<bool> route_ok(routes.size(), true);
  for (std::size_t r = 0; r < routes.size(); ++r) {
    for (NodeId v : routes[r].visits) {
      if (v <= kDepot || v > n) {
        out.add("structure", route_tag(r) + " visits invalid node " + std::to_string(v));
        route_ok[r] = false;
        continue;
      }
      ++seen[static_cast<std::size_t>(v)];
    }
  }
  for (int i = 1; i <= n; ++i) {
    const int count = seen[static_cast<std::size_t>(i)];
    if (count != 1) {
      out.add("visit-once", "customer " + std::to_string(i) + " visited " +
                                std::to_string(count) + " times");
    }
  }

  // Per-route arrival times and battery recursion under the plan.
  std::vector<std::vector<Time>> arrival(routes.size());
  for (std::size_t r = 0; r < routes.size(); ++r) {
    if (!route_ok[r]) {
      continue;
    }
    const auto& route = routes[r];
    const std::size_t m = route.edge_count();

    int load = 0;
    for (NodeId v : route.visits) {
      load += instance.demand(v);
    }
    if (load > p.capacity) {
      out.add("capacity", route_tag(r) + " carries " + std::to_string(load) +
                              " > Q=" + std::to_string(p.capacity));
    }

    const auto mask = solution.plans[r].mask;
    if (m < 64 && (mask >> m) != 0) {
      out.add("plan", route_tag(r) + " mask has bits beyond its " + std::to_string(m) +
                          " edges");
    }

    auto& t = arrival[r];
    t.assign(m + 1, 0);
    double u = p.mtev_battery;
    for (std::size_t e = 1; e <= m; ++e) {
      const NodeId i = route.stop(e - 1);
      const NodeId j = route.stop(e);
      const auto tau = static_cast<double>(instance.tau(i, j));
      t[e] = t[e - 1] + instance.tau(i, j);
      const bool charged = (mask >> (e - 1)) & 1U;
      u = std::min(p.mtev_battery, u - tau + (charged ? p.gamma * tau : 0.0));
      if (u < -kEnergyEps) {
        out.add("mtev-battery", route_tag(r) + " battery " + std::to_string(u) +
                                    " after edge " + std::to_string(e));
        break;
      }
    }
  }

  // Every charged edge is covered by exactly one MCT job.
  std::map<std::pair<int, int>, int> coverage;
  for (std::size_t b = 0; b < solution.tours.size(); ++b) {
    for (const auto& job : solution.tours[b].jobs) {
      ++coverage[{job.route, job.edge}];
    }
  }
  for (std::size_t r = 0; r < routes.size(); ++r) {
    for (std::size_t e = 1; e <= routes[r].edge_count() && e <= 64; ++e) {
      if (solution.plans[r].charges(e)) {
        const int c = coverage[{static_cast<int>(r), static_cast<int>(e)}];
        if (c != 1) {
          out.add("sync", route_tag(r) + " edge " + std::to_string(e) + " charged but covered by " +
                              std::to_string(c) + " MCT jobs");
        }
      }
    }
  }

  // MCT tours: depot start/end, no revisits, wait-for-MTEV timing, battery.
  for (std::size_t b = 0; b < solution.tours.size(); ++b) {
    const auto& jobs = solution.tours[b].jobs;
    NodeId at = kDepot;
    Time clock = 0;
    double v = p.mct_battery;
    std::set<NodeId> visited{kDepot};
    bool parked = false;
    for (std::size_t q = 0; q < jobs.size(); ++q) {
      const auto& job = jobs[q];
      const auto r = static_cast<std::size_t>(job.route);
      if (job.route < 0 || r >= routes.size() || !route_ok[r] || job.edge < 1 ||
          static_cast<std::size_t>(job.edge) > routes[r].edge_count()) {
        out.add("mct-structure", tour_tag(b) + " references unknown edge");
        break;
      }
      if (!solution.plans[r].charges(static_cast<std::size_t>(job.edge))) {
        out.add("sync", tour_tag(b) + " charges route " + std::to_string(r + 1) + " edge " +
                            std::to_string(job.edge) + " which the plan leaves uncharged");
      }
      const NodeId from = routes[r].stop(static_cast<std::size_t>(job.edge) - 1);
      const NodeId to = routes[r].stop(static_cast<std::size_t>(job.edge));
      if (parked) {
        out.add("mct-structure", tour_tag(b) + " continues after returning to the depot");
        break;
      }
      if (at != from) {
        if (visited.count(from)) {
          out.add("mct-structure", tour_tag(b) + " revisits node " + std::to_string(from));
        }
        visited.insert(from);
        const Distance d = instance.tau(at, from);
        clock += d;
        v -= p.phi * static_cast<double>(d);
      }
      const Time depart = arrival[r][static_cast<std::size_t>(job.edge) - 1];
      const Time arrive = arrival[r][static_cast<std::size_t>(job.edge)];
      if (clock > depart) {
        out.add("mct-time", tour_tag(b) + " reaches node " + std::to_string(from) + " at " +
                                std::to_string(clock) + " after the MTEV leaves at " +
                                std::to_string(depart));
      }
      clock = arrive;
      v -= p.gamma * static_cast<double>(instance.tau(from, to));
      if (to == kDepot) {
        parked = true;
      } else {
        if (visited.count(to)) {
          out.add("mct-structure", tour_tag(b) + " revisits node " + std::to_string(to));
        }
        visited.insert(to);
      }
      at = to;
      if (v < -kEnergyEps) {
        out.add("mct-battery", tour_tag(b) + " battery " + std::to_string(v) + " after job " +
                                   std::to_string(q + 1));
      }
    }
    v -= p.phi * static_cast<double>(instance.tau(at, kDepot));
    if (v < -kEnergyEps) {
      out.add("mct-battery", tour_tag(b) + " cannot return to the depot (battery " +
                                 std::to_string(v) + ")");
    }
  }

  // Objective bookkeeping.
  Distance total = 0;
  for (std::size_t r = 0; r < routes.size(); ++r) {
    if (route_ok[r]) {
      total += arrival[r].back();
    }
  }
  const double dist_cost = p.cost_dist * static_cast<double>(total);
  const double mtev_cost = p.cost_mtev * static_cast<double>(routes.size());
  const double mct_cost = p.cost_mct * static_cast<double>(solution.tours.size());
  const auto& c = solution.cost;
  if (!close(c.dist_cost, dist_cost) || !close(c.mtev_cost, mtev_cost) ||
      !close(c.mct_cost, mct_cost) || !close(c.total, dist_cost + mtev_cost + mct_cost)) {
    out.add("objective", "stated cost " + std::to_string(c.total) + " differs from recomputed " +
                             std::to_string(dist_cost + mtev_cost + mct_cost));
  }
  return out.take();
}

} // namespace wmc
