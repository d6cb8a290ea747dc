#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wmc {

using NodeId = int;
using Distance = std::int64_t;
using Time = std::int64_t;

inline constexpr NodeId kDepot = 0;

// Tolerance for floating battery levels (γ and φ are decimals).
inline constexpr double kEnergyEps = 1e-9;

class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Raised when no feasible charging arrangement exists for a set of routes.
class Infeasible : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Node {
  NodeId id = 0;
  double x = 0.0;
  double y = 0.0;
  int demand = 0;
};

struct Params {
  double mtev_battery = 0.0; // P
  double mct_battery = 0.0;  // β
  double gamma = 0.0;        // charge gained per unit of charged edge length
  double phi = 0.0;          // MCT deadhead consumption per unit distance
  int capacity = 0;          // Q
  double cost_dist = 0.0;    // κ_t
  double cost_mtev = 0.0;    // κ_v
  double cost_mct = 0.0;     // κ_c

  // Throws InputError on non-positive values. Returns warnings (γ ≤ 1).
  std::vector<std::string> check() const;
};

class DistanceMatrix {
public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t size) : size_(size), data_(size * size, 0) {}

  std::size_t size() const { return size_; }
  Distance operator()(NodeId i, NodeId j) const {
    return data_[static_cast<std::size_t>(i) * size_ + static_cast<std::size_t>(j)];
  }
  void set(NodeId i, NodeId j, Distance d) {
    data_[static_cast<std::size_t>(i) * size_ + static_cast<std::size_t>(j)] = d;
    data_[static_cast<std::size_t>(j) * size_ + static_cast<std::size_t>(i)] = d;
  }

  bool operator==(const DistanceMatrix&) const = default;

private:
  std::size_t size_ = 0;
  std::vector<Distance> data_;
};

struct Instance {
  std::string name;
  std::vector<Node> nodes; // nodes[0] is the depot
  DistanceMatrix dist;
  Params params;

  int customer_count() const { return static_cast<int>(nodes.size()) - 1; }
  Distance tau(NodeId i, NodeId j) const { return dist(i, j); }
  int demand(NodeId i) const { return nodes.at(static_cast<std::size_t>(i)).demand; }
  int total_demand() const;

  // Structural checks: depot first with zero demand, contiguous ids, square
  // symmetric matrix with zero diagonal, valid parameters.
  void check() const;
};

// Customer visits of one MTEV; the depot at both ends is implicit.
struct Route {
  std::vector<NodeId> visits;

  std::size_t edge_count() const { return visits.size() + 1; }
  // Node at position p of the closed walk, p in [0, edge_count()].
  NodeId stop(std::size_t p) const {
    return (p == 0 || p > visits.size()) ? kDepot : visits[p - 1];
  }

  bool operator==(const Route&) const = default;
  auto operator<=>(const Route&) const = default;
};

// Bit e-1 set means edge e (1-based) of the owning route is charged.
struct ChargePlan {
  std::uint64_t mask = 0;

  bool charges(std::size_t edge) const { return (mask >> (edge - 1)) & 1U; }
  int count() const { return __builtin_popcountll(mask); }
  bool subset_of(ChargePlan other) const { return (mask & ~other.mask) == 0; }

  bool operator==(const ChargePlan&) const = default;
  auto operator<=>(const ChargePlan&) const = default;
};

struct ChargeJob {
  int route = 0; // index into Solution::routes
  int edge = 0;  // 1-based edge of that route
  NodeId from = kDepot;
  NodeId to = kDepot;
  Time depart = 0; // MTEV arrival at `from`
  Time arrive = 0; // MTEV arrival at `to`
  double energy = 0.0;

  bool operator==(const ChargeJob&) const = default;
};

struct MctTour {
  std::vector<ChargeJob> jobs;
  // Levels and clocks after leaving the depot, after each deadhead and each
  // charged edge, and after the final return.
  std::vector<double> battery_trace;
  std::vector<Time> time_trace;
};

struct CostBreakdown {
  double dist_cost = 0.0;
  double mtev_cost = 0.0;
  double mct_cost = 0.0;
  double total = 0.0;
};

struct Solution {
  std::vector<Route> routes;
  std::vector<ChargePlan> plans; // parallel to routes
  std::vector<MctTour> tours;
  CostBreakdown cost;
};

// Rounded (half-up) Euclidean distances.
DistanceMatrix dist_from_coords(const std::vector<Node>& nodes);

Distance route_length(const Route& route, const Instance& instance);
std::vector<Distance> route_taus(const Route& route, const Instance& instance);

// Σ demand over visits. Throws InputError on an unknown node id.
int route_load(const Route& route, const Instance& instance);

// Arrival times at every stop of the closed walk, starting at 0.
std::vector<Time> mtev_times(const Route& route, const Instance& instance);

CostBreakdown eval_cost(const Solution& solution, const Instance& instance);
CostBreakdown make_cost(Distance total_dist, std::size_t mtevs, std::size_t mcts,
                        const Params& params);

} // namespace wmc
