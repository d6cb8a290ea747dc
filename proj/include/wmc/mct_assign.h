#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wmc/core.h"

namespace wmc {

ChargeJob make_job(int route_index, const Route& route, std::size_t edge,
                   const Instance& instance);

// One job per set plan bit, routes in order, edges ascending.
std::vector<ChargeJob> build_jobs(const std::vector<Route>& routes,
                                  const std::vector<ChargePlan>& plans,
                                  const Instance& instance);

// Incremental MCT simulation. The truck leaves the depot at time 0 with β,
// deadheads (φ per unit) to each job start, waits for the MTEV, rides the
// charged edge (γ per unit) and finally returns to the depot. A tour never
// revisits a node, a depot-start job must come first and a depot-end job
// must come last, so every accepted tour is a simple depot-to-depot path.
class TourCursor {
public:
  explicit TourCursor(const Instance& instance);

  // Returns false (and leaves the cursor untouched) if `job` cannot follow
  // the jobs so far. The return trip is checked separately by can_close():
  // a later job may end closer to the depot.
  bool try_append(const ChargeJob& job);

  NodeId location() const { return at_; }
  Time clock() const { return clock_; }
  double battery() const { return battery_; }
  std::size_t size() const { return jobs_; }
  // Battery left after the return deadhead.
  double closing_battery() const;
  bool can_close() const { return closing_battery() >= -kEnergyEps; }

private:
  const Instance* instance_;
  NodeId at_ = kDepot;
  Time clock_ = 0;
  double battery_ = 0.0;
  std::size_t jobs_ = 0;
  bool closed_ = false; // parked at the end depot
  std::vector<NodeId> visited_;
};

// A dedicated MCT can serve the job and drive home.
bool serves_alone(const ChargeJob& job, const Instance& instance);

struct TourCheck {
  bool feasible = false;
  MctTour tour;
};

TourCheck tour_feasible(std::span<const ChargeJob> jobs, const Instance& instance);

// max(ceil(Σ energy / β), peak number of simultaneously running jobs).
int lb_tours(std::span<const ChargeJob> jobs, const Params& params);

struct AssignOptions {
  std::uint64_t node_budget = 1'000'000;
};

struct Assignment {
  std::vector<ChargePlan> plans; // one per route
  std::vector<MctTour> tours;
  bool exact = true;
  std::uint64_t nodes = 0;
};

// Chooses one plan per route and packs the charged edges into the fewest
// feasible MCT tours. Plans whose jobs cannot be served even by a dedicated
// MCT are discarded. Throws Infeasible when a route has no usable plan.
Assignment assign_min_mct(const std::vector<Route>& routes,
                          const std::vector<std::vector<ChargePlan>>& plan_sets,
                          const Instance& instance, const AssignOptions& options = {});

} // namespace wmc
