#include "wmc/mct_assign.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace wmc {

ChargeJob make_job(int route_index, const Route& route, std::size_t edge,
                   const Instance& instance) {
  ChargeJob job;
  job.route = route_index;
  job.edge = static_cast<int>(edge);
  job.from = route.stop(edge - 1);
  job.to = route.stop(edge);
  Time t = 0;
  for (std::size_t e = 1; e < edge; ++e) {
    t += instance.tau(route.stop(e - 1), route.stop(e));
  }
  const Distance len = instance.tau(job.from, job.to);
  job.depart = t;
  job.arrive = t + len;
  job.energy = instance.params.gamma * static_cast<double>(len);
  return job;
}

std::vector<ChargeJob> build_jobs(const std::vector<Route>& routes,
                                  const std::vector<ChargePlan>& plans,
                                  const Instance& instance) {
  std::vector<ChargeJob> jobs;
  for (std::size_t r = 0; r < routes.size(); ++r) {
    for (std::size_t e = 1; e <= routes[r].edge_count(); ++e) {
      if (plans[r].charges(e)) {
        jobs.push_back(make_job(static_cast<int>(r), routes[r], e, instance));
      }
    }
  }
  return jobs;
}

TourCursor::TourCursor(const Instance& instance)
    : instance_(&instance), battery_(instance.params.mct_battery) {}

double TourCursor::closing_battery() const {
  return battery_ - instance_->params.phi * static_cast<double>(instance_->tau(at_, kDepot));
}

bool TourCursor::try_append(const ChargeJob& job) {
  if (closed_) {
    return false;
  }
  auto seen = [this](NodeId v) {
    return std::find(visited_.begin(), visited_.end(), v) != visited_.end();
  };

  Time reach = clock_;
  double level = battery_;
  bool moved = false;
  if (job.from == kDepot) {
    if (at_ != kDepot || jobs_ != 0) {
      return false;
    }
  } else if (at_ != job.from) {
    if (seen(job.from)) {
      return false;
    }
    const Distance d = instance_->tau(at_, job.from);
    reach += d;
    level -= instance_->params.phi * static_cast<double>(d);
    moved = true;
  }
  if (reach > job.depart) {
    return false;
  }
  level -= job.energy;
  if (job.to != kDepot && seen(job.to)) {
    return false;
  }
  if (level < -kEnergyEps) {
    return false;
  }

  if (moved) {
    visited_.push_back(job.from);
  }
  if (job.to == kDepot) {
    closed_ = true;
  } else {
    visited_.push_back(job.to);
  }
  at_ = job.to;
  clock_ = job.arrive;
  battery_ = level;
  ++jobs_;
  return true;
}

bool serves_alone(const ChargeJob& job, const Instance& instance) {
  TourCursor solo(instance);
  return solo.try_append(job) && solo.can_close();
}

TourCheck tour_feasible(std::span<const ChargeJob> jobs, const Instance& instance) {
  TourCheck check;
  TourCursor cursor(instance);
  const double phi = instance.params.phi;
  auto& trace_b = check.tour.battery_trace;
  auto& trace_t = check.tour.time_trace;
  trace_b.push_back(cursor.battery());
  trace_t.push_back(0);

  for (const auto& job : jobs) {
    const NodeId before = cursor.location();
    const Time clock_before = cursor.clock();
    const double battery_before = cursor.battery();
    if (!cursor.try_append(job)) {
      return check;
    }
    if (before != job.from) {
      const Distance d = instance.tau(before, job.from);
      trace_b.push_back(battery_before - phi * static_cast<double>(d));
      trace_t.push_back(clock_before + d);
    }
    trace_b.push_back(cursor.battery());
    trace_t.push_back(cursor.clock());
    check.tour.jobs.push_back(job);
  }
  if (!cursor.can_close()) {
    return check;
  }
  const Distance home = instance.tau(cursor.location(), kDepot);
  if (home > 0) {
    trace_b.push_back(cursor.closing_battery());
    trace_t.push_back(cursor.clock() + home);
  }
  check.feasible = true;
  return check;
}

int lb_tours(std::span<const ChargeJob> jobs, const Params& params) {
  if (jobs.empty()) {
    return 0;
  }
  double energy = 0.0;
  std::vector<std::pair<Time, int>> events;
  for (const auto& j : jobs) {
    energy += j.energy;
    if (j.arrive > j.depart) {
      events.emplace_back(j.depart, +1);
      events.emplace_back(j.arrive, -1);
    }
  }
  // Ends sort before starts at equal times: [depart, arrive) spans.
  std::sort(events.begin(), events.end());
  int running = 0;
  int peak = 0;
  for (const auto& [t, delta] : events) {
    running += delta;
    peak = std::max(peak, running);
  }
  const int by_energy = static_cast<int>(std::ceil(energy / params.mct_battery - kEnergyEps));
  return std::max({by_energy, peak, 1});
}

namespace {

struct PlanOption {
  ChargePlan plan;
  std::vector<ChargeJob> jobs;
};

bool job_order(const ChargeJob& a, const ChargeJob& b) {
  return std::tie(a.depart, a.arrive, a.route, a.edge) <
         std::tie(b.depart, b.arrive, b.route, b.edge);
}

class AssignmentSearch {
public:
  AssignmentSearch(const Instance& instance, std::vector<std::vector<PlanOption>> options,
                   std::uint64_t budget)
      : instance_(instance), options_(std::move(options)), budget_(budget) {}

  void run() {
    global_lb_ = options_.empty() ? 0 : 1;
    for (const auto& opts : options_) {
      int route_lb = std::numeric_limits<int>::max();
      for (const auto& o : opts) {
        route_lb = std::min(route_lb, lb_tours(o.jobs, instance_.params));
      }
      global_lb_ = std::max(global_lb_, route_lb);
    }
    seed_incumbent();
    if (best_count_ > global_lb_ && nodes_ >= budget_) {
      aborted_ = true;
    }
    if (best_count_ > global_lb_ && !aborted_) {
      choice_.assign(options_.size(), 0);
      choose(0);
    }
  }

  bool exact() const { return !aborted_; }
  std::uint64_t nodes() const { return nodes_; }
  const std::vector<std::size_t>& best_choice() const { return best_choice_; }
  const std::vector<std::vector<ChargeJob>>& best_tours() const { return best_tours_; }

private:
  // First-fit by departure for one plan choice; returns the tour count.
  int greedy(const std::vector<std::size_t>& choice,
             std::vector<std::vector<ChargeJob>>* tours_out = nullptr) {
    std::vector<ChargeJob> jobs;
    for (std::size_t r = 0; r < options_.size(); ++r) {
      const auto& add = options_[r][choice[r]].jobs;
      jobs.insert(jobs.end(), add.begin(), add.end());
    }
    std::sort(jobs.begin(), jobs.end(), job_order);
    std::vector<TourCursor> cursors;
    std::vector<std::vector<ChargeJob>> tours;
    for (const auto& job : jobs) {
      ++nodes_;
      bool placed = false;
      for (std::size_t t = 0; t < cursors.size() && !placed; ++t) {
        TourCursor trial = cursors[t];
        if (trial.try_append(job) && trial.can_close()) {
          cursors[t] = std::move(trial);
          tours[t].push_back(job);
          placed = true;
        }
      }
      if (!placed) {
        cursors.emplace_back(instance_);
        cursors.back().try_append(job); // servable alone by construction
        tours.push_back({job});
      }
    }
    if (tours_out) {
      *tours_out = std::move(tours);
    }
    return static_cast<int>(cursors.size());
  }

  // Greedy packing, improved by switching one route's plan at a time.
  void seed_incumbent() {
    std::vector<std::size_t> choice(options_.size(), 0);
    int count = greedy(choice);
    for (bool improved = true; improved && count > global_lb_ && nodes_ < budget_;) {
      improved = false;
      for (std::size_t r = 0; r < options_.size() && count > global_lb_; ++r) {
        const std::size_t keep = choice[r];
        for (std::size_t p = 0; p < options_[r].size(); ++p) {
          if (p == keep) {
            continue;
          }
          choice[r] = p;
          if (const int c = greedy(choice); c < count) {
            count = c;
            improved = true;
            break;
          }
          choice[r] = keep;
        }
      }
    }
    best_count_ = greedy(choice, &best_tours_);
    best_choice_ = choice;
  }

  bool stop() const { return aborted_ || best_count_ <= global_lb_; }

  void choose(std::size_t r) {
    if (stop()) {
      return;
    }
    if (++nodes_ > budget_) {
      aborted_ = true;
      return;
    }
    if (r == options_.size()) {
      pack_leaf();
      return;
    }
    for (std::size_t p = 0; p < options_[r].size() && !stop(); ++p) {
      const auto& add = options_[r][p].jobs;
      chosen_.insert(chosen_.end(), add.begin(), add.end());
      if (lb_tours(chosen_, instance_.params) < best_count_) {
        choice_[r] = p;
        choose(r + 1);
      }
      chosen_.resize(chosen_.size() - add.size());
    }
  }

  void pack_leaf() {
    jobs_ = chosen_;
    std::sort(jobs_.begin(), jobs_.end(), job_order);
    leaf_lb_ = lb_tours(jobs_, instance_.params);
    leaf_done_ = false;
    cursors_.clear();
    members_.clear();
    pack(0);
  }

  void pack(std::size_t idx) {
    if (aborted_ || leaf_done_) {
      return;
    }
    if (++nodes_ > budget_) {
      aborted_ = true;
      return;
    }
    if (idx == jobs_.size()) {
      for (const auto& c : cursors_) {
        if (!c.can_close()) {
          return;
        }
      }
      best_count_ = static_cast<int>(cursors_.size());
      best_choice_ = choice_;
      best_tours_.clear();
      for (const auto& m : members_) {
        std::vector<ChargeJob> tour;
        for (std::size_t j : m) {
          tour.push_back(jobs_[j]);
        }
        best_tours_.push_back(std::move(tour));
      }
      leaf_done_ = best_count_ <= leaf_lb_;
      return;
    }
    const auto& job = jobs_[idx];
    for (std::size_t t = 0; t < cursors_.size(); ++t) {
      TourCursor saved = cursors_[t];
      if (cursors_[t].try_append(job)) {
        members_[t].push_back(idx);
        pack(idx + 1);
        members_[t].pop_back();
        cursors_[t] = std::move(saved);
        if (aborted_ || leaf_done_) {
          return;
        }
      }
    }
    if (static_cast<int>(cursors_.size()) + 1 < best_count_) {
      TourCursor fresh(instance_);
      if (fresh.try_append(job)) { // always succeeds: jobs are servable alone
        cursors_.push_back(std::move(fresh));
        members_.push_back({idx});
        pack(idx + 1);
        members_.pop_back();
        cursors_.pop_back();
      }
    }
  }

  const Instance& instance_;
  std::vector<std::vector<PlanOption>> options_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  int global_lb_ = 0;

  int best_count_ = 0;
  std::vector<std::size_t> best_choice_;
  std::vector<std::vector<ChargeJob>> best_tours_;

  std::vector<std::size_t> choice_;
  std::vector<ChargeJob> chosen_;

  std::vector<ChargeJob> jobs_;
  int leaf_lb_ = 0;
  bool leaf_done_ = false;
  std::vector<TourCursor> cursors_;
  std::vector<std::vector<std::size_t>> members_;
};

} // namespace

Assignment assign_min_mct(const std::vector<Route>& routes,
                          const std::vector<std::vector<ChargePlan>>& plan_sets,
                          const Instance& instance, const AssignOptions& options) {
  if (plan_sets.size() != routes.size()) {
    throw std::invalid_argument("assign_min_mct: one plan set per route required");
  }
  Assignment result;
  result.plans.assign(routes.size(), ChargePlan{});

  // Routes that can run uncharged contribute nothing; the rest get searched.
  std::vector<std::size_t> charged_routes;
  std::vector<std::vector<PlanOption>> route_options;
  for (std::size_t r = 0; r < routes.size(); ++r) {
    const auto& set = plan_sets[r];
    if (set.empty()) {
      throw Infeasible("route " + std::to_string(r + 1) + " has no feasible charge plan");
    }
    if (std::find(set.begin(), set.end(), ChargePlan{}) != set.end()) {
      continue;
    }
    std::vector<PlanOption> usable;
    for (const auto plan : set) {
      PlanOption opt{plan, build_jobs({routes[r]}, {plan}, instance)};
      bool servable = true;
      for (auto& job : opt.jobs) {
        job.route = static_cast<int>(r);
        servable = servable && serves_alone(job, instance);
      }
      if (servable) {
        usable.push_back(std::move(opt));
      }
    }
    if (usable.empty()) {
      throw Infeasible("route " + std::to_string(r + 1) +
                       " has no charge plan an MCT can serve");
    }
    charged_routes.push_back(r);
    route_options.push_back(std::move(usable));
  }
  if (route_options.empty()) {
    return result;
  }

  AssignmentSearch search(instance, route_options, options.node_budget);
  search.run();
  for (std::size_t i = 0; i < charged_routes.size(); ++i) {
    result.plans[charged_routes[i]] = route_options[i][search.best_choice()[i]].plan;
  }
  for (const auto& tour_jobs : search.best_tours()) {
    auto check = tour_feasible(tour_jobs, instance);
    result.tours.push_back(std::move(check.tour));
  }
  result.exact = search.exact();
  result.nodes = search.nodes();
  return result;
}

} // namespace wmc
