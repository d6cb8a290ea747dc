#include "wmc/bdp.h"

#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

namespace wmc {

namespace {

constexpr double kDead = -std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxReferenceEdges = 18;

enum : std::int8_t { kInfeasible = -1, kOpen = 0, kFeasible = 1 };

} // namespace

void BdpInput::check(std::size_t max_edges) const {
  if (taus.empty()) {
    throw std::invalid_argument("BDP input needs at least one edge");
  }
  if (taus.size() > max_edges) {
    throw std::invalid_argument("route has " + std::to_string(taus.size()) +
                                " edges, limit is " + std::to_string(max_edges));
  }
  for (Distance t : taus) {
    if (t < 0) {
      throw std::invalid_argument("negative edge length");
    }
  }
}

BdpInput make_bdp_input(const Route& route, const Instance& instance) {
  return BdpInput{route_taus(route, instance), instance.params.mtev_battery,
                  instance.params.gamma};
}

std::vector<Distance> required_remaining(std::span<const Distance> taus) {
  std::vector<Distance> r(taus.size(), 0);
  for (std::size_t e = taus.size(); e-- > 1;) {
    r[e - 1] = r[e] + taus[e];
  }
  return r;
}

PlanSimulation simulate_plan(const BdpInput& input, ChargePlan plan) {
  PlanSimulation sim;
  sim.feasible = true;
  double level = input.capacity;
  sim.trace.reserve(input.taus.size());
  for (std::size_t e = 1; e <= input.taus.size(); ++e) {
    const Distance tau = input.taus[e - 1];
    level = plan.charges(e) ? charge_level(level, tau, input.gamma, input.capacity)
                            : drive_level(level, tau);
    sim.trace.push_back(level);
    if (level < 0.0) {
      sim.feasible = false;
    }
  }
  return sim;
}

bool plan_feasible(const BdpInput& input, ChargePlan plan) {
  double level = input.capacity;
  bool ok = true;
  for (std::size_t e = 1; e <= input.taus.size(); ++e) {
    const Distance tau = input.taus[e - 1];
    level = plan.charges(e) ? charge_level(level, tau, input.gamma, input.capacity)
                            : drive_level(level, tau);
    ok = ok && level >= 0.0;
  }
  return ok;
}

BdpResult run_bdp(const BdpInput& input) {
  input.check();
  const std::size_t m = input.taus.size();
  const auto r = required_remaining(input.taus);
  const std::size_t states = std::size_t{1} << m;

  // f[s]: battery after the edges processed so far under charge pattern s.
  // Only live states are ever read, so f needs no initialisation.
  std::unique_ptr<double[]> f(new double[states]);
  std::vector<std::int8_t> mark(states, kOpen);
  f[0] = input.capacity;

  // Live masks (open, non-negative level) in ascending order. Dead and
  // redundant states are never revisited, which is where the DP saves work.
  std::vector<std::uint32_t> live{0};
  std::vector<std::uint32_t> low;
  std::vector<std::uint32_t> high;

  BdpResult result;
  for (std::size_t e = 1; e <= m && !live.empty(); ++e) {
    const auto bit = static_cast<std::uint32_t>(1U << (e - 1));
    const Distance tau = input.taus[e - 1];
    const auto need = static_cast<double>(r[e - 1]);
    low.clear();
    high.clear();
    for (const std::uint32_t j : live) {
      const std::uint32_t k = j | bit;
      ++result.expanded;
      // Charging twin first: both read the pre-edge level held in f[j].
      f[k] = charge_level(f[j], tau, input.gamma, input.capacity);
      f[j] = drive_level(f[j], tau);
      for (const std::uint32_t s : {j, k}) {
        auto& next = s == j ? low : high;
        if (f[s] < 0.0) {
          mark[s] = kInfeasible;
        } else if (f[s] >= need) {
          // twins of s at later edges would be redundant, so s leaves the live set
          mark[s] = kFeasible;
          result.recorded.push_back(ChargePlan{s});
        } else {
          next.push_back(s);
        }
      }
    }
    live.swap(low);
    live.insert(live.end(), high.begin(), high.end());
  }

  if (input.gamma < 0.0) {
    result.plans = prune_supersets(result.recorded);
    return result;
  }
  // Charging never lowers the level, so feasibility is closed under supersets.
  // A plan is feasible iff the DP recorded one of its truncations (the plan
  // with its highest bits cleared), and a recorded mask is minimal iff no
  // one-bit-smaller subset is feasible.
  auto feasible = [&](std::uint64_t s) {
    for (;;) {
      if (mark[s] == kFeasible) {
        return true;
      }
      if (s == 0) {
        return false;
      }
      s &= ~(std::uint64_t{1} << (63 - __builtin_clzll(s)));
    }
  };
  for (const auto plan : result.recorded) {
    bool minimal = true;
    for (std::uint64_t rest = plan.mask; rest != 0 && minimal; rest &= rest - 1) {
      minimal = !feasible(plan.mask ^ (rest & (~rest + 1)));
    }
    if (minimal) {
      result.plans.push_back(plan);
    }
  }
  std::sort(result.plans.begin(), result.plans.end());
  return result;
}

std::vector<ChargePlan> bdp_charge_plans(const BdpInput& input) {
  return run_bdp(input).plans;
}

std::vector<ChargePlan> bdp_reference_2d(const BdpInput& input) {
  input.check(kMaxReferenceEdges);
  const std::size_t m = input.taus.size();
  const auto r = required_remaining(input.taus);
  const std::size_t states = std::size_t{1} << m;

  std::vector<std::vector<double>> level(m + 1, std::vector<double>(states, kDead));
  std::vector<std::vector<std::int8_t>> status(m + 1,
                                               std::vector<std::int8_t>(states, kInfeasible));
  level[0][0] = input.capacity;
  status[0][0] = kOpen;

  std::vector<ChargePlan> recorded;
  for (std::size_t e = 1; e <= m; ++e) {
    const std::size_t bit = std::size_t{1} << (e - 1);
    const Distance tau = input.taus[e - 1];
    const auto need = static_cast<double>(r[e - 1]);
    const auto& prev_level = level[e - 1];
    const auto& prev_status = status[e - 1];
    auto& cur_level = level[e];
    auto& cur_status = status[e];
    for (std::size_t s = 0; s < bit; ++s) {
      const std::size_t k = s | bit;
      if (prev_status[s] == kFeasible) {
        cur_level[s] = prev_level[s];
        cur_status[s] = kFeasible;
        continue;
      }
      if (prev_status[s] == kInfeasible || prev_level[s] < 0.0) {
        continue;
      }
      cur_level[s] = drive_level(prev_level[s], tau);
      cur_level[k] = charge_level(prev_level[s], tau, input.gamma, input.capacity);
      for (std::size_t t : {s, k}) {
        if (cur_level[t] >= need) {
          cur_status[t] = kFeasible;
          recorded.push_back(ChargePlan{t});
        } else {
          cur_status[t] = kOpen;
        }
      }
    }
  }
  return prune_supersets(std::move(recorded));
}

std::vector<ChargePlan> prune_supersets(std::vector<ChargePlan> masks) {
  std::sort(masks.begin(), masks.end(), [](ChargePlan a, ChargePlan b) {
    const int ca = a.count();
    const int cb = b.count();
    return ca != cb ? ca < cb : a.mask < b.mask;
  });
  std::vector<ChargePlan> kept;
  for (const auto candidate : masks) {
    const bool dominated = std::any_of(kept.begin(), kept.end(),
                                       [&](ChargePlan k) { return k.subset_of(candidate); });
    if (!dominated) {
      kept.push_back(candidate);
    }
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

} // namespace wmc
