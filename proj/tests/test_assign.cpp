#include <algorithm>

#include <doctest.h>

#include "helpers.h"
#include "wmc/mct_assign.h"
#include "wmc/oracle.h"

using namespace wmc;
using wmc::test::make_instance;

namespace {

Params roomy() {
  auto p = default_params();
  p.mct_battery = 1e6;
  p.phi = 1.0;
  p.gamma = 2.0;
  return p;
}

} // namespace

TEST_CASE("build_jobs") {
  // legs 3, 4, 5
  auto inst = make_instance({{0, 0, 0}, {3, 0, 1}, {3, 4, 1}}, roomy());
  std::vector<Route> routes{Route{{1, 2}}};
  CHECK(build_jobs(routes, {ChargePlan{0}}, inst).empty());

  auto jobs = build_jobs(routes, {ChargePlan{0b010}}, inst);
  REQUIRE(jobs.size() == 1);
  CHECK(jobs[0].route == 0);
  CHECK(jobs[0].edge == 2);
  CHECK(jobs[0].from == 1);
  CHECK(jobs[0].to == 2);
  CHECK(jobs[0].depart == 3);
  CHECK(jobs[0].arrive == 7);
  CHECK(jobs[0].energy == doctest::Approx(4 * inst.params.gamma));

  jobs = build_jobs({Route{{1}}, Route{{2}}}, {ChargePlan{1}, ChargePlan{1}}, inst);
  REQUIRE(jobs.size() == 2);
  CHECK(jobs[0].depart == 0);
  CHECK(jobs[1].depart == 0);
  CHECK(jobs[1].route == 1);
}

TEST_CASE("tour_feasible basics") {
  auto inst = make_instance({{0, 0, 0}, {3, 4, 1}, {-900, 0, 1}, {-900, 50, 1},
                             {900, 0, 1}, {900, 50, 1}},
                            roomy());
  auto near = make_job(0, Route{{1}}, 1, inst);
  auto check = tour_feasible(std::vector<ChargeJob>{near}, inst);
  CHECK(check.feasible);
  REQUIRE(check.tour.jobs.size() == 1);
  CHECK(check.tour.battery_trace.back() >= 0);

  // edge 2 of two mirrored routes: same clock, opposite sides of the depot
  auto west = make_job(0, Route{{2, 3}}, 2, inst);
  auto east = make_job(1, Route{{4, 5}}, 2, inst);
  CHECK(west.depart == east.depart);
  CHECK(tour_feasible(std::vector<ChargeJob>{west}, inst).feasible);
  CHECK_FALSE(tour_feasible(std::vector<ChargeJob>{west, east}, inst).feasible);
  CHECK_FALSE(tour_feasible(std::vector<ChargeJob>{east, west}, inst).feasible);

  // two depot-start jobs cannot share a tour
  auto a = make_job(0, Route{{2}}, 1, inst);
  auto b = make_job(1, Route{{4}}, 1, inst);
  CHECK_FALSE(tour_feasible(std::vector<ChargeJob>{a, b}, inst).feasible);
}

TEST_CASE("tour battery boundary") {
  // τ(0,i)=5, τ(i,j)=6, τ(j,0)=round(sqrt(109))=10
  auto p = roomy();
  auto inst = make_instance({{0, 0, 0}, {3, 4, 1}, {3, 10, 1}}, p);
  auto job = make_job(0, Route{{1, 2}}, 2, inst);
  REQUIRE(job.depart == 5);
  REQUIRE(job.arrive == 11);
  const double exact = p.phi * 5 + p.gamma * 6 + p.phi * 10;

  inst.params.mct_battery = exact;
  auto ok = tour_feasible(std::vector<ChargeJob>{job}, inst);
  CHECK(ok.feasible);
  CHECK(ok.tour.battery_trace.back() == doctest::Approx(0.0));
  CHECK(ok.tour.time_trace.back() == 21);

  inst.params.mct_battery = exact - 1;
  CHECK_FALSE(tour_feasible(std::vector<ChargeJob>{job}, inst).feasible);
  CHECK_FALSE(serves_alone(job, inst));
}

TEST_CASE("lb_tours") {
  auto p = roomy();
  CHECK(lb_tours({}, p) == 0);

  p.mct_battery = 10;
  std::vector<ChargeJob> heavy(3);
  for (int i = 0; i < 3; ++i) {
    heavy[static_cast<std::size_t>(i)] = {i, 1, 0, 1, 100 * i, 100 * i + 5, 10.0};
  }
  CHECK(lb_tours(heavy, p) >= 3);

  p.mct_battery = 1000;
  std::vector<ChargeJob> disjoint{{0, 1, 0, 1, 0, 5, 1.0}, {1, 1, 0, 1, 10, 15, 1.0}};
  CHECK(lb_tours(disjoint, p) == 1);
  std::vector<ChargeJob> overlap{{0, 1, 0, 1, 0, 5, 1.0}, {1, 1, 0, 1, 3, 9, 1.0}};
  CHECK(lb_tours(overlap, p) == 2);
}

TEST_CASE("assign_min_mct small cases") {
  auto inst = make_instance({{0, 0, 0}, {3, 4, 1}, {-900, 0, 1}, {-900, 50, 1},
                             {900, 0, 1}, {900, 50, 1}},
                            roomy());
  // nothing to charge
  auto none = assign_min_mct({Route{{1}}}, {{ChargePlan{0}}}, inst);
  CHECK(none.tours.empty());
  CHECK(none.plans == std::vector<ChargePlan>{{0}});
  CHECK(none.exact);

  // simultaneous jobs on opposite sides need two trucks
  std::vector<Route> routes{Route{{2, 3}}, Route{{4, 5}}};
  auto two = assign_min_mct(routes, {{ChargePlan{0b010}}, {ChargePlan{0b010}}}, inst);
  CHECK(two.tours.size() == 2);
  CHECK(exhaustive_min_tours(build_jobs(routes, two.plans, inst), inst) == 2);

  // after the west job the truck reaches a neighbouring route's return leg in time
  auto near = make_instance({{0, 0, 0}, {-900, 0, 1}, {-900, 50, 1}, {-950, 0, 1}}, roomy());
  std::vector<Route> west{Route{{1, 2}}, Route{{3}}};
  auto one = assign_min_mct(west, {{ChargePlan{0b001}}, {ChargePlan{0b10}}}, near);
  CHECK(one.tours.size() == 1);
  CHECK(exhaustive_min_tours(build_jobs(west, one.plans, near), near) == 1);

  // the plan choice matters: charging the outbound leg would clash at t=0
  auto choose = assign_min_mct(west, {{ChargePlan{0b001}}, {ChargePlan{0b01}, ChargePlan{0b10}}},
                               near);
  CHECK(choose.tours.size() == 1);
  CHECK(choose.plans[1] == ChargePlan{0b10});

  CHECK_THROWS_AS(assign_min_mct(routes, {{ChargePlan{0}}, {}}, inst), Infeasible);
}

TEST_CASE("assign_min_mct matches exhaustive enumeration on random cases") {
  int compared = 0;
  for (std::uint64_t seed = 1; compared < 60; ++seed) {
    auto c = wmc::test::assign_case(seed);
    if (c.max_jobs > 6) {
      continue;
    }
    CAPTURE(seed);
    const int expect = exhaustive_min_mct(c.routes, c.instance);
    bool infeasible = false;
    Assignment got;
    try {
      got = assign_min_mct(c.routes, c.plan_sets, c.instance);
    } catch (const Infeasible&) {
      infeasible = true;
    }
    if (expect < 0) {
      CHECK(infeasible);
    } else {
      REQUIRE_FALSE(infeasible);
      CHECK(got.exact);
      CHECK(static_cast<int>(got.tours.size()) == expect);
      auto jobs = build_jobs(c.routes, got.plans, c.instance);
      CHECK(static_cast<int>(got.tours.size()) >= (jobs.empty() ? 0 : lb_tours(jobs, c.instance.params)));
      std::size_t covered = 0;
      for (const auto& t : got.tours) {
        CHECK(tour_feasible(t.jobs, c.instance).feasible);
        covered += t.jobs.size();
      }
      CHECK(covered == jobs.size());
      for (std::size_t r = 0; r < c.routes.size(); ++r) {
        CHECK(simulate_plan(make_bdp_input(c.routes[r], c.instance), got.plans[r]).feasible);
      }

      // reversing route order gives the same count
      auto routes = c.routes;
      auto sets = c.plan_sets;
      std::reverse(routes.begin(), routes.end());
      std::reverse(sets.begin(), sets.end());
      CHECK(assign_min_mct(routes, sets, c.instance).tours.size() == got.tours.size());
    }
    ++compared;
  }
}

TEST_CASE("tiny node budget still returns a feasible assignment") {
  for (std::uint64_t seed = 1; seed < 40; ++seed) {
    auto c = wmc::test::assign_case(seed);
    if (exhaustive_min_mct(c.routes, c.instance) < 0) {
      continue;
    }
    auto got = assign_min_mct(c.routes, c.plan_sets, c.instance, AssignOptions{1});
    std::size_t covered = 0;
    for (const auto& t : got.tours) {
      CHECK(tour_feasible(t.jobs, c.instance).feasible);
      covered += t.jobs.size();
    }
    CHECK(covered == build_jobs(c.routes, got.plans, c.instance).size());
  }
}
