#include <algorithm>

#include <doctest.h>

#include "helpers.h"
#include "wmc/lns.h"
#include "wmc/mct_assign.h"
#include "wmc/validate.h"

using namespace wmc;
using wmc::test::make_instance;

namespace {

bool has(const ValidationReport& report, const std::string& constraint) {
  return std::any_of(report.begin(), report.end(),
                     [&](const Violation& v) { return v.constraint == constraint; });
}

// Three customers on a line east of the depot; P forces charging on the way back.
Instance line_instance(double battery) {
  auto p = default_params();
  p.mtev_battery = battery;
  p.capacity = 5;
  return make_instance({{0, 0, 0}, {100, 0, 2}, {200, 0, 3}, {300, 0, 1}}, p);
}

Solution costed(Solution s, const Instance& inst) {
  s.cost = eval_cost(s, inst);
  return s;
}

} // namespace

TEST_CASE("a hand-built feasible solution passes") {
  auto inst = line_instance(1000);
  Solution s;
  s.routes = {Route{{1, 2}}, Route{{3}}};
  s.plans = {{0}, {0}};
  s = costed(s, inst);
  CHECK(validate_solution(s, inst).empty());
}

TEST_CASE("empty solution on an instance without customers") {
  auto inst = make_instance({{0, 0, 0}});
  CHECK(validate_solution(Solution{}, inst).empty());
}

TEST_CASE("capacity") {
  auto inst = line_instance(1000);
  Solution s;
  s.routes = {Route{{1, 2, 3}}}; // load 6 > Q = 5
  s.plans = {{0}};
  s = costed(s, inst);
  auto report = validate_solution(s, inst);
  CHECK(has(report, "capacity"));
  CHECK(report.size() == 1);
}

TEST_CASE("visit once") {
  auto inst = line_instance(1000);
  Solution s;
  s.routes = {Route{{1, 2}}};
  s.plans = {{0}};
  s = costed(s, inst);
  CHECK(has(validate_solution(s, inst), "visit-once"));

  s.routes = {Route{{1, 2}}, Route{{2, 3}}};
  s.plans = {{0}, {0}};
  s = costed(s, inst);
  CHECK(has(validate_solution(s, inst), "visit-once"));
}

TEST_CASE("MTEV battery goes negative without charging") {
  auto inst = line_instance(500); // route 0-300-0 needs 600
  Solution s;
  s.routes = {Route{{3}}, Route{{1, 2}}};
  s.plans = {{0}, {0}};
  s = costed(s, inst);
  auto report = validate_solution(s, inst);
  CHECK(has(report, "mtev-battery"));
}

TEST_CASE("charged edge without a covering tour job") {
  auto inst = line_instance(500);
  Solution s;
  s.routes = {Route{{3}}, Route{{1, 2}}};
  s.plans = {{0b10}, {0}};
  s = costed(s, inst);
  auto report = validate_solution(s, inst);
  CHECK(has(report, "sync"));
  CHECK_FALSE(has(report, "mtev-battery"));

  // adding the tour fixes it
  auto jobs = build_jobs(s.routes, s.plans, inst);
  auto tour = tour_feasible(jobs, inst);
  REQUIRE(tour.feasible);
  s.tours = {tour.tour};
  s = costed(s, inst);
  CHECK(validate_solution(s, inst).empty());

  // a job covered twice is also a sync violation
  s.tours.push_back(tour.tour);
  s = costed(s, inst);
  CHECK(has(validate_solution(s, inst), "sync"));
}

TEST_CASE("MCT battery and timing") {
  auto inst = line_instance(500);
  Solution s;
  s.routes = {Route{{3}}, Route{{1, 2}}};
  s.plans = {{0b10}, {0}};
  auto jobs = build_jobs(s.routes, s.plans, inst);
  s.tours = {MctTour{jobs, {}, {}}};
  s = costed(s, inst);
  REQUIRE(validate_solution(s, inst).empty());

  // 300 deadhead + 2*300 ride + 0 home = 900 > 800
  inst.params.mct_battery = 800;
  CHECK(has(validate_solution(s, inst), "mct-battery"));

  // a truck cannot wait for an edge the MTEV has already left
  inst.params.mct_battery = 5000;
  s.plans = {{0b11}, {0}};
  jobs = build_jobs(s.routes, s.plans, inst);
  std::reverse(jobs.begin(), jobs.end());
  s.tours = {MctTour{jobs, {}, {}}};
  s = costed(s, inst);
  auto report = validate_solution(s, inst);
  CHECK((has(report, "mct-time") || has(report, "mct-structure")));
}

TEST_CASE("stated cost must match") {
  auto inst = line_instance(1000);
  Solution s;
  s.routes = {Route{{1, 2}}, Route{{3}}};
  s.plans = {{0}, {0}};
  s = costed(s, inst);
  s.cost.total += 1;
  CHECK(has(validate_solution(s, inst), "objective"));
}

TEST_CASE("plan mask beyond the route length") {
  auto inst = line_instance(1000);
  Solution s;
  s.routes = {Route{{1, 2}}, Route{{3}}};
  s.plans = {{0b1000}, {0}};
  s = costed(s, inst);
  CHECK_FALSE(validate_solution(s, inst).empty());
}

TEST_CASE("solver output validates") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto p = default_params();
    p.mtev_battery = 1100;
    auto inst = wmc::test::generated(15, seed, p);
    SearchConfig cfg;
    cfg.seed = seed;
    cfg.max_nonimprove = 100;
    auto sol = lns_run(inst, cfg);
    auto report = validate_solution(sol, inst);
    CAPTURE(seed);
    CHECK(report.empty());
    for (const auto& v : report) {
      MESSAGE(to_string(v));
    }
  }
}
