#include <stdexcept>

#include <doctest.h>

#include "helpers.h"
#include "wmc/oracle.h"
#include "wmc/validate.h"

using namespace wmc;
using wmc::test::make_instance;

TEST_CASE("naive plans") {
  auto plans = naive_charge_plans({{6, 6}, 10, 2});
  REQUIRE(plans.size() == 2);
  CHECK(plans[0].mask == 0b01);
  CHECK(plans[1].mask == 0b10);

  plans = naive_charge_plans({{3, 4, 5}, 12, 2});
  REQUIRE(plans.size() == 1);
  CHECK(plans[0].mask == 0);

  CHECK(naive_charge_plans({{25, 2}, 10, 0.5}).empty());

  BdpInput big;
  big.taus.assign(kMaxNaiveEdges + 1, 1);
  big.capacity = 5;
  big.gamma = 2;
  CHECK_THROWS_AS(naive_charge_plans(big), std::invalid_argument);
}

TEST_CASE("gap") {
  CHECK(gap(6173, 6173) == doctest::Approx(0.0));
  CHECK(gap(110, 100) == doctest::Approx(10.0));
  CHECK(gap(90, 100) == doctest::Approx(-10.0));
  CHECK_THROWS_AS(gap(1, 0), std::invalid_argument);
}

TEST_CASE("exhaustive solve with one customer") {
  auto p = default_params();
  auto inst = make_instance({{0, 0, 0}, {300, 400, 1}}, p);
  auto sol = exhaustive_solve(inst);
  CHECK(sol.cost.total == doctest::Approx(p.cost_dist * 1000 + p.cost_mtev));
  CHECK(sol.tours.empty());

  inst.params.mtev_battery = 800; // 1000 needed
  sol = exhaustive_solve(inst);
  CHECK(sol.tours.size() == 1);
  CHECK(sol.cost.total == doctest::Approx(p.cost_dist * 1000 + p.cost_mtev + p.cost_mct));
  CHECK(validate_solution(sol, inst).empty());
}

TEST_CASE("exhaustive solve merges two customers exactly when it pays") {
  for (double spread : {50.0, 400.0, 900.0}) {
    for (double kv : {100.0, 1000.0}) {
      auto p = default_params();
      p.cost_mtev = kv;
      p.mtev_battery = 1e5; // no charging either way
      // customers mirrored across the vertical axis through the depot
      auto inst = make_instance({{0, 0, 0}, {-spread / 2, 500, 1}, {spread / 2, 500, 1}}, p);
      const double d01 = double(inst.tau(0, 1));
      const double d02 = double(inst.tau(0, 2));
      const double d12 = double(inst.tau(1, 2));
      const double merged = p.cost_dist * (d01 + d12 + d02) + kv;
      const double apart = p.cost_dist * 2 * (d01 + d02) + 2 * kv;
      auto sol = exhaustive_solve(inst);
      CAPTURE(spread);
      CAPTURE(kv);
      CHECK(sol.cost.total == doctest::Approx(std::min(merged, apart)));
      CHECK(sol.routes.size() == (merged <= apart ? 1U : 2U));
    }
  }
}

TEST_CASE("exhaustive solve output validates") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto p = default_params();
    p.mtev_battery = 1200;
    auto inst = wmc::test::generated(5, seed, p);
    auto sol = exhaustive_solve(inst);
    CAPTURE(seed);
    CHECK(validate_solution(sol, inst).empty());
    CHECK(sol.cost.total == doctest::Approx(eval_cost(sol, inst).total));
  }
  CHECK_THROWS(exhaustive_solve(wmc::test::generated(kMaxExhaustiveCustomers + 1, 1)));
}

TEST_CASE("exhaustive tour cover") {
  auto inst = make_instance({{0, 0, 0}, {10, 0, 1}});
  CHECK(exhaustive_min_tours({}, inst) == 0);
  CHECK(exhaustive_min_mct({Route{{1}}}, inst) == 0);
}
