#include <algorithm>

#include <doctest.h>

#include "helpers.h"
#include "wmc/lns.h"
#include "wmc/local_search.h"
#include "wmc/oracle.h"
#include "wmc/validate.h"

using namespace wmc;
using wmc::test::generated;
using wmc::test::make_instance;

namespace {

std::vector<NodeId> customers_of(const std::vector<Route>& routes) {
  std::vector<NodeId> out;
  for (const auto& r : routes) {
    out.insert(out.end(), r.visits.begin(), r.visits.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Distance total_length(const std::vector<Route>& routes, const Instance& inst) {
  Distance d = 0;
  for (const auto& r : routes) {
    d += route_length(r, inst);
  }
  return d;
}

// Random customer order cut into capacity-feasible routes.
std::vector<Route> random_routes(const Instance& inst, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<NodeId> order;
  for (int v = 1; v <= inst.customer_count(); ++v) {
    order.push_back(v);
  }
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Route> routes(1);
  int load = 0;
  for (NodeId v : order) {
    if (load + inst.demand(v) > inst.params.capacity) {
      routes.emplace_back();
      load = 0;
    }
    routes.back().visits.push_back(v);
    load += inst.demand(v);
  }
  return routes;
}

} // namespace

TEST_CASE("move names") {
  CHECK(to_string(LsMove::TwoOpt) == "2-opt");
  CHECK(to_string(LsMove::CrossExchange) == "cross-exchange");
}

TEST_CASE("2-opt uncrosses a route") {
  auto inst = make_instance({{0, 0, 0}, {10, 0, 1}, {0, 1, 1}, {10, 1, 1}});
  Evaluator eval(inst);
  std::vector<Route> routes{Route{{1, 2, 3}}};
  const Distance before = total_length(routes, inst);
  REQUIRE(improve_once(LsMove::TwoOpt, routes, eval));
  CHECK(total_length(routes, inst) < before);
  CHECK(customers_of(routes) == std::vector<NodeId>{1, 2, 3});
}

TEST_CASE("or-opt moves a pair") {
  // the pair 3,4 sits far from its neighbours
  auto inst = make_instance({{0, 0, 0}, {100, 0, 1}, {200, 0, 1}, {0, 100, 1}, {0, 200, 1}});
  Evaluator eval(inst);
  std::vector<Route> routes{Route{{1, 3, 4, 2}}};
  const double before = eval.objective(routes);
  REQUIRE(improve_once(LsMove::OrOpt, routes, eval));
  CHECK(eval.objective(routes) < before);
  CHECK(customers_of(routes) == std::vector<NodeId>{1, 2, 3, 4});
}

TEST_CASE("relocate can empty a route") {
  auto inst = make_instance({{0, 0, 0}, {100, 0, 1}, {110, 0, 1}});
  Evaluator eval(inst);
  std::vector<Route> routes{Route{{1}}, Route{{2}}};
  REQUIRE(improve_once(LsMove::Relocate, routes, eval));
  CHECK(routes.size() == 1);
}

TEST_CASE("exchange moves respect capacity") {
  auto p = default_params();
  p.capacity = 3;
  // swapping 1 and 3 would shorten both routes but overload one of them
  auto inst = make_instance({{0, 0, 0}, {100, 0, 1}, {0, 100, 2}, {0, 110, 3}, {100, 10, 1}}, p);
  Evaluator eval(inst);
  std::vector<Route> routes{Route{{1, 2}}, Route{{3}}, Route{{4}}};
  auto out = local_search(routes, eval);
  for (const auto& r : out) {
    CHECK(route_load(r, inst) <= 3);
  }
  CHECK(eval.objective(out) <= eval.objective(routes));
}

TEST_CASE("local optimum of a tiny instance is left alone") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto inst = generated(5, seed);
    auto opt = exhaustive_solve(inst);
    Evaluator eval(inst);
    auto routes = opt.routes;
    for (auto move : kLsMoves) {
      CHECK_FALSE(improve_once(move, routes, eval));
    }
    CHECK(routes == opt.routes);
  }
}

TEST_CASE("single-customer routes only improve") {
  auto inst = generated(8, 3);
  Evaluator eval(inst);
  std::vector<Route> routes;
  for (NodeId v = 1; v <= 8; ++v) {
    routes.push_back(Route{{v}});
  }
  auto out = local_search(routes, eval);
  CHECK(eval.objective(out) < eval.objective(routes));
  CHECK(customers_of(out) == customers_of(routes));
}

TEST_CASE("local search properties on random solutions") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto p = default_params();
    p.mtev_battery = 1000 + 100 * double(seed);
    auto inst = generated(20, seed, p);
    Evaluator eval(inst);
    auto start = random_routes(inst, seed);
    const double before = eval.objective(start);

    for (auto move : kLsMoves) {
      auto routes = start;
      const bool moved = improve_once(move, routes, eval);
      CAPTURE(to_string(move));
      CHECK(customers_of(routes) == customers_of(start));
      for (const auto& r : routes) {
        CHECK(route_load(r, inst) <= inst.params.capacity);
        CHECK_FALSE(r.visits.empty());
      }
      if (moved) {
        CHECK(eval.objective(routes) < before);
      } else {
        CHECK(routes == start);
      }
    }

    auto once = local_search(start, eval);
    CHECK(eval.objective(once) <= before);
    CHECK(customers_of(once) == customers_of(start));
    CHECK(local_search(once, eval) == once);
  }
}

TEST_CASE("solution wrapper never returns something worse") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto p = default_params();
    p.mtev_battery = 1100;
    auto inst = generated(15, seed, p);
    Evaluator eval(inst);
    auto start = eval.materialize(random_routes(inst, seed));
    auto out = local_search(start, inst);
    CHECK(out.cost.total <= start.cost.total + 1e-6);
    CHECK(validate_solution(out, inst).empty());
    auto again = local_search(out, inst);
    CHECK(again.routes == out.routes);
  }
}
