#include <algorithm>
#include <sstream>

#include <doctest.h>

#include "helpers.h"
#include "wmc/lns.h"
#include "wmc/milp_export.h"
#include "wmc/oracle.h"

using namespace wmc;
using wmc::test::generated;
using wmc::test::make_instance;

namespace {

const LpRow* row(const LpModel& m, const std::string& name) {
  for (const auto& r : m.rows) {
    if (r.name == name) {
      return &r;
    }
  }
  return nullptr;
}

} // namespace

TEST_CASE("one customer with a single vehicle forces its visit") {
  auto inst = make_instance({{0, 0, 0}, {30, 40, 2}});
  LpOptions opt;
  opt.k_max = 1;
  opt.b_max = 0;
  const auto text = export_lp(inst, opt);
  auto model = parse_lp(text);
  const auto* visit = row(model, "visit_1");
  REQUIRE(visit != nullptr);
  CHECK(visit->sense == Sense::Eq);
  CHECK(visit->rhs == 1);
  REQUIRE(visit->terms.size() == 1);
  CHECK(visit->terms[0] == LpTerm{1, "y_1_1"});
  REQUIRE(model.find("y_1_1") != nullptr);
  CHECK(model.find("y_1_1")->kind == VarKind::Binary);

  for (const char* section : {"Minimize", "Subject To", "Bounds", "Binaries", "End"}) {
    CHECK(text.find(section) != std::string::npos);
  }
}

TEST_CASE("objective carries the cost weights verbatim") {
  auto p = default_params();
  p.cost_dist = 3;
  p.cost_mtev = 1234;
  p.cost_mct = 5678;
  auto inst = generated(3, 1, p);
  const auto text = export_lp(inst);
  CHECK(text.find("obj: 3 D + 1234 K + 5678 B") != std::string::npos);
}

TEST_CASE("export round trips through the parser") {
  for (int n : {1, 3, 5}) {
    auto p = default_params();
    p.mtev_battery = 900;
    auto inst = generated(n, 2, p);
    const auto model = build_lp_model(inst);
    const auto text = to_lp_text(model);
    const auto back = parse_lp(text);
    CHECK(back.rows.size() == model.rows.size());
    CHECK(back.vars.size() == model.vars.size());
    CHECK(back.objective == model.objective);
    const auto again = to_lp_text(back);
    CHECK(again.substr(again.find("Minimize")) == text.substr(text.find("Minimize")));

    // every referenced variable is declared
    for (const auto& r : model.rows) {
      for (const auto& t : r.terms) {
        CHECK(model.find(t.var) != nullptr);
      }
    }
    for (const auto& v : model.vars) {
      CHECK(v.lo <= v.hi);
    }
  }
}

TEST_CASE("defaults and limits") {
  auto inst = generated(4, 3);
  auto model = build_lp_model(inst);
  int demand = inst.total_demand();
  CHECK(model.k_max == (demand + inst.params.capacity - 1) / inst.params.capacity + 3);
  CHECK(model.b_max == model.k_max);
  Distance sum = 0;
  for (int i = 0; i <= 4; ++i) {
    for (int j = 0; j <= 4; ++j) {
      sum += inst.tau(i, j);
    }
  }
  CHECK(model.big_m >= 2.0 * double(sum));

  CHECK_THROWS_AS(build_lp_model(generated(kMaxLpCustomers + 1, 1)), InputError);
  auto p = default_params();
  p.capacity = 3;
  auto heavy = generated(6, 1, p);
  LpOptions tight;
  tight.k_max = 1;
  CHECK_THROWS_AS(build_lp_model(heavy, tight), InputError);
}

TEST_CASE("parser rejects malformed text") {
  CHECK_THROWS_AS(parse_lp("Minimize\n obj: 1 x\nSubject To\n c1: 1 x <=\nEnd\n"), InputError);
  CHECK_THROWS_AS(parse_lp("Subject To\n c1: 1 x <= 1\n"), InputError);
  auto m = parse_lp("Minimize\n obj: 2 x + 3 y\nSubject To\n c1: x + y >= 1\nBounds\n x <= 4\n"
                    "Binaries\n y\nEnd\n");
  REQUIRE(m.rows.size() == 1);
  CHECK(m.rows[0].sense == Sense::Ge);
  CHECK(m.find("x")->hi == 4);
  CHECK(m.find("y")->kind == VarKind::Binary);
}

TEST_CASE("heuristic solutions are feasible points of the model") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto p = default_params();
    p.mtev_battery = 700 + 100 * double(seed);
    auto inst = generated(5, seed, p);
    SearchConfig cfg;
    cfg.seed = seed;
    cfg.max_nonimprove = 100;
    auto sol = lns_run(inst, cfg);
    // fleet bounds must admit the solution's fleet
    LpOptions opt;
    opt.k_max = std::max(build_lp_model(inst).k_max, static_cast<int>(sol.routes.size()));
    opt.b_max = std::max(opt.k_max, static_cast<int>(sol.tours.size()));
    auto model = parse_lp(export_lp(inst, opt));
    auto point = lp_point_from_solution(model, sol, inst);
    auto bad = check_point(model, point);
    CAPTURE(seed);
    CHECK(bad.empty());
    for (const auto& b : bad) {
      MESSAGE(b);
    }
    CHECK(lp_objective(model, point) == doctest::Approx(sol.cost.total));
  }
}

TEST_CASE("the exhaustive optimum is a feasible point too") {
  auto p = default_params();
  p.mtev_battery = 900;
  auto inst = generated(4, 9, p);
  auto sol = exhaustive_solve(inst);
  auto model = build_lp_model(inst);
  auto point = lp_point_from_solution(model, sol, inst);
  CHECK(check_point(model, point).empty());
}

TEST_CASE("broken points are reported") {
  auto inst = generated(4, 5);
  SearchConfig cfg;
  cfg.max_nonimprove = 30;
  auto sol = lns_run(inst, cfg);
  auto model = build_lp_model(inst);
  auto point = lp_point_from_solution(model, sol, inst);
  REQUIRE(check_point(model, point).empty());

  auto skipped = point;
  skipped["y_1_1"] = 0;
  for (int k = 1; k <= model.k_max; ++k) {
    skipped["y_1_" + std::to_string(k)] = 0;
  }
  CHECK_FALSE(check_point(model, skipped).empty());

  auto fractional = point;
  fractional["x_0_1_1"] = 0.5;
  CHECK_FALSE(check_point(model, fractional).empty());

  auto cheap = point;
  cheap["K"] = point["K"] - 1;
  CHECK_FALSE(check_point(model, cheap).empty());

  auto unknown = point;
  unknown["nope"] = 1;
  CHECK_FALSE(check_point(model, unknown).empty());
}
