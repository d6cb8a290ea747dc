#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "wmc/bdp.h"
#include "wmc/oracle.h"

using namespace wmc;

namespace {

std::vector<std::uint64_t> masks(const std::vector<ChargePlan>& plans) {
  std::vector<std::uint64_t> out;
  for (auto p : plans) {
    out.push_back(p.mask);
  }
  std::sort(out.begin(), out.end());
  return out;
}

BdpInput random_input(std::mt19937_64& rng, int max_edges) {
  BdpInput in;
  const int m = std::uniform_int_distribution<int>(1, max_edges)(rng);
  std::uniform_int_distribution<int> tau(1, 50);
  for (int e = 0; e < m; ++e) {
    in.taus.push_back(tau(rng));
  }
  const double total = std::accumulate(in.taus.begin(), in.taus.end(), 0.0);
  in.capacity = std::uniform_real_distribution<double>(0.2, 1.1)(rng) * total;
  in.capacity = std::max(1.0, std::round(in.capacity));
  const double gammas[] = {1.5, 2.0, 3.0};
  in.gamma = gammas[std::uniform_int_distribution<int>(0, 2)(rng)];
  return in;
}

} // namespace

TEST_CASE("required_remaining is a suffix sum") {
  std::vector<Distance> a{3, 4, 5};
  CHECK(required_remaining(a) == std::vector<Distance>{9, 5, 0});
  std::vector<Distance> b{7};
  CHECK(required_remaining(b) == std::vector<Distance>{0});
  std::vector<Distance> c{1, 1, 1, 1};
  CHECK(required_remaining(c) == std::vector<Distance>{3, 2, 1, 0});
}

TEST_CASE("simulate_plan") {
  auto sim = simulate_plan({{4, 4}, 10, 2}, {0});
  CHECK(sim.feasible);
  CHECK(sim.trace == std::vector<double>{6, 2});

  sim = simulate_plan({{6, 6}, 10, 2}, {0b01});
  CHECK(sim.feasible);
  CHECK(sim.trace == std::vector<double>{10, 4});

  sim = simulate_plan({{12}, 10, 2}, {0});
  CHECK_FALSE(sim.feasible);
  CHECK(sim.trace.front() == -2);

  // charging adds (γ-1)τ, capped at P
  sim = simulate_plan({{5, 10}, 20, 1.5}, {0b10});
  CHECK(sim.trace == std::vector<double>{15, 20});
}

TEST_CASE("bdp small examples") {
  CHECK(masks(bdp_charge_plans({{4, 4}, 10, 2})) == std::vector<std::uint64_t>{0});
  CHECK(masks(bdp_charge_plans({{6, 6}, 10, 2})) == std::vector<std::uint64_t>{0b01, 0b10});
  CHECK(masks(bdp_charge_plans({{12}, 10, 2})) == std::vector<std::uint64_t>{0b1});
  for (const BdpInput& in : {BdpInput{{4, 4}, 10, 2}, BdpInput{{6, 6}, 10, 2},
                             BdpInput{{12}, 10, 2}}) {
    CHECK(masks(bdp_reference_2d(in)) == masks(naive_charge_plans(in)));
    CHECK(masks(bdp_charge_plans(in)) == masks(naive_charge_plans(in)));
  }
}

TEST_CASE("route that cannot be completed yields no plans") {
  // γ < 1: even a charged edge drains (1-γ)τ
  CHECK(bdp_charge_plans({{50}, 20, 0.5}).empty());
  CHECK(naive_charge_plans({{50}, 20, 0.5}).empty());
  CHECK(bdp_charge_plans({{30, 30}, 20, 0.5}).empty());
  // γ = 1: a charged edge holds the level, so it is the only way through
  CHECK(masks(bdp_charge_plans({{30, 5}, 20, 1.0})) == std::vector<std::uint64_t>{0b01});
  CHECK(masks(naive_charge_plans({{30, 5}, 20, 1.0})) == std::vector<std::uint64_t>{0b01});
}

TEST_CASE("prune_supersets") {
  CHECK(masks(prune_supersets({{0b10101}, {0b00101}})) == std::vector<std::uint64_t>{0b00101});
  CHECK(prune_supersets({}).empty());
  CHECK(masks(prune_supersets({{0b01}, {0b10}})) == std::vector<std::uint64_t>{0b01, 0b10});
  CHECK(masks(prune_supersets({{0b11}, {0b11}, {0b111}})) == std::vector<std::uint64_t>{0b11});
  CHECK(masks(prune_supersets({{0b110}, {0}, {0b1}})) == std::vector<std::uint64_t>{0});
}

TEST_CASE("bdp agrees with the oracle and the 2-D table on random inputs") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    auto in = random_input(rng, 14);
    CAPTURE(i);
    const auto got = masks(bdp_charge_plans(in));
    CHECK(got == masks(naive_charge_plans(in)));
    CHECK(got == masks(bdp_reference_2d(in)));
  }
}

TEST_CASE("bdp output is a feasible antichain and expansion is bounded") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    auto in = random_input(rng, 16);
    auto res = run_bdp(in);
    CHECK(res.expanded <= (std::uint64_t{1} << in.taus.size()));
    for (auto p : res.plans) {
      CHECK(simulate_plan(in, p).feasible);
      CHECK(p.mask < (std::uint64_t{1} << in.taus.size()));
      for (auto q : res.plans) {
        if (p != q) {
          CHECK_FALSE(p.subset_of(q));
        }
      }
    }
  }
}

TEST_CASE("more battery never loses feasibility") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    auto in = random_input(rng, 12);
    const bool feasible = !bdp_charge_plans(in).empty();
    in.capacity += 10;
    if (feasible) {
      CHECK_FALSE(bdp_charge_plans(in).empty());
    }
    in.capacity = static_cast<double>(std::accumulate(in.taus.begin(), in.taus.end(), Distance{0}));
    CHECK(masks(bdp_charge_plans(in)) == std::vector<std::uint64_t>{0});
  }
}

TEST_CASE("input checks") {
  CHECK_THROWS_AS(BdpInput{}.check(), std::invalid_argument);
  BdpInput big;
  big.taus.assign(kMaxBdpEdges + 1, 1);
  big.capacity = 10;
  big.gamma = 2;
  CHECK_THROWS_AS(big.check(), std::invalid_argument);
  big.taus.resize(kMaxBdpEdges);
  CHECK_NOTHROW(big.check());
  big.taus.assign(19, 1);
  CHECK_THROWS(bdp_reference_2d(big));
}
