#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "wmc/core.h"
#include "wmc/evaluator.h"

namespace wmc {

enum class RemovalOp { Random, Distance, String, Worst, Shaw };
enum class InsertionOp { Random, Greedy, Sequential, Regret2, Regret3 };

inline constexpr std::array kRemovalOps{RemovalOp::Random, RemovalOp::Distance,
                                        RemovalOp::String, RemovalOp::Worst, RemovalOp::Shaw};
inline constexpr std::array kInsertionOps{InsertionOp::Random, InsertionOp::Greedy,
                                          InsertionOp::Sequential, InsertionOp::Regret2,
                                          InsertionOp::Regret3};

std::string to_string(RemovalOp op);
std::string to_string(InsertionOp op);

using Rng = std::mt19937_64;

struct SearchConfig {
  std::uint64_t seed = 1;
  int max_nonimprove = 5000;
  double destroy_min = 0.1;
  double destroy_max = 0.3;
  CostingOptions costing;
  bool local_search = true;
  bool charge_pair = true; // CR/CI phase
  std::array<bool, 5> removal_enabled{true, true, true, true, true};
  std::array<bool, 5> insertion_enabled{true, true, true, true, true};
};

struct OperatorStats {
  std::string op;
  std::uint64_t usage = 0;
  std::uint64_t updates = 0; // candidate accepted as new current
  double total_time_us = 0.0;
};

struct SearchResult {
  Solution best;
  bool exact = true; // MCT count of `best` proven minimal
  int iterations = 0;
  std::vector<double> best_trajectory; // best objective after every iteration
  std::vector<OperatorStats> stats;    // removal ops, insertion ops, CR/CI, LS
};

struct Partial {
  std::vector<Route> routes;
  std::vector<NodeId> removed; // in removal order
};

// Nearest-neighbour construction honouring capacity and charge feasibility.
// Throws Infeasible if a customer cannot be served even on its own route.
std::vector<Route> initial_routes(Evaluator& eval);
Solution initial_solution(const Instance& instance, const CostingOptions& costing = {});

// q in [max(1, floor(lo*n)), max(2, floor(hi*n))], capped at n.
int draw_removal_count(int customers, double lo, double hi, Rng& rng);

// Removes exactly q customers; routes left empty are dropped.
Partial destroy(const std::vector<Route>& routes, RemovalOp op, int q, Rng& rng,
                Evaluator& eval);

// Reinserts every removed customer respecting Q, opening routes when needed.
std::vector<Route> repair(Partial partial, InsertionOp op, Rng& rng, Evaluator& eval);

// Regret of one customer over its best insertion per route (a fresh route
// counts as one option): Σ_{h=2..k} (cost_h - cost_1).
double insertion_regret(const std::vector<Route>& routes, NodeId customer, int k,
                        const Instance& instance);

// Paired charge removal / charge insertion: drop the highest-energy customer
// from each route that needs charging and reinsert it where the full
// objective is lowest, including on a new route.
std::vector<Route> charge_removal_insertion(const std::vector<Route>& routes, Rng& rng,
                                            Evaluator& eval);

SearchResult lns_search(const Instance& instance, const SearchConfig& config,
                        std::shared_ptr<CostCache> cache = nullptr);
Solution lns_run(const Instance& instance, const SearchConfig& config);

std::string stats_csv(const std::vector<OperatorStats>& stats);

} // namespace wmc
