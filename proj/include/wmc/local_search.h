#pragma once

#include <array>
#include <string>
#include <vector>

#include "wmc/core.h"
#include "wmc/evaluator.h"

namespace wmc {

enum class LsMove { TwoOpt, OrOpt, TwoOptStar, Relocate, Exchange, CrossExchange };

inline constexpr std::array kLsMoves{LsMove::TwoOpt,   LsMove::OrOpt,    LsMove::TwoOptStar,
                                     LsMove::Relocate, LsMove::Exchange, LsMove::CrossExchange};

std::string to_string(LsMove move);

// Applies the first neighbour of `move` that lowers κ_t·dist + κ_v·K and,
// after full re-costing, the objective. Returns false at a local optimum.
bool improve_once(LsMove move, std::vector<Route>& routes, Evaluator& eval);

// Cycles the six moves until none improves.
std::vector<Route> local_search(std::vector<Route> routes, Evaluator& eval);
Solution local_search(const Solution& solution, const Instance& instance,
                      const CostingOptions& costing = {});

} // namespace wmc
