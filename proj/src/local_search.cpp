#include "wmc/local_search.h"

#include <algorithm>
#include <optional>

#include "wmc/bdp.h"

namespace wmc {

std::string to_string(LsMove move) {
  switch (move) {
  case LsMove::TwoOpt:
    return "2-opt";
  case LsMove::OrOpt:
    return "or-opt";
  case LsMove::TwoOptStar:
    return "2-opt*";
  case LsMove::Relocate:
    return "relocate";
  case LsMove::Exchange:
    return "exchange";
  case LsMove::CrossExchange:
    return "cross-exchange";
  }
  return "?";
}

namespace {

constexpr double kImproveEps = 1e-7;

struct Change {
  std::size_t index;
  Route route;
};

class MoveScanner {
public:
  MoveScanner(std::vector<Route>& routes, Evaluator& eval)
      : routes_(routes), eval_(eval), inst_(eval.instance()),
        current_(eval.objective(routes)) {}

  // Applies the change set if it passes the distance filter and the full
  // objective; returns true when applied.
  bool offer(std::initializer_list<Change> changes) {
    const auto& p = inst_.params;
    double delta = 0.0;
    for (const auto& c : changes) {
      if (route_load(c.route, inst_) > p.capacity ||
          c.route.edge_count() > kMaxBdpEdges) {
        return false;
      }
      const Distance before = route_length(routes_[c.index], inst_);
      const Distance after = c.route.visits.empty() ? 0 : route_length(c.route, inst_);
      delta += p.cost_dist * static_cast<double>(after - before);
      if (c.route.visits.empty()) {
        delta -= p.cost_mtev;
      }
    }
    if (delta >= -kImproveEps) {
      return false;
    }
    std::vector<Route> next;
    next.reserve(routes_.size());
    for (std::size_t r = 0; r < routes_.size(); ++r) {
      const Route* use = &routes_[r];
      for (const auto& c : changes) {
        if (c.index == r) {
          use = &c.route;
        }
      }
      if (!use->visits.empty()) {
        next.push_back(*use);
      }
    }
    if (eval_.objective(next) < current_ - kImproveEps) {
      routes_ = std::move(next);
      return true;
    }
    return false;
  }

  std::vector<Route>& routes() { return routes_; }

private:
  std::vector<Route>& routes_;
  Evaluator& eval_;
  const Instance& inst_;
  double current_;
};

using Visits = std::vector<NodeId>;

Route make_route(Visits v) { return Route{std::move(v)}; }

Visits slice(const Visits& v, std::size_t from, std::size_t to) {
  return Visits(v.begin() + static_cast<std::ptrdiff_t>(from),
                v.begin() + static_cast<std::ptrdiff_t>(to));
}

Visits concat(Visits a, const Visits& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

bool two_opt(MoveScanner& s) {
  auto& routes = s.routes();
  for (std::size_t r = 0; r < routes.size(); ++r) {
    const auto& v = routes[r].visits;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        Visits w = v;
        std::reverse(w.begin() + static_cast<std::ptrdiff_t>(i),
                     w.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        if (s.offer({{r, make_route(std::move(w))}})) {
          return true;
        }
      }
    }
  }
  return false;
}

bool or_opt(MoveScanner& s) {
  auto& routes = s.routes();
  for (std::size_t r = 0; r < routes.size(); ++r) {
    const Visits v = routes[r].visits;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const Visits pair = slice(v, i, i + 2);
      const Visits rest = concat(slice(v, 0, i), slice(v, i + 2, v.size()));
      // Within the same route.
      for (std::size_t p = 0; p <= rest.size(); ++p) {
        if (p == i) {
          continue;
        }
        Visits w = concat(concat(slice(rest, 0, p), pair), slice(rest, p, rest.size()));
        if (s.offer({{r, make_route(std::move(w))}})) {
          return true;
        }
      }
      // Into another route.
      for (std::size_t o = 0; o < routes.size(); ++o) {
        if (o == r) {
          continue;
        }
        const Visits& target = routes[o].visits;
        for (std::size_t p = 0; p <= target.size(); ++p) {
          Visits w = concat(concat(slice(target, 0, p), pair), slice(target, p, target.size()));
          if (s.offer({{r, make_route(rest)}, {o, make_route(std::move(w))}})) {
            return true;
          }
        }
      }
    }
  }
  return false;
}

bool two_opt_star(MoveScanner& s) {
  auto& routes = s.routes();
  for (std::size_t a = 0; a < routes.size(); ++a) {
    for (std::size_t b = a + 1; b < routes.size(); ++b) {
      const Visits va = routes[a].visits;
      const Visits vb = routes[b].visits;
      for (std::size_t i = 0; i <= va.size(); ++i) {
        for (std::size_t j = 0; j <= vb.size(); ++j) {
          if ((i == 0 && j == 0) || (i == va.size() && j == vb.size())) {
            continue;
          }
          Visits na = concat(slice(va, 0, i), slice(vb, j, vb.size()));
          Visits nb = concat(slice(vb, 0, j), slice(va, i, va.size()));
          if (s.offer({{a, make_route(std::move(na))}, {b, make_route(std::move(nb))}})) {
            return true;
          }
        }
      }
    }
  }
  return false;
}

bool relocate(MoveScanner& s) {
  auto& routes = s.routes();
  for (std::size_t a = 0; a < routes.size(); ++a) {
    const Visits va = routes[a].visits;
    for (std::size_t i = 0; i < va.size(); ++i) {
      const Visits rest = concat(slice(va, 0, i), slice(va, i + 1, va.size()));
      for (std::size_t b = 0; b < routes.size(); ++b) {
        if (b == a) {
          continue;
        }
        const Visits vb = routes[b].visits;
        for (std::size_t p = 0; p <= vb.size(); ++p) {
          Visits w = vb;
          w.insert(w.begin() + static_cast<std::ptrdiff_t>(p), va[i]);
          if (s.offer({{a, make_route(rest)}, {b, make_route(std::move(w))}})) {
            return true;
          }
        }
      }
    }
  }
  return false;
}

bool exchange(MoveScanner& s) {
  auto& routes = s.routes();
  for (std::size_t a = 0; a < routes.size(); ++a) {
    for (std::size_t b = a + 1; b < routes.size(); ++b) {
      const Visits va = routes[a].visits;
      const Visits vb = routes[b].visits;
      for (std::size_t i = 0; i < va.size(); ++i) {
        for (std::size_t j = 0; j < vb.size(); ++j) {
          Visits na = va;
          Visits nb = vb;
          std::swap(na[i], nb[j]);
          if (s.offer({{a, make_route(std::move(na))}, {b, make_route(std::move(nb))}})) {
            return true;
          }
        }
      }
    }
  }
  return false;
}

bool cross_exchange(MoveScanner& s) {
  auto& routes = s.routes();
  for (std::size_t a = 0; a < routes.size(); ++a) {
    for (std::size_t b = a + 1; b < routes.size(); ++b) {
      const Visits va = routes[a].visits;
      const Visits vb = routes[b].visits;
      for (std::size_t i = 0; i + 1 < va.size(); ++i) {
        for (std::size_t j = 0; j + 1 < vb.size(); ++j) {
          Visits na = va;
          Visits nb = vb;
          std::swap(na[i], nb[j]);
          std::swap(na[i + 1], nb[j + 1]);
          if (s.offer({{a, make_route(std::move(na))}, {b, make_route(std::move(nb))}})) {
            return true;
          }
        }
      }
    }
  }
  return false;
}

} // namespace

bool improve_once(LsMove move, std::vector<Route>& routes, Evaluator& eval) {
  MoveScanner s(routes, eval);
  switch (move) {
  case LsMove::TwoOpt:
    return two_opt(s);
  case LsMove::OrOpt:
    return or_opt(s);
  case LsMove::TwoOptStar:
    return two_opt_star(s);
  case LsMove::Relocate:
    return relocate(s);
  case LsMove::Exchange:
    return exchange(s);
  case LsMove::CrossExchange:
    return cross_exchange(s);
  }
  return false;
}

std::vector<Route> local_search(std::vector<Route> routes, Evaluator& eval) {
  bool improved = true;
  while (improved) {
    improved = false;
    for (const auto move : kLsMoves) {
      while (improve_once(move, routes, eval)) {
        improved = true;
      }
    }
  }
  return routes;
}

Solution local_search(const Solution& solution, const Instance& instance,
                      const CostingOptions& costing) {
  Evaluator eval(instance, costing);
  Solution before = eval.materialize(solution.routes);
  Solution after = eval.materialize(local_search(solution.routes, eval));
  // Moves are judged with the search budget; keep the input if the final
  // costing disagrees.
  return after.cost.total <= before.cost.total ? after : before;
}

} // namespace wmc
