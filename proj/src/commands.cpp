#include "wmc/commands.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <chrono>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "wmc/bdp.h"
#include "wmc/io.h"
#include "wmc/oracle.h"
#include "wmc/validate.h"

namespace wmc {

Params default_params() {
  Params p;
  p.capacity = 10;
  p.mtev_battery = 2000;
  p.mct_battery = 5000;
  p.gamma = 2;
  p.phi = 1;
  p.cost_dist = 1;
  p.cost_mtev = 1000;
  p.cost_mct = 1000;
  return p;
}

Instance generate_instance(const GenOptions& options) {
  if (options.customers < 1) {
    throw InputError("generator needs at least one customer");
  }
  if (options.coord_max < 0) {
    throw InputError("negative coordinate bound");
  }
  Rng rng(options.seed);
  std::uniform_int_distribution<int> coord(0, options.coord_max);
  std::uniform_int_distribution<int> demand(1, 3);
  Instance inst;
  inst.name = options.name.empty()
                  ? "gen-n" + std::to_string(options.customers) + "-s" + std::to_string(options.seed)
                  : options.name;
  inst.params = options.params;
  for (int i = 0; i <= options.customers; ++i) {
    Node node;
    node.id = i;
    node.x = coord(rng);
    node.y = coord(rng);
    node.demand = i == 0 ? 0 : demand(rng);
    inst.nodes.push_back(node);
  }
  inst.dist = dist_from_coords(inst.nodes);
  inst.check();
  return inst;
}

SolveSummary solve_instance(const Instance& instance, const SolveOptions& options) {
  if (options.runs < 1) {
    throw InputError("--runs must be at least 1");
  }
  const auto t0 = std::chrono::steady_clock::now();
  auto cache = make_cost_cache();
  std::vector<Solution> results(static_cast<std::size_t>(options.runs));
  std::vector<std::vector<OperatorStats>> stats(results.size());
  std::vector<char> exact(results.size(), 1);
  std::vector<std::exception_ptr> errors(results.size());

  auto run = [&](std::size_t r) {
    try {
      SearchConfig cfg;
      cfg.seed = options.seed + r;
      cfg.max_nonimprove = options.max_nonimprove;
      cfg.local_search = options.local_search;
      cfg.costing = options.costing;
      auto res = lns_search(instance, cfg, cache);
      results[r] = std::move(res.best);
      stats[r] = std::move(res.stats);
      exact[r] = res.exact;
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };
  const auto workers = static_cast<std::size_t>(std::max(1, options.threads));
  if (workers == 1) {
    for (std::size_t r = 0; r < results.size(); ++r) {
      run(r);
    }
  } else {
    std::mutex m;
    std::size_t next = 0;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, results.size()); ++w) {
      pool.emplace_back([&] {
        while (true) {
          std::size_t r;
          {
            std::lock_guard lock(m);
            if (next == results.size()) {
              return;
            }
            r = next++;
          }
          run(r);
        }
      });
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }

  SolveSummary s;
  s.name = instance.name;
  std::size_t best = 0;
  for (std::size_t r = 0; r < results.size(); ++r) {
    s.run_objectives.push_back(results[r].cost.total);
    if (results[r].cost.total < results[best].cost.total) {
      best = r;
    }
  }
  s.best = results[best];
  s.stats = stats.front();
  for (std::size_t r = 1; r < stats.size(); ++r) {
    for (std::size_t i = 0; i < s.stats.size(); ++i) {
      s.stats[i].usage += stats[r][i].usage;
      s.stats[i].updates += stats[r][i].updates;
      s.stats[i].total_time_us += stats[r][i].total_time_us;
    }
  }
  s.w_best = s.best.cost.total;
  s.w_avg = std::accumulate(s.run_objectives.begin(), s.run_objectives.end(), 0.0) /
            static_cast<double>(s.run_objectives.size());
  s.mtevs = static_cast<int>(s.best.routes.size());
  s.mcts = static_cast<int>(s.best.tours.size());
  s.exact = exact[best];
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

std::string solve_csv_header() { return "name,W_best,W_avg,K,B,seconds"; }

std::string solve_csv_row(const SolveSummary& s) {
  std::ostringstream out;
  out << s.name << ',' << format_number(s.w_best) << ',' << format_number(s.w_avg) << ','
      << s.mtevs << ',' << s.mcts << ',';
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s.seconds);
  out << buf;
  return out.str();
}

namespace {

BdpInput random_input(std::size_t m, Rng& rng) {
  BdpInput in;
  std::uniform_int_distribution<Distance> tau(1, 50);
  Distance sum = 0;
  Distance longest = 0;
  for (std::size_t e = 0; e < m; ++e) {
    in.taus.push_back(tau(rng));
    sum += in.taus.back();
    longest = std::max(longest, in.taus.back());
  }
  const std::array<double, 3> gammas{1.5, 2.0, 3.0};
  in.gamma = gammas[std::uniform_int_distribution<std::size_t>(0, 2)(rng)];
  in.capacity = static_cast<double>(
      std::uniform_int_distribution<Distance>(longest, std::max(longest, sum / 2))(rng));
  return in;
}

template <class Fn>
double time_us(Fn&& fn) {
  // Repeat short calls so the clock resolution does not dominate.
  using Clock = std::chrono::steady_clock;
  int reps = 0;
  const auto t0 = Clock::now();
  auto t1 = t0;
  do {
    fn();
    ++reps;
    t1 = Clock::now();
  } while (t1 - t0 < std::chrono::microseconds(200));
  return std::chrono::duration<double, std::micro>(t1 - t0).count() / reps;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::ostream* open_out(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    return &fallback;
  }
  file.open(path);
  if (!file) {
    throw std::runtime_error("cannot write " + path);
  }
  return &file;
}

} // namespace

std::vector<BenchRow> bench_bdp(int l_max, int samples, std::uint64_t seed) {
  if (l_max < 2 || l_max > static_cast<int>(kMaxNaiveEdges)) {
    throw InputError("bench-bdp: l_max must be in [2, " + std::to_string(kMaxNaiveEdges) + "]");
  }
  if (samples < 1) {
    throw InputError("bench-bdp: samples must be positive");
  }
  Rng rng(seed);
  std::vector<BenchRow> rows;
  for (int L = 2; L <= l_max; ++L) {
    BenchRow row;
    row.edges = L;
    std::vector<double> bdp_t;
    std::vector<double> naive_t;
    for (int s = 0; s < samples; ++s) {
      const auto in = random_input(static_cast<std::size_t>(L), rng);
      BdpResult res;
      std::vector<ChargePlan> naive;
      bdp_t.push_back(time_us([&] { res = run_bdp(in); }));
      naive_t.push_back(time_us([&] { naive = naive_charge_plans(in); }));
      row.max_expanded = std::max(row.max_expanded, res.expanded);
      row.agree = row.agree && res.plans == naive;
    }
    row.bdp_us = median(bdp_t);
    row.naive_us = median(naive_t);
    rows.push_back(row);
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "L,bdp_us,naive_us\n";
  for (const auto& r : rows) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d,%.3f,%.3f\n", r.edges, r.bdp_us, r.naive_us);
    out << buf;
  }
  return out.str();
}

std::vector<SweepRow> sweep(const Instance& instance, SweepParam param,
                            const std::vector<double>& values, const SolveOptions& options) {
  std::vector<SweepRow> rows;
  for (double value : values) {
    Instance copy = instance;
    if (param == SweepParam::MtevBattery) {
      copy.params.mtev_battery = value;
    } else {
      copy.params.cost_mct = value;
    }
    copy.params.check();
    const auto s = solve_instance(copy, options);
    rows.push_back({value, s.w_best, s.mtevs, s.mcts});
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "value,W_best,K,B\n";
  for (const auto& r : rows) {
    out << format_number(r.value) << ',' << format_number(r.w_best) << ',' << r.mtevs << ','
        << r.mcts << '\n';
  }
  return out.str();
}

int cmd_gen(const GenOptions& options, const std::string& out_path, std::ostream& out,
            std::ostream& err) {
  try {
    const auto inst = generate_instance(options);
    std::ofstream file;
    write_instance(*open_out(out_path, file, out), inst);
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cmd_solve(const std::string& instance_path, const SolveOptions& options,
              const std::string& out_path, const std::string& stats_path, std::ostream& out,
              std::ostream& err) {
  Instance inst;
  try {
    inst = read_instance(instance_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }
  try {
    const auto s = solve_instance(inst, options);
    if (!out_path.empty()) {
      std::ofstream file(out_path);
      if (!file) {
        err << "error: cannot write " << out_path << '\n';
        return kExitUsage;
      }
      write_solution(file, s.best);
    }
    if (!stats_path.empty()) {
      std::ofstream file(stats_path);
      file << stats_csv(s.stats);
    }
    out << solve_csv_header() << '\n' << solve_csv_row(s) << '\n';
    if (!s.exact) {
      err << "warning: MCT count not proven minimal (search budget exhausted)\n";
      return kExitNonExact;
    }
    return kExitOk;
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cmd_validate(const std::string& instance_path, const std::string& solution_path,
                 std::ostream& out, std::ostream& err) {
  Instance inst;
  Solution sol;
  try {
    inst = read_instance(instance_path);
    sol = read_solution(solution_path, inst);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }
  const auto report = validate_solution(sol, inst);
  if (report.empty()) {
    out << "OK\n";
    return kExitOk;
  }
  for (const auto& v : report) {
    out << to_string(v) << '\n';
  }
  return kExitInfeasible;
}

int cmd_bench_bdp(int l_max, int samples, std::uint64_t seed, const std::string& out_path,
                  std::ostream& out, std::ostream& err) {
  try {
    const auto rows = bench_bdp(l_max, samples, seed);
    std::ofstream file;
    *open_out(out_path, file, out) << bench_csv(rows);
    for (const auto& r : rows) {
      if (!r.agree) {
        err << "error: BDP and naive plans differ at L=" << r.edges << '\n';
        return kExitInfeasible;
      }
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cmd_sweep(const std::string& instance_path, const std::string& param,
              const std::vector<double>& values, const SolveOptions& options,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
  SweepParam which;
  if (param == "P") {
    which = SweepParam::MtevBattery;
  } else if (param == "kappa_c") {
    which = SweepParam::MctCost;
  } else {
    err << "error: --param must be P or kappa_c\n";
    return kExitUsage;
  }
  if (values.empty()) {
    err << "error: no sweep values\n";
    return kExitUsage;
  }
  Instance inst;
  try {
    inst = read_instance(instance_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }
  try {
    const auto rows = sweep(inst, which, values, options);
    std::ofstream file;
    *open_out(out_path, file, out) << sweep_csv(rows);
    return kExitOk;
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cmd_export_lp(const std::string& instance_path, const LpOptions& options,
                  const std::string& solution_path, const std::string& out_path,
                  std::ostream& out, std::ostream& err) {
  Instance inst;
  Solution sol;
  try {
    inst = read_instance(instance_path);
    if (!solution_path.empty()) {
      sol = read_solution(solution_path, inst);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }
  try {
    LpOptions opts = options;
    if (!solution_path.empty() && opts.k_max <= 0) {
      const auto dflt = build_lp_model(inst, options).k_max;
      opts.k_max = std::max(dflt, static_cast<int>(sol.routes.size()));
    }
    if (!solution_path.empty() && opts.b_max < 0) {
      opts.b_max = std::max(build_lp_model(inst, opts).b_max, static_cast<int>(sol.tours.size()));
    }
    const auto model = build_lp_model(inst, opts);
    std::ofstream file;
    *open_out(out_path, file, out) << to_lp_text(model);
    if (!solution_path.empty()) {
      const auto bad = check_point(model, lp_point_from_solution(model, sol, inst));
      for (const auto& b : bad) {
        err << "violated: " << b << '\n';
      }
      if (!bad.empty()) {
        return kExitInfeasible;
      }
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

} // namespace wmc
