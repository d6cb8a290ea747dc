#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wmc/core.h"
#include "wmc/lns.h"
#include "wmc/milp_export.h"

namespace wmc {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitInfeasible = 3,
  kExitNonExact = 4,
};

Params default_params();

struct GenOptions {
  int customers = 15;
  std::uint64_t seed = 1;
  int coord_max = 1000;
  Params params = default_params();
  std::string name; // empty: derived from n and seed
};

// Uniform integer coordinates in [0, coord_max]^2 (depot included) and
// demands uniform in {1, 2, 3}.
Instance generate_instance(const GenOptions& options);

struct SolveOptions {
  int runs = 10;
  std::uint64_t seed = 1; // run r uses seed + r
  int max_nonimprove = 5000;
  int threads = 1;
  bool local_search = true;
  CostingOptions costing;
};

struct SolveSummary {
  std::string name;
  double w_best = 0.0;
  double w_avg = 0.0;
  int mtevs = 0;
  int mcts = 0;
  double seconds = 0.0;
  bool exact = true;
  Solution best;
  std::vector<double> run_objectives; // by run index
  std::vector<OperatorStats> stats;   // summed over runs
};

SolveSummary solve_instance(const Instance& instance, const SolveOptions& options);

std::string solve_csv_header();
std::string solve_csv_row(const SolveSummary& s);

struct BenchRow {
  int edges = 0;
  double bdp_us = 0.0;
  double naive_us = 0.0;
  std::uint64_t max_expanded = 0; // largest BDP expansion count among samples
  bool agree = true;              // both methods returned the same plans
};

std::vector<BenchRow> bench_bdp(int l_max, int samples, std::uint64_t seed);
std::string bench_csv(const std::vector<BenchRow>& rows);

enum class SweepParam { MtevBattery, MctCost };

struct SweepRow {
  double value = 0.0;
  double w_best = 0.0;
  int mtevs = 0;
  int mcts = 0;
};

std::vector<SweepRow> sweep(const Instance& instance, SweepParam param,
                            const std::vector<double>& values, const SolveOptions& options);
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Command entry points. They report on `out`/`err` and return an ExitCode.
int cmd_gen(const GenOptions& options, const std::string& out_path, std::ostream& out,
            std::ostream& err);
int cmd_solve(const std::string& instance_path, const SolveOptions& options,
              const std::string& out_path, const std::string& stats_path, std::ostream& out,
              std::ostream& err);
int cmd_validate(const std::string& instance_path, const std::string& solution_path,
                 std::ostream& out, std::ostream& err);
int cmd_bench_bdp(int l_max, int samples, std::uint64_t seed, const std::string& out_path,
                  std::ostream& out, std::ostream& err);
int cmd_sweep(const std::string& instance_path, const std::string& param,
              const std::vector<double>& values, const SolveOptions& options,
              const std::string& out_path, std::ostream& out, std::ostream& err);
int cmd_export_lp(const std::string& instance_path, const LpOptions& options,
                  const std::string& solution_path, const std::string& out_path,
                  std::ostream& out, std::ostream& err);

} // namespace wmc
