#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "wmc/commands.h"

int main(int argc, char** argv) {
  using namespace wmc;
  CLI::App app{"Routing with on-road mobile charging: generate, solve, validate, benchmark"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string out_path;

  // gen
  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("-n,--customers", gen.customers, "Number of customers")->required();
  gen_cmd->add_option("--seed", seed, "Random seed");
  gen_cmd->add_option("--out", out_path, "Instance file (default stdout)");
  gen_cmd->add_option("--name", gen.name, "Instance name");
  gen_cmd->add_option("--box", gen.coord_max, "Coordinate upper bound");
  gen_cmd->add_option("--Q", gen.params.capacity, "MTEV capacity");
  gen_cmd->add_option("--P", gen.params.mtev_battery, "MTEV battery");
  gen_cmd->add_option("--beta", gen.params.mct_battery, "MCT battery");
  gen_cmd->add_option("--gamma", gen.params.gamma, "Charge per unit of charged edge");
  gen_cmd->add_option("--phi", gen.params.phi, "MCT deadhead consumption");
  gen_cmd->add_option("--kappa-t", gen.params.cost_dist, "Cost per distance unit");
  gen_cmd->add_option("--kappa-v", gen.params.cost_mtev, "Cost per MTEV");
  gen_cmd->add_option("--kappa-c", gen.params.cost_mct, "Cost per MCT");

  // solve and sweep share search flags
  SolveOptions solve;
  solve.threads = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  std::string instance_path;
  std::string stats_path;
  auto search_flags = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Base seed; run r uses seed + r");
    cmd->add_option("--runs", solve.runs, "Independent runs");
    cmd->add_option("--max-nonimprove", solve.max_nonimprove,
                    "Stop after this many iterations without a new best");
    cmd->add_option("--threads", solve.threads, "Worker threads for runs");
    cmd->add_flag("!--no-ls", solve.local_search, "Disable local search");
  };
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance");
  solve_cmd->add_option("instance", instance_path, "Instance file")->required();
  search_flags(solve_cmd);
  solve_cmd->add_option("--out", out_path, "Write the best solution here");
  solve_cmd->add_option("--stats", stats_path, "Write operator statistics CSV here");

  // validate
  std::string solution_path;
  auto* val_cmd = app.add_subcommand("validate", "Check a solution against every constraint");
  val_cmd->add_option("instance", instance_path, "Instance file")->required();
  val_cmd->add_option("solution", solution_path, "Solution file")->required();

  // bench-bdp
  int l_max = 18;
  int samples = 9;
  auto* bench_cmd = app.add_subcommand("bench-bdp", "Time the DP against naive enumeration");
  bench_cmd->add_option("--l-max", l_max, "Largest route length in edges (<= 20)");
  bench_cmd->add_option("--samples", samples, "Random inputs per length");
  bench_cmd->add_option("--seed", seed, "Random seed");
  bench_cmd->add_option("--out", out_path, "CSV file (default stdout)");

  // sweep
  std::string param;
  std::vector<double> values;
  auto* sweep_cmd = app.add_subcommand("sweep", "Solve once per parameter value");
  sweep_cmd->add_option("instance", instance_path, "Instance file")->required();
  sweep_cmd->add_option("--param", param, "P or kappa_c")->required();
  sweep_cmd->add_option("--values", values, "Values to try")->required();
  search_flags(sweep_cmd);
  sweep_cmd->add_option("--out", out_path, "CSV file (default stdout)");

  // export-lp
  LpOptions lp;
  auto* lp_cmd = app.add_subcommand("export-lp", "Write the linearized model in LP format");
  lp_cmd->add_option("instance", instance_path, "Instance file")->required();
  lp_cmd->add_option("--k-max", lp.k_max, "MTEV fleet bound");
  lp_cmd->add_option("--b-max", lp.b_max, "MCT fleet bound");
  lp_cmd->add_option("--big-m", lp.big_m, "Big-M constant");
  lp_cmd->add_option("--check", solution_path, "Also check that this solution satisfies the model");
  lp_cmd->add_option("--out", out_path, "LP file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*gen_cmd) {
    gen.seed = seed;
    return cmd_gen(gen, out_path, std::cout, std::cerr);
  }
  if (*solve_cmd) {
    solve.seed = seed;
    return cmd_solve(instance_path, solve, out_path, stats_path, std::cout, std::cerr);
  }
  if (*val_cmd) {
    return cmd_validate(instance_path, solution_path, std::cout, std::cerr);
  }
  if (*bench_cmd) {
    return cmd_bench_bdp(l_max, samples, seed, out_path, std::cout, std::cerr);
  }
  if (*sweep_cmd) {
    solve.seed = seed;
    return cmd_sweep(instance_path, param, values, solve, out_path, std::cout, std::cerr);
  }
  if (*lp_cmd) {
    return cmd_export_lp(instance_path, lp, solution_path, out_path, std::cout, std::cerr);
  }
  return kExitUsage;
}
