#include <CLI11.hpp>
#include <iostream>

#include "homeo/harness/commands.hpp"

using namespace homeo::harness;

int main(int argc, char** argv) {
  CLI::App app{"Homeostasis protocol toolkit: symbolic tables, treaties and simulation"};
  app.require_subcommand(1);

  AnalyzeOptions an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Print the symbolic table of one transaction, or the joint table");
  analyze_cmd->add_option("files", an.files, "Transaction files (.hst)")->required();
  analyze_cmd->add_flag("--replicated", an.replicated, "Rewrite remote and replicated writes to per-site deltas first");
  analyze_cmd->add_option("--placement", an.placement, "Placement file (sites, loc, home, replicated)");

  TreatyOptions tr;
  auto* treaty_cmd = app.add_subcommand("treaty", "Compute local treaty templates and a configuration");
  treaty_cmd->add_option("files", tr.files, "Transaction files (.hst)")->required();
  treaty_cmd->add_option("--placement", tr.placement, "Placement file")->required();
  treaty_cmd->add_option("--db", tr.db, "Database snapshot (OBJ = VALUE lines)")->required();
  treaty_cmd->add_option("--model", tr.model, "Workload model for lookahead sampling");
  treaty_cmd->add_option("--sequence", tr.sequences, "Fixed transaction sequence, e.g. T1,T1,T2 (repeatable)");
  treaty_cmd->add_option("--bind", tr.binds, "Parameter values, e.g. order=3 (repeatable)");
  treaty_cmd->add_option("--lookahead", tr.lookahead, "Sampled sequence length")->capture_default_str();
  treaty_cmd->add_option("--samples", tr.samples, "Number of sampled sequences")->capture_default_str();
  treaty_cmd->add_option("--seed", tr.seed, "Sampling seed")->capture_default_str();
  treaty_cmd->add_option("--budget", tr.budget, "Solver step limit")->capture_default_str();

  SimulateOptions sim;
  std::uint64_t seed = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the microbenchmark under a protocol, with optional sweeps");
  sim_cmd->add_option("--config", sim.config, "Configuration file (key=value lines)");
  sim_cmd->add_option("--set", sim.sets, "Override one key, KEY=VALUE (repeatable)");
  sim_cmd->add_option("--sweep", sim.sweeps, "Sweep one key, KEY=v1,v2,... (repeatable: cartesian product)");
  sim_cmd->add_option("--out", sim.out, "Directory for per-run CSV traces and summaries");
  auto* seed_opt = sim_cmd->add_option("--seed", seed, "Seed, overriding the configuration");
  sim_cmd->add_option("--threads", sim.threads, "Parallel runs (default: hardware threads)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (*seed_opt) sim.seed = seed;

  if (*analyze_cmd) return cmd_analyze(an, std::cout, std::cerr);
  if (*treaty_cmd) return cmd_treaty(tr, std::cout, std::cerr);
  return cmd_simulate(sim, std::cout, std::cerr);
}
