#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "l0recov/matrix_io.hpp"
#include "run_config.hpp"

namespace {

using namespace l0recov::cli;

struct Flags {
  std::string config_path;
  std::optional<std::string> seed, out, mu, sr, sl, sigma, tol, max_iters, solvers, parallel, n;
  bool timing = false;
  int verbose = 0;
  bool quiet = false;
  // solve
  std::optional<std::string> a, y, x_true, x_out, solver, k;
  // verify
  std::optional<std::string> tau_scale, instances;
  // phantom
  std::optional<std::string> side, nnz;
  // gen
  std::optional<std::string> format;
};

void add_common(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config_path, "Config file with key = value lines in [sections]");
  cmd.add_option("--seed", f.seed, "Seed list, e.g. 1,2,3 or 1-10");
  cmd.add_option("--out", f.out, "Output directory");
  cmd.add_option("--mu", f.mu, "Data-term weight (bench: one value per sigma)");
  cmd.add_option("--sr", f.sr, "Sampling ratio M/N");
  cmd.add_option("--sl", f.sl, "Sparsity level K/N");
  cmd.add_option("--sigma", f.sigma, "Noise level(s), comma separated");
  cmd.add_option("--tol", f.tol, "Relative-change stopping tolerance");
  cmd.add_option("--max-iters", f.max_iters, "Iteration limit");
  cmd.add_option("--solvers", f.solvers, "Comma list of measurement, ist, cosamp, iht, iiht");
  cmd.add_option("--parallel", f.parallel, "Worker threads for independent trials");
  cmd.add_option("--n", f.n, "Signal length N");
  cmd.add_flag("--timing", f.timing, "Write measured run times into CSV output");
  cmd.add_flag("-v,--verbose", f.verbose, "More log output (repeatable)");
  cmd.add_flag("-q,--quiet", f.quiet, "No progress log");
}

/// Flag -> config key for the given subcommand.
void apply_flags(RunConfig& config, const std::string& command, const Flags& f) {
  const auto set = [&](const std::optional<std::string>& value, const std::string& key) {
    if (value) set_config_value(config, key, *value);
  };
  const auto first = [](const std::optional<std::string>& value) -> std::optional<std::string> {
    if (!value) return value;
    return value->substr(0, value->find(','));
  };

  set(f.out, "run.out");
  set(f.parallel, "run.parallel");
  set(f.tol, "solver.tol");
  set(f.solvers, "solver.solvers");
  if (f.timing) config.run.timing = true;
  if (f.quiet) config.run.verbosity = 0;
  config.run.verbosity += f.verbose;

  if (command == "phantom") {
    set(first(f.mu), "phantom.mu");
    set(first(f.sigma), "phantom.sigma");
    set(f.sr, "phantom.sr");
    set(f.max_iters, "phantom.max_iters");
    set(first(f.seed), "phantom.seed");
    set(f.side, "phantom.side");
    set(f.nnz, "phantom.nnz");
  } else if (command == "verify") {
    set(f.mu, "verify.mu");
    set(f.sigma, "verify.sigma");
    set(f.sr, "verify.sr");
    set(f.sl, "verify.sl");
    set(f.max_iters, "verify.max_iters");
    set(f.seed, "run.seeds");
    set(f.tau_scale, "verify.tau_scale");
    set(f.instances, "verify.instances");
    if (f.n) set_config_value(config, "verify.sizes", *f.n);
  } else if (command == "solve") {
    set(first(f.mu), "solve.mu");
    set(f.max_iters, "solver.max_iters");
    set(f.a, "solve.a");
    set(f.y, "solve.y");
    set(f.x_true, "solve.x_true");
    set(f.x_out, "solve.x_out");
    set(f.solver, "solve.solver");
    set(f.k, "solve.k");
  } else {
    set(f.mu, "problem.mu");
    set(f.sigma, "problem.sigma");
    set(f.sr, "problem.sr");
    set(f.sl, "problem.sl");
    set(f.n, "problem.n");
    set(f.max_iters, "solver.max_iters");
    set(f.seed, "run.seeds");
    set(f.format, "gen.format");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse recovery by inexact iterative hard thresholding, with baselines and experiment runners"};
  app.require_subcommand(0, 1);
  bool print_config = false;
  app.add_flag("--print-config", print_config, "Print a config file holding every default and exit");

  Flags flags;
  std::vector<std::pair<std::string, CLI::App*>> commands{
      {"bench", app.add_subcommand("bench", "Noisy comparison table over a seed list (CSV + summary)")},
      {"phantom", app.add_subcommand("phantom", "Ellipse-phantom reconstruction with PGM images")},
      {"verify", app.add_subcommand("verify", "Check the convergence guarantees on random instances")},
      {"solve", app.add_subcommand("solve", "Run one solver on A and y read from files")},
      {"gen", app.add_subcommand("gen", "Write a generated problem (A, y, x_true, ...) to files")},
  };
  for (auto& [name, cmd] : commands) add_common(*cmd, flags);
  CLI::App* solve = commands[3].second;
  solve->add_option("--a", flags.a, "Measurement matrix file (.bin or .csv)");
  solve->add_option("--y", flags.y, "Measurement vector file");
  solve->add_option("--x-true", flags.x_true, "Ground truth, enables metrics and oracle values");
  solve->add_option("--x-out", flags.x_out, "Output vector path (default <out>/x.bin)");
  solve->add_option("--solver", flags.solver, "measurement, ist, cosamp, iht or iiht");
  solve->add_option("--k", flags.k, "Sparsity budget for IHT and CoSaMP");
  CLI::App* verify = commands[2].second;
  verify->add_option("--tau-scale", flags.tau_scale, "Multiply the safe step; above 1 breaks the bound");
  verify->add_option("--instances", flags.instances, "Random instances per size and sigma");
  CLI::App* phantom = commands[1].second;
  phantom->add_option("--side", flags.side, "Image side length");
  phantom->add_option("--nnz", flags.nnz, "Number of nonzero pixels");
  commands[4].second->add_option("--format", flags.format, "bin or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (print_config) {
    std::cout << default_config_text();
    return kExitOk;
  }
  std::string command;
  for (auto& [name, cmd] : commands) {
    if (cmd->parsed()) command = name;
  }
  if (command.empty()) {
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    RunConfig config = flags.config_path.empty() ? RunConfig{} : load_config(flags.config_path);
    apply_flags(config, command, flags);
    if (command == "bench") return cmd_bench(config);
    if (command == "phantom") return cmd_phantom(config);
    if (command == "verify") return cmd_verify(config);
    if (command == "solve") return cmd_solve(config);
    return cmd_gen(config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const l0recov::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const l0recov::FormatError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
