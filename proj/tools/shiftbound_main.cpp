// Command-line front end: flag parsing, file writing, and exit-code mapping
// around the drivers in shiftbound/cli.hpp.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "shiftbound/cli.hpp"

namespace {

void add_scenario_flags(CLI::App* sub, shiftbound::cli::Options& opt) {
  sub->add_option("--setting", opt.setting,
                  "Task family: da|binary-da|oda|analogy|two-sided|dt")
      ->capture_default_str();
  sub->add_option("--n", opt.n, "Number of scenarios (seeds base..base+n-1)")
      ->capture_default_str();
  sub->add_option("--seed", opt.seed, "Base seed (default: a fixed per-setting seed)");
  sub->add_option("--support-size", opt.support_size, "Points per distribution support");
  sub->add_option("--class-size", opt.class_size, "Size of the predictor/recovery classes");
  sub->add_option("--loss", opt.loss, "Loss family: abs|sq|01");
}

void add_output_flags(CLI::App* sub, shiftbound::cli::Options& opt) {
  sub->add_option("--out", opt.out, "Write the document to this file instead of stdout");
  sub->add_option("--format", opt.format, "Output format: json|csv")->capture_default_str();
}

void add_weight_flags(CLI::App* sub, shiftbound::cli::Options& opt) {
  sub->add_option("--w-disc", opt.weights.w_disc, "Weight of the distribution-mismatch term")
      ->capture_default_str();
  sub->add_option("--w-inv", opt.weights.w_inv, "Weight of the recovery-inversion term")
      ->capture_default_str();
  sub->add_option("--w-tid", opt.weights.w_tid, "Weight of the target-identity term")
      ->capture_default_str();
  sub->add_option("--w-const", opt.weights.w_const, "Weight of the self-consistency terms")
      ->capture_default_str();
}

int run(const shiftbound::cli::Options& opt) {
  const shiftbound::cli::Execution ex = shiftbound::cli::execute(opt);
  if (opt.out.empty()) {
    std::cout << ex.document;
    if (opt.format == "csv") std::cerr << ex.manifest;
  } else {
    std::ofstream file(opt.out, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open output file " << opt.out << "\n";
      return 1;
    }
    file << ex.document;
    if (!file.flush()) {
      std::cerr << "error: failed writing output file " << opt.out << "\n";
      return 1;
    }
    std::cerr << ex.manifest;
  }
  return ex.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-instance generalization bound checker for shifted domains"};
  app.set_version_flag("--version", shiftbound::cli::kVersion);
  app.require_subcommand(1);

  shiftbound::cli::Options opt;

  CLI::App* verify = app.add_subcommand(
      "verify", "Generate scenarios, train candidates, and check every bound report");
  add_scenario_flags(verify, opt);
  add_output_flags(verify, opt);
  add_weight_flags(verify, opt);
  verify->add_flag("--dump-scenarios", opt.dump_scenarios,
                   "Embed the full task description in each report");

  CLI::App* train = app.add_subcommand(
      "train", "Run the exhaustive trainer and report the chosen candidate");
  add_scenario_flags(train, opt);
  add_output_flags(train, opt);
  add_weight_flags(train, opt);
  train->add_flag("--dump-scenarios", opt.dump_scenarios,
                  "Embed the full task description in each report");
  train->add_flag("--trace", opt.trace,
                  "Include the full search trace (every candidate visited) in each result");

  CLI::App* constants = app.add_subcommand(
      "constants", "Estimate loss and Lipschitz constants against their declarations");
  add_scenario_flags(constants, opt);
  add_output_flags(constants, opt);

  CLI::App* axioms = app.add_subcommand(
      "axioms", "Check the pseudometric laws of the discrepancy measures");
  axioms->add_option("--n", opt.n, "Number of instances")->capture_default_str();
  axioms->add_option("--seed", opt.seed, "Base seed");
  add_output_flags(axioms, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (verify->parsed())
    opt.command = "verify";
  else if (train->parsed())
    opt.command = "train";
  else if (constants->parsed())
    opt.command = "constants";
  else
    opt.command = "axioms";

  try {
    return run(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
