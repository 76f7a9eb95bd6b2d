#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mqms/config.hpp"
#include "mqms/sim.hpp"
#include "mqms/verify.hpp"

namespace {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kIoError = 3 };

struct ExperimentArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
};

mqms::RunConfig load(const ExperimentArgs& args) {
  mqms::RunConfig config = mqms::load_run_config(args.config_path);
  if (args.seed) config.seed = *args.seed;
  if (args.output) config.output_path = *args.output;
  return config;
}

void emit(const mqms::RunConfig& config, const std::string& csv) {
  if (config.output_path) {
    mqms::write_text_file(*config.output_path, csv);
    std::cerr << "wrote " << *config.output_path << "\n";
  } else {
    std::cout << csv;
    std::cout.flush();
    if (!std::cout) throw mqms::IoError("failed writing to stdout");
  }
}

int simulate(const ExperimentArgs& args) {
  const mqms::RunConfig config = load(args);
  const auto points =
      mqms::sweep(config.at_rate(0.0), config.policies, config.rate_grid, config.options, config.seed);
  for (const auto& p : points)
    std::cerr << "lambda=" << p.arrival_rate << " " << mqms::to_string(p.policy) << " mean=" << p.mean << " +/- "
              << p.ci_half_width << (p.diverged ? " diverged" : "") << "\n";
  emit(config, mqms::simulate_csv(points));
  return kOk;
}

int compare(const ExperimentArgs& args) {
  const mqms::RunConfig config = load(args);
  if (config.policies.size() != 2) throw mqms::ConfigError("policies", "compare needs exactly two policies");
  const auto points =
      mqms::sweep(config.at_rate(0.0), config.policies, config.rate_grid, config.options, config.seed);
  const std::size_t n_rates = config.rate_grid.size();
  std::vector<mqms::PairedDifference> diffs;
  for (std::size_t i = 0; i < n_rates; ++i) {
    diffs.push_back(mqms::paired_difference(points[i].replication_means, points[n_rates + i].replication_means,
                                            config.rate_grid[i]));
    std::cerr << "lambda=" << diffs.back().arrival_rate << " diff=" << diffs.back().mean_diff << " +/- "
              << diffs.back().ci_half_width << "\n";
  }
  emit(config, mqms::compare_csv(diffs));
  return kOk;
}

int verify(const mqms::VerifyOptions& options) {
  options.validate();
  bool ok = true;
  for (const auto& suite : mqms::run_verify(options)) {
    std::cout << (suite.passed ? "PASS " : "FAIL ") << suite.name << ": " << suite.detail;
    if (!suite.passed) std::cout << " (" << suite.failures << " failures)\n  counterexample: " << suite.counterexample;
    std::cout << "\n";
    ok = ok && suite.passed;
  }
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-queue multi-server scheduling simulator"};
  app.require_subcommand(1);

  ExperimentArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Sweep arrival rates for each policy and write CSV");
  ExperimentArgs cmp_args;
  auto* cmp_cmd = app.add_subcommand("compare", "Paired difference of two policies per arrival rate");
  for (auto [cmd, args] : {std::pair{sim_cmd, &sim_args}, std::pair{cmp_cmd, &cmp_args}}) {
    cmd->add_option("config", args->config_path, "JSON experiment config")->required();
    cmd->add_option("--seed", args->seed, "Override the master seed");
    cmd->add_option("--output", args->output, "Write CSV here instead of stdout");
  }

  mqms::VerifyOptions verify_options;
  auto* verify_cmd = app.add_subcommand("verify", "Run the property suites");
  verify_cmd->add_option("--max-n", verify_options.max_n, "Largest number of queues");
  verify_cmd->add_option("--max-k", verify_options.max_k, "Largest number of servers");
  verify_cmd->add_option("--trials", verify_options.trials, "Random instances per suite");
  verify_cmd->add_option("--permutation-trials", verify_options.permutation_trials,
                         "Random instances for the permutation suite");
  verify_cmd->add_option("--seed", verify_options.seed, "Master seed");
  verify_cmd->add_option("--coupling-seeds", verify_options.coupling_seeds, "Coupled trajectories");
  verify_cmd->add_option("--coupling-horizon", verify_options.coupling_horizon, "Slots per coupled trajectory");
  verify_cmd->add_flag("--corrupt", verify_options.corrupt, "Feed non-improving reallocations (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*sim_cmd) return simulate(sim_args);
    if (*cmp_cmd) return compare(cmp_args);
    return verify(verify_options);
  } catch (const mqms::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kConfigError;
  } catch (const mqms::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIoError;
  }
}
