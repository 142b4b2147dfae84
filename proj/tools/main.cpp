#include "commands.hpp"
#include "config.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <optional>

int main(int argc, char** argv) {
  using namespace qdemon;
  using namespace qdemon::cli;

  CLI::App app{"qdemon: Monte Carlo simulation of a continuously monitored qubit used as a Maxwell's demon"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<std::size_t> shots;
  std::optional<double> duration;
  app.add_option("--config", config_path, "JSON run configuration")->envname("QDEMON_CONFIG")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed")->envname("QDEMON_SEED");
  app.add_option("--out", out, "output directory")->envname("QDEMON_OUT");
  app.add_option("--threads", threads, "worker threads (0: all cores)")->envname("QDEMON_THREADS");
  app.add_option("--shots", shots, "shots per ensemble")->envname("QDEMON_SHOTS");
  app.add_option("--duration", duration, "evolution time in seconds")->envname("QDEMON_DURATION");

  auto* simulate = app.add_subcommand("simulate", "one reference record with its trajectory and process path");
  std::vector<double> snapshot_at;
  simulate->add_option("--snapshot-at", snapshot_at, "times (s) of chi snapshots");

  auto* demons = app.add_subcommand("demons", "none / rho / chi policies over a time grid");
  std::optional<double> beta;
  demons->add_option("--beta", beta, "inverse temperature in units of the qubit splitting");

  auto* sweep = app.add_subcommand("sweep", "efficacy and work gains over (beta, eta', t)");
  std::vector<std::string> sweep_policies;
  sweep->add_option("--policy", sweep_policies, "policies to run (none|rho|chi)");

  auto* hist = app.add_subcommand("hist", "TPM and conditional work histograms");
  std::vector<std::string> hist_policies;
  hist->add_option("--policy", hist_policies, "policies to run (none|rho|chi)");
  hist->add_option("--beta", beta, "inverse temperature in units of the qubit splitting");

  auto* validate = app.add_subcommand("validate", "tomographic validation of a reference trajectory");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed) config.run.seed = *seed;
    if (out) config.run.out = *out;
    if (threads) config.run.threads = *threads;
    if (shots) config.run.shots = *shots;
    if (duration) config.physics.duration = *duration;
    if (!snapshot_at.empty()) config.simulate.snapshot_at = snapshot_at;
    if (beta && demons->parsed()) config.demons.beta = *beta;
    if (beta && hist->parsed()) config.hist.beta = *beta;
    if (!sweep_policies.empty()) {
      config.sweep.policies.clear();
      for (const auto& p : sweep_policies) config.sweep.policies.push_back(parse_policy(p));
    }
    if (!hist_policies.empty()) {
      config.hist.policies.clear();
      for (const auto& p : hist_policies) config.hist.policies.push_back(parse_policy(p));
    }

    if (simulate->parsed()) return cmd_simulate(config, std::cerr);
    if (demons->parsed()) return cmd_demons(config, std::cerr);
    if (sweep->parsed()) return cmd_sweep(config, std::cerr);
    if (hist->parsed()) return cmd_hist(config, std::cerr);
    if (validate->parsed()) return cmd_validate(config, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
