#pragma once

// Run configuration for the qdemon tool. The on-disk form is JSON with
// nested sections; frequencies are given in Hz and converted to rad/s.

#include "qdemon/demon.hpp"
#include "qdemon/sim_params.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qdemon::cli {

struct RunSection {
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out = "qdemon-out";
  std::size_t shots = 6400;
  bool shot_log = false;
};

struct FeedbackSection {
  int angle_bins = 20;
  bool quantize = true;
};

struct SimulateSection {
  std::string initial = "ground";  // ground | excited | mixed | plus_x
  std::vector<double> snapshot_at;  // empty: final time only
  std::size_t stride = 1;
};

struct DemonsSection {
  double beta = 2.5;
  std::vector<double> times{0.1e-6, 0.2e-6, 0.3e-6, 0.5e-6, 0.7e-6, 0.9e-6};
};

struct SweepSection {
  std::vector<double> betas{0.5, 1.3, 2.5};
  std::vector<double> etas{0.12, 0.24, 0.48};
  std::vector<double> times{0.2e-6, 0.5e-6, 0.9e-6};
  std::vector<PolicyKind> policies{PolicyKind::rho_demon, PolicyKind::chi_demon};
};

struct HistSection {
  double beta = 0.5;
  std::vector<PolicyKind> policies{PolicyKind::none, PolicyKind::rho_demon};
  std::size_t bins = 40;
};

struct ValidateSection {
  std::string initial = "ground";
  std::size_t trajectories = 20000;
  std::vector<double> times{0.2e-6, 0.5e-6, 0.94e-6};
  double tolerance = 0.04;
  std::uint64_t reference_shot = 0;
};

struct RunConfig {
  SimParams physics;
  RunSection run;
  FeedbackSection feedback;
  SimulateSection simulate;
  DemonsSection demons;
  SweepSection sweep;
  HistSection hist;
  ValidateSection validate;

  /// Checks SimParams invariants and every section; throws std::invalid_argument.
  void check() const;
};

/// Unknown keys anywhere are rejected with std::invalid_argument.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
/// Fully resolved configuration, in the same units as the input format.
nlohmann::json config_to_json(const RunConfig& config);

DensityMatrix parse_initial_state(const std::string& name);

}  // namespace qdemon::cli
