#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace qdemon {

/// How a single time step of the conditioned evolution is discretized.
///
/// `kraus` (default) applies a completely positive step built from Kraus
/// operators; records are drawn from that instrument's exact outcome density.
/// `euler` is the literal Euler update of the linear (unnormalized) SME with
/// Gaussian records r = <sigma_z> + zeta / sqrt(4 eta k dt).
enum class StepScheme { kraus, euler };

std::string_view to_string(StepScheme scheme);
StepScheme parse_step_scheme(std::string_view name);

/// Physical and numerical configuration. Rates are angular (rad/s), times in
/// seconds. `validate()` enforces k*dt <= 0.05, |omega_r|*dt <= 0.1 and
/// 0 < eta <= 1; every operation that consumes a SimParams calls it.
struct SimParams {
  double k = 2.0 * std::numbers::pi * 57e3;
  double omega_r = 2.0 * std::numbers::pi * 0.8e6;
  double eta = 0.48;
  double dt = 1e-8;
  double duration = 0.94e-6;
  std::uint64_t master_seed = 1;
  StepScheme scheme = StepScheme::kraus;

  void validate() const;

  /// round(duration / dt)
  std::size_t steps() const;

  SimParams with_duration(double t) const;
  SimParams with_eta(double e) const;
};

}  // namespace qdemon
