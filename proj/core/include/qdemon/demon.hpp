#pragma once

#include "qdemon/qcore.hpp"

#include <optional>
#include <string_view>

namespace qdemon {

enum class PolicyKind { none, rho_demon, chi_demon };

/// CLI/config spelling: none | rho | chi.
std::string_view to_string(PolicyKind kind);
PolicyKind parse_policy(std::string_view name);

struct FeedbackPolicy {
  PolicyKind kind = PolicyKind::none;
  int angle_bins = 20;
  bool quantize = true;

  void validate() const;
};

struct FeedbackDecision {
  double exact_angle = 0.0;      // [0, 2pi)
  double quantized_angle = 0.0;  // nearest multiple of 2pi/bins
  double applied_angle = 0.0;    // quantized_angle if the policy quantizes, else exact_angle
  BlochVector source;
};

/// Bloch radius below which every rotation is equally good; mapped to angle 0.
inline constexpr double kDegenerateRadius = 1e-9;

/// atan2(x, z) in [0, 2pi): exp(i theta sigma_y / 2) rotates (x, z) onto +z.
/// Requires |y| < 1e-6.
double optimal_angle(const BlochVector& v);

/// Nearest multiple of 2pi/bins on the circle, ties to the smaller multiple.
double quantize_angle(double theta, int bins = 20);

/// Circular distance between two angles, in [0, pi].
double circular_distance(double a, double b);

/// U = exp(i theta sigma_y / 2).
Mat2 feedback_unitary(double theta);

/// U rho U^dag.
DensityMatrix apply_feedback(const DensityMatrix& rho, double theta);

struct DemonInputs {
  std::optional<DensityMatrix> filtered_state;  // rho_r filtered from the demon's prior
  std::optional<DensityMatrix> effective_state; // rho-tilde from chi
};

/// rho_demon decides on filtered_state, chi_demon on effective_state, none
/// returns 0. Throws std::invalid_argument when the required input is missing.
FeedbackDecision decide(const FeedbackPolicy& policy, const DemonInputs& inputs);

}  // namespace qdemon
