#include "qdemon/demon.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qdemon {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

}  // namespace

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::none: return "none";
    case PolicyKind::rho_demon: return "rho";
    case PolicyKind::chi_demon: return "chi";
  }
  return "none";
}

PolicyKind parse_policy(std::string_view name) {
  if (name == "none") return PolicyKind::none;
  if (name == "rho") return PolicyKind::rho_demon;
  if (name == "chi") return PolicyKind::chi_demon;
  throw std::invalid_argument("unknown policy '" + std::string(name) + "' (expected none|rho|chi)");
}

void FeedbackPolicy::validate() const {
  if (angle_bins < 1) throw std::invalid_argument("angle_bins must be >= 1");
}

double optimal_angle(const BlochVector& v) {
  if (!(std::abs(v.y) < 1e-6)) throw std::invalid_argument("decision state leaves the X-Z plane");
  if (std::hypot(v.x, v.z) < kDegenerateRadius) return 0.0;
  return wrap(std::atan2(v.x, v.z));
}

double quantize_angle(double theta, int bins) {
  if (bins < 1) throw std::invalid_argument("bins must be >= 1");
  const double spacing = kTwoPi / bins;
  const double q = wrap(theta) / spacing;
  double n = std::floor(q);
  if (q - n > 0.5) n += 1.0;
  const long idx = static_cast<long>(n) % bins;
  return spacing * static_cast<double>(idx);
}

double circular_distance(double a, double b) {
  const double d = wrap(a - b);
  return std::min(d, kTwoPi - d);
}

Mat2 feedback_unitary(double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  // cos(theta/2) I + i sin(theta/2) sigma_y
  Mat2 u;
  u << c, s, -s, c;
  return u;
}

DensityMatrix apply_feedback(const DensityMatrix& rho, double theta) {
  const Mat2 u = feedback_unitary(theta);
  return hermitian_part(u * rho.matrix() * u.adjoint());
}

FeedbackDecision decide(const FeedbackPolicy& policy, const DemonInputs& inputs) {
  policy.validate();
  FeedbackDecision d;
  const DensityMatrix* source = nullptr;
  switch (policy.kind) {
    case PolicyKind::none: return d;
    case PolicyKind::rho_demon:
      if (!inputs.filtered_state) throw std::invalid_argument("rho demon requires the filtered state");
      source = &*inputs.filtered_state;
      break;
    case PolicyKind::chi_demon:
      if (!inputs.effective_state) throw std::invalid_argument("chi demon requires the effective state");
      source = &*inputs.effective_state;
      break;
  }
  d.source = bloch_from_density(*source);
  d.exact_angle = optimal_angle(d.source);
  d.quantized_angle = quantize_angle(d.exact_angle, policy.angle_bins);
  d.applied_angle = policy.quantize ? d.quantized_angle : d.exact_angle;
  return d;
}

}  // namespace qdemon
