#include "qdemon/sim_params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qdemon {

std::string_view to_string(StepScheme scheme) { return scheme == StepScheme::kraus ? "kraus" : "euler"; }

StepScheme parse_step_scheme(std::string_view name) {
  if (name == "kraus") return StepScheme::kraus;
  if (name == "euler") return StepScheme::euler;
  throw std::invalid_argument("unknown step scheme '" + std::string(name) + "' (expected kraus|euler)");
}

void SimParams::validate() const {
  if (!std::isfinite(dt) || dt <= 0.0) throw std::invalid_argument("dt must be positive");
  if (!std::isfinite(k) || k < 0.0) throw std::invalid_argument("k must be >= 0");
  if (!std::isfinite(omega_r)) throw std::invalid_argument("omega_R must be finite");
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in (0, 1]");
  if (!std::isfinite(duration) || duration < 0.0) throw std::invalid_argument("duration must be >= 0");
  if (k * dt > 0.05) throw std::invalid_argument("k*dt exceeds 0.05");
  if (std::abs(omega_r) * dt > 0.1) throw std::invalid_argument("omega_R*dt exceeds 0.1");
}

std::size_t SimParams::steps() const { return static_cast<std::size_t>(std::llround(duration / dt)); }

SimParams SimParams::with_duration(double t) const {
  SimParams p = *this;
  p.duration = t;
  return p;
}

SimParams SimParams::with_eta(double e) const {
  SimParams p = *this;
  p.eta = e;
  return p;
}

}  // namespace qdemon
