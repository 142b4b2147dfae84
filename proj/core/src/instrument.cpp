#include "qdemon/instrument.hpp"

#include <cmath>
#include <limits>

namespace qdemon {

namespace {

constexpr complex kI{0.0, 1.0};

const Mat2& sigma_z() { return PauliBasis::instance().op(3); }
const Mat2& sigma_y() { return PauliBasis::instance().op(2); }

}  // namespace

Mat4 ThetaGenerator::operator()(double r) const {
  Mat4 theta = Mat4::Zero();
  theta(0, 0) = -k_;
  theta(0, 2) = -kI * (omega_r_ / 2.0);
  theta(2, 0) = kI * (omega_r_ / 2.0);
  theta(0, 3) = 2.0 * eta_ * k_ * r;
  theta(3, 0) = 2.0 * eta_ * k_ * r;
  theta(3, 3) = k_;
  return theta;
}

StepModel::StepModel(const SimParams& params) : params_(params), theta_(params) {
  params_.validate();
  const double k = params_.k;
  const double dt = params_.dt;
  const double eta = params_.eta;
  sigma_ = k > 0.0 ? 1.0 / std::sqrt(4.0 * eta * k * dt) : std::numeric_limits<double>::infinity();
  drive_ = -0.5 * params_.omega_r * sigma_y();

  // Dephasing probability per step, chosen so the mean channel damps x by
  // exactly exp(-2 k dt). The observed part of the dephasing carries weight
  // eta * p (E[(g r)^2] = g^2 sigma^2 = eta p under the reference Gaussian).
  const double p = 0.5 * -std::expm1(-2.0 * k * dt);
  const double half_angle = 0.5 * params_.omega_r * dt;
  const Mat2 rotation = std::cos(half_angle) * Mat2::Identity() + kI * std::sin(half_angle) * sigma_y();
  kraus0_ = std::sqrt(1.0 - p) * rotation;
  const double g = k > 0.0 ? std::sqrt(eta * p) / sigma_ : 0.0;
  kraus1_ = g * sigma_z();
  unobserved_ = (1.0 - eta) * p;
}

Mat4 StepModel::step_matrix(double r) const {
  if (params_.scheme == StepScheme::euler) {
    Mat4 t = params_.dt * theta_(r);
    t(0, 0) += 1.0;
    return t;
  }
  const PauliBasis& basis = PauliBasis::instance();
  const Vec4 m = basis.coefficients(kraus0_ + r * kraus1_);
  Mat4 t = m * m.adjoint();
  t(3, 3) += unobserved_;
  return t;
}

Mat2 StepModel::apply(const Mat2& phi, double r) const {
  const Mat2& sz = sigma_z();
  if (params_.scheme == StepScheme::euler) {
    const double k = params_.k;
    const Mat2 szphi = sz * phi;
    const Mat2 phisz = phi * sz;
    const Mat2 rhs = -kI * (drive_ * phi - phi * drive_) + k * (szphi * sz - phi) +
                     (2.0 * params_.eta * k * r) * (szphi + phisz);
    return phi + params_.dt * rhs;
  }
  const Mat2 m = kraus0_ + r * kraus1_;
  return m * phi * m.adjoint() + unobserved_ * (sz * phi * sz);
}

double StepModel::outcome_weight(const Mat2& rho, double r) const { return apply(rho, r).trace().real(); }

double StepModel::sample_record(const Mat2& rho, StreamRng& rng) const {
  if (!(params_.k > 0.0)) throw std::invalid_argument("record synthesis requires k > 0");
  const double z = (rho(0, 0) - rho(1, 1)).real() / rho.trace().real();
  if (params_.scheme == StepScheme::euler) return z + sigma_ * rng.normal();

  // Exact outcome law: density N(u; 0, 1) * (a + b u + c u^2) in u = r / sigma,
  // with a + c = 1 and a + b u + c u^2 >= 0 (complete positivity). Rejection
  // from h(u) = N(u; 0, 1) (1 + u^2) / 2 with bound 2 + |b|.
  const Mat2 m0 = kraus0_;
  const Mat2 m1 = kraus1_;
  const double tr = rho.trace().real();
  const double a = ((m0.adjoint() * m0 * rho).trace().real() + unobserved_ * tr) / tr;
  const double b = ((m0.adjoint() * m1 + m1.adjoint() * m0) * rho).trace().real() / tr * sigma_;
  const double c = (m1.adjoint() * m1 * rho).trace().real() / tr * sigma_ * sigma_;
  const double bound = 2.0 + std::abs(b);
  for (;;) {
    double u;
    if (rng.uniform() < 0.5) {
      u = rng.normal();
    } else {
      const double n1 = rng.normal();
      const double n2 = rng.normal();
      const double n3 = rng.normal();
      u = std::sqrt(n1 * n1 + n2 * n2 + n3 * n3);
      if (rng.uniform() < 0.5) u = -u;
    }
    const double target = 2.0 * (a + b * u + c * u * u);
    const double envelope = bound * (1.0 + u * u);
    if (rng.uniform() * envelope <= target) return sigma_ * u;
  }
}

}  // namespace qdemon
