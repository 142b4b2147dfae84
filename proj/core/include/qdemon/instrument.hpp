#pragma once

// The single-step measurement instrument. The state filter (trajectory) and
// the process-matrix integrator (process) both consume exactly this map, so
// the two pipelines differ only in how they factor the same linear algebra.

#include "qdemon/qcore.hpp"
#include "qdemon/rng.hpp"
#include "qdemon/sim_params.hpp"

namespace qdemon {

/// Generator theta(r) of the linear SME in the Pauli basis,
/// d(phi)/dt = sum_mn theta_mn(r) K_m phi K_n^dag, with H_R = -omega_R sigma_y / 2:
///   theta_00 = -k, theta_02 = -i omega_R/2, theta_20 = +i omega_R/2,
///   theta_03 = theta_30 = 2 eta k r, theta_33 = k.
class ThetaGenerator {
 public:
  ThetaGenerator(double k, double omega_r, double eta) : k_(k), omega_r_(omega_r), eta_(eta) {}
  explicit ThetaGenerator(const SimParams& p) : ThetaGenerator(p.k, p.omega_r, p.eta) {}

  Mat4 operator()(double r) const;

 private:
  double k_;
  double omega_r_;
  double eta_;
};

/// One time step of the conditioned evolution for a given record sample r.
class StepModel {
 public:
  explicit StepModel(const SimParams& params);

  StepScheme scheme() const { return params_.scheme; }
  const SimParams& params() const { return params_; }

  /// Pauli-basis step matrix T(r): phi -> sum_jk T_jk K_j phi K_k^dag.
  Mat4 step_matrix(double r) const;

  /// Applies the step to an unnormalized operator.
  Mat2 apply(const Mat2& phi, double r) const;

  /// Draws the record sample for the interval starting in normalized state rho.
  /// Requires k > 0.
  double sample_record(const Mat2& rho, StreamRng& rng) const;

  /// Standard deviation of the record noise, 1/sqrt(4 eta k dt).
  double record_sigma() const { return sigma_; }

  /// Tr[T(r) rho]: the outcome density relative to the N(0, sigma^2) reference.
  double outcome_weight(const Mat2& rho, double r) const;

 private:
  SimParams params_;
  ThetaGenerator theta_;
  double sigma_ = 0.0;
  // kraus: M(r) = kraus0_ + r * kraus1_, plus sqrt(unobserved_) sigma_z
  Mat2 kraus0_;
  Mat2 kraus1_;
  double unobserved_ = 0.0;
  // euler
  Mat2 drive_;  // H_R
};

}  // namespace qdemon
