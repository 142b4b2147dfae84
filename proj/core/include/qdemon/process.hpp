#pragma once

// Process-matrix inference along a single record. chi is integrated without
// reference to any initial state; the conditioned state for any rho_i, and
// the effective state E_r(I)/Tr E_r(I), are read off afterwards.
//
// Index convention: E(rho) = sum_jk chi_jk K_j rho K_k^dag.

#include "qdemon/instrument.hpp"
#include "qdemon/qcore.hpp"
#include "qdemon/sim_params.hpp"
#include "qdemon/trajectory.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace qdemon {

/// Sparse form of chi'_jk = sum c[m][m'][j] conj(c[n][n'][k]) T_mn chi_m'n'.
/// Each (m, n, m', n') contributes to exactly one (j, k), so the table holds
/// 256 terms grouped by (m, n); entries of T that are exactly zero are skipped.
class ChiContraction {
 public:
  struct Term {
    std::uint8_t src_row;  // m'
    std::uint8_t src_col;  // n'
    std::uint8_t dst_row;  // j
    std::uint8_t dst_col;  // k
    complex coef;
  };

  static const ChiContraction& instance();

  Mat4 apply(const Mat4& step, const Mat4& chi) const;
  const std::array<Term, 16>& terms(int m, int n) const { return table_[static_cast<std::size_t>(4 * m + n)]; }
  std::size_t size() const { return 256; }

 private:
  ChiContraction();
  std::array<std::array<Term, 16>, 16> table_{};
};

inline constexpr double kRescaleLow = 1e-6;
inline constexpr double kRescaleHigh = 1e6;

/// Streaming chi integrator.
class ProcessIntegrator {
 public:
  explicit ProcessIntegrator(const SimParams& params);

  /// Throws NumericalError on non-finite chi.
  void step(double r);

  const ProcessMatrix& process() const { return chi_; }
  std::size_t steps_taken() const { return steps_; }

 private:
  StepModel model_;
  ProcessMatrix chi_ = ProcessMatrix::identity();
  std::size_t steps_ = 0;
};

struct ProcessPath {
  std::vector<double> times;
  std::vector<ProcessMatrix> chis;
  std::vector<DensityMatrix> effective;  // rho-tilde at each stored time

  std::size_t size() const { return chis.size(); }
  const ProcessMatrix& final_process() const { return chis.back(); }
};

/// Integrates chi along the record, storing every `stride`-th step plus the
/// initial and final points.
ProcessPath evolve_chi(const MeasurementRecord& record, const SimParams& params, std::size_t stride = 1);

/// Final chi only.
ProcessMatrix evolve_chi_final(const MeasurementRecord& record, const SimParams& params);

struct AppliedProcess {
  Mat2 unnormalized;          // sum chi_jk K_j rho K_k^dag, excluding exp(log_scale)
  DensityMatrix normalized;   // unnormalized / trace
  double log_trace = 0.0;     // log Tr E_r(rho) including log_scale
};

/// Throws std::domain_error when Tr E_r(rho_i) <= 0.
AppliedProcess apply_process(const ProcessMatrix& chi, const DensityMatrix& rho_i);

/// The linear map on an arbitrary operator (which need not be positive),
/// without the exp(log_scale) factor.
Mat2 apply_linear(const ProcessMatrix& chi, const Mat2& op);

/// rho-tilde = sum_jkl chi_jk c[j][k][l] K_l, normalized. Throws
/// std::domain_error for zero-trace chi.
DensityMatrix effective_state(const ProcessMatrix& chi);

/// Process matrix of a unitary: chi_jk = u_j conj(u_k) with U = sum_j u_j K_j.
ProcessMatrix unitary_process(const Mat2& u);

}  // namespace qdemon
