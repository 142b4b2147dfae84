#pragma once

// Two-level-system algebra shared by every other module: the Pauli operator
// basis and its structure constants, density and process matrices, the qubit
// Hamiltonian and thermal states.
//
// Conventions:
//   * basis order {I, sigma_x, sigma_y, sigma_z}, indices 0..3;
//   * energies in units of hbar*omega, H = -sigma_z / 2;
//   * matrix index 0 is the sigma_z = +1 eigenstate, which is the ground state.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace qdemon {

using complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

inline constexpr int kBasisSize = 4;
inline constexpr double kHermitianTol = 1e-12;

/// Raised when an integration produces a non-finite or non-positive quantity.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

enum class Level : int { ground = 0, excited = 1 };

/// Eigenvalue of H = -sigma_z/2 for the given level.
constexpr double energy(Level level) { return level == Level::ground ? -0.5 : 0.5; }

constexpr int index(Level level) { return static_cast<int>(level); }

const Mat2& hamiltonian();

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

/// A Hermitian 2x2 operator. Used for normalized states, unnormalized
/// conditioned operators and the occasional non-positive operator such as
/// rho_th * H. Every constructor enforces Hermiticity.
class DensityMatrix {
 public:
  DensityMatrix();  // I/2

  /// Rejects matrices whose anti-Hermitian part exceeds 1e-12 element-wise,
  /// then stores the Hermitian part.
  explicit DensityMatrix(const Mat2& m);

  static DensityMatrix ground();
  static DensityMatrix excited();
  static DensityMatrix maximally_mixed();
  static DensityMatrix pure(Level level);

  const Mat2& matrix() const { return m_; }
  complex operator()(int r, int c) const { return m_(r, c); }

  double trace() const { return m_.trace().real(); }
  double population(Level level) const { return m_(index(level), index(level)).real(); }
  double purity() const;
  double min_eigenvalue() const;
  double expectation(const Mat2& op) const;

  /// Divides by the trace. Throws std::domain_error when trace <= 0.
  DensityMatrix normalized() const;

  /// Normalized-state invariants: trace 1 +- 1e-10, eigenvalues >= -1e-9.
  bool is_normalized_state() const;

 private:
  struct Unchecked {};
  DensityMatrix(const Mat2& m, Unchecked) : m_(m) {}
  friend DensityMatrix hermitian_part(const Mat2& m);

  Mat2 m_;
};

/// (m + m^dag)/2 without a tolerance check; used inside integrators where
/// float drift is expected and removed every step.
DensityMatrix hermitian_part(const Mat2& m);

bool is_hermitian(const Mat2& m, double tol = kHermitianTol);

BlochVector bloch_from_density(const DensityMatrix& rho);
BlochVector bloch_from_density(const Mat2& rho);
DensityMatrix density_from_bloch(const BlochVector& v);

/// Pauli operators {I, sigma_x, sigma_y, sigma_z} and the structure constants
/// c[j][k][l] defined by K_j K_k = sum_l c[j][k][l] K_l.
class PauliBasis {
 public:
  using Tensor = std::array<std::array<std::array<complex, 4>, 4>, 4>;

  static const PauliBasis& instance();

  const Mat2& op(int j) const { return ops_[static_cast<std::size_t>(j)]; }
  const Tensor& structure() const { return c_; }
  complex c(int j, int k, int l) const {
    return c_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
  }

  /// The single l with c[j][k][l] != 0, and its value.
  int product_index(int j, int k) const { return product_index_[static_cast<std::size_t>(4 * j + k)]; }
  complex product_coefficient(int j, int k) const { return c(j, k, product_index(j, k)); }

  /// a_j = Tr(K_j m) / 2, so that m = sum_j a_j K_j.
  Vec4 coefficients(const Mat2& m) const;
  Mat2 from_coefficients(const Vec4& a) const;

 private:
  PauliBasis();

  std::array<Mat2, 4> ops_;
  Tensor c_{};
  std::array<int, 16> product_index_{};
};

PauliBasis::Tensor structure_constants();

/// Quantum process matrix chi with an accumulated natural-log scale:
/// the physical (unnormalized) process is exp(log_scale) * chi.
struct ProcessMatrix {
  Mat4 chi = Mat4::Zero();
  double log_scale = 0.0;

  /// chi_00 = 1, everything else zero: the identity operation.
  static ProcessMatrix identity();

  void hermitize() { chi = 0.5 * (chi + chi.adjoint()).eval(); }
  double max_abs() const { return chi.cwiseAbs().maxCoeff(); }
  double trace() const { return chi.trace().real(); }
  /// Eigenvalues of the Hermitian part, ascending.
  Eigen::Vector4d eigenvalues() const;
  /// Hermitian to 1e-10, real diagonal >= -1e-8, min eigenvalue >= -1e-6 * max eigenvalue.
  bool satisfies_invariants() const;
};

struct ThermalPopulations {
  double ground = 0.5;
  double excited = 0.5;

  double of(Level level) const { return level == Level::ground ? ground : excited; }
};

/// P_g = e^{beta/2} / (2 cosh(beta/2)), evaluated without overflow; beta may be +inf.
ThermalPopulations thermal_populations(double beta);
DensityMatrix thermal_state(double beta);

/// Operator norm (largest singular value) of a 2x2 matrix.
double operator_norm(const Mat2& m);
double sup_norm(const Mat2& m);

}  // namespace qdemon
