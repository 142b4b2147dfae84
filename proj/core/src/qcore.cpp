#include "qdemon/qcore.hpp"

#include <cmath>
#include <limits>

namespace qdemon {

namespace {

constexpr complex kI{0.0, 1.0};

Mat2 make_op(complex a, complex b, complex c, complex d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

}  // namespace

const Mat2& hamiltonian() {
  static const Mat2 h = make_op(-0.5, 0.0, 0.0, 0.5);
  return h;
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

DensityMatrix::DensityMatrix() : m_(Mat2::Identity() * 0.5) {}

DensityMatrix::DensityMatrix(const Mat2& m) {
  if (!m.allFinite()) throw std::invalid_argument("density matrix has non-finite entries");
  if (!is_hermitian(m)) throw std::invalid_argument("density matrix is not Hermitian");
  m_ = 0.5 * (m + m.adjoint());
}

DensityMatrix DensityMatrix::ground() { return pure(Level::ground); }
DensityMatrix DensityMatrix::excited() { return pure(Level::excited); }
DensityMatrix DensityMatrix::maximally_mixed() { return DensityMatrix(); }

DensityMatrix DensityMatrix::pure(Level level) {
  Mat2 m = Mat2::Zero();
  m(index(level), index(level)) = 1.0;
  return DensityMatrix(m, Unchecked{});
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double DensityMatrix::min_eigenvalue() const {
  // Hermitian 2x2: eigenvalues (a+d)/2 -+ sqrt(((a-d)/2)^2 + |b|^2).
  const double a = m_(0, 0).real();
  const double d = m_(1, 1).real();
  const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m_(0, 1)));
  return 0.5 * (a + d) - half_gap;
}

double DensityMatrix::expectation(const Mat2& op) const { return (m_ * op).trace().real(); }

DensityMatrix DensityMatrix::normalized() const {
  const double tr = trace();
  if (!(tr > 0.0) || !std::isfinite(tr)) throw std::domain_error("cannot normalize operator with trace <= 0");
  return DensityMatrix(m_ / tr, Unchecked{});
}

bool DensityMatrix::is_normalized_state() const {
  return std::abs(trace() - 1.0) <= 1e-10 && min_eigenvalue() >= -1e-9 && is_hermitian(m_);
}

DensityMatrix hermitian_part(const Mat2& m) { return DensityMatrix(0.5 * (m + m.adjoint()), DensityMatrix::Unchecked{}); }

bool is_hermitian(const Mat2& m, double tol) { return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol; }

BlochVector bloch_from_density(const DensityMatrix& rho) {
  const Mat2& m = rho.matrix();
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

BlochVector bloch_from_density(const Mat2& rho) { return bloch_from_density(DensityMatrix(rho)); }

DensityMatrix density_from_bloch(const BlochVector& v) {
  if (!(v.norm() <= 1.0 + 1e-9)) throw std::invalid_argument("Bloch vector outside the unit ball");
  return DensityMatrix(make_op(0.5 * (1.0 + v.z), 0.5 * complex(v.x, -v.y), 0.5 * complex(v.x, v.y), 0.5 * (1.0 - v.z)));
}

PauliBasis::PauliBasis() {
  ops_[0] = Mat2::Identity();
  ops_[1] = make_op(0.0, 1.0, 1.0, 0.0);
  ops_[2] = make_op(0.0, -kI, kI, 0.0);
  ops_[3] = make_op(1.0, 0.0, 0.0, -1.0);

  // Tr(K_l K_j K_k)/2 projects the product onto K_l (the basis is orthogonal
  // under the Hilbert-Schmidt product with norm 2).
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) {
      const Mat2 prod = ops_[static_cast<std::size_t>(j)] * ops_[static_cast<std::size_t>(k)];
      for (int l = 0; l < 4; ++l) {
        complex v = 0.5 * (ops_[static_cast<std::size_t>(l)] * prod).trace();
        // Entries are exactly 0, +-1 or +-i; strip rounding noise.
        v = {std::round(v.real()), std::round(v.imag())};
        c_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] = v;
        if (v != complex{}) product_index_[static_cast<std::size_t>(4 * j + k)] = l;
      }
    }
  }
}

const PauliBasis& PauliBasis::instance() {
  static const PauliBasis basis;
  return basis;
}

Vec4 PauliBasis::coefficients(const Mat2& m) const {
  Vec4 a;
  for (int j = 0; j < 4; ++j) a(j) = 0.5 * (op(j) * m).trace();
  return a;
}

Mat2 PauliBasis::from_coefficients(const Vec4& a) const {
  Mat2 m = Mat2::Zero();
  for (int j = 0; j < 4; ++j) m += a(j) * op(j);
  return m;
}

PauliBasis::Tensor structure_constants() { return PauliBasis::instance().structure(); }

ProcessMatrix ProcessMatrix::identity() {
  ProcessMatrix p;
  p.chi(0, 0) = 1.0;
  return p;
}

Eigen::Vector4d ProcessMatrix::eigenvalues() const {
  const Mat4 h = 0.5 * (chi + chi.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

bool ProcessMatrix::satisfies_invariants() const {
  if (!chi.allFinite()) return false;
  if ((chi - chi.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, max_abs())) return false;
  for (int j = 0; j < 4; ++j) {
    if (chi(j, j).real() < -1e-8 * std::max(1.0, max_abs())) return false;
  }
  const Eigen::Vector4d ev = eigenvalues();
  return ev(0) >= -1e-6 * std::max(ev(3), 0.0);
}

ThermalPopulations thermal_populations(double beta) {
  if (std::isnan(beta) || beta < 0.0) throw std::invalid_argument("beta must be >= 0");
  // p_g = 1 / (1 + e^{-beta}), stable for large beta and exact at +inf.
  const double boltz = std::exp(-beta);
  ThermalPopulations p;
  p.ground = 1.0 / (1.0 + boltz);
  p.excited = boltz / (1.0 + boltz);
  return p;
}

DensityMatrix thermal_state(double beta) {
  const ThermalPopulations p = thermal_populations(beta);
  return DensityMatrix(make_op(p.ground, 0.0, 0.0, p.excited));
}

double operator_norm(const Mat2& m) {
  Eigen::JacobiSVD<Mat2> svd(m);
  return svd.singularValues()(0);
}

double sup_norm(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace qdemon
