#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the library's algebra; matrices are written out by hand.

#include "qdemon/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using qdemon::complex;
using qdemon::Mat2;
using qdemon::Mat4;

inline constexpr double pi = std::numbers::pi;

inline Mat2 pauli(int j) {
  const complex i{0.0, 1.0};
  Mat2 m;
  switch (j) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

/// exp(i a sigma_y / 2) in closed form.
inline Mat2 ry(double a) {
  Mat2 u;
  u << std::cos(a / 2), std::sin(a / 2), -std::sin(a / 2), std::cos(a / 2);
  return u;
}

/// chi of rho -> U rho U^dag with U = sum u_j sigma_j, u_j = Tr(sigma_j U)/2.
inline Mat4 unitary_chi(const Mat2& u) {
  qdemon::Vec4 a;
  for (int j = 0; j < 4; ++j) a(j) = (pauli(j) * u).trace() / 2.0;
  return a * a.adjoint();
}

/// sum chi_jk sigma_j rho sigma_k
inline Mat2 apply_chi(const Mat4& chi, const Mat2& rho) {
  Mat2 out = Mat2::Zero();
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) out += chi(j, k) * pauli(j) * rho * pauli(k);
  return out;
}

inline Mat2 bloch_matrix(double x, double y, double z) {
  return 0.5 * (pauli(0) + x * pauli(1) + y * pauli(2) + z * pauli(3));
}

/// Uniform random point in the Bloch ball.
inline qdemon::BlochVector random_bloch(std::mt19937_64& gen, bool xz_plane = false) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    qdemon::BlochVector v{u(gen), xz_plane ? 0.0 : u(gen), u(gen)};
    if (v.x * v.x + v.y * v.y + v.z * v.z <= 1.0) return v;
  }
}

/// Two-sample Kolmogorov-Smirnov statistic and its asymptotic p-value.
inline double ks_pvalue(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  const double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  return std::clamp(p, 0.0, 1.0);
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Fresh directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("qdemon-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oracle
