#include "support.hpp"

#include "qdemon/qcore.hpp"

#include <doctest.h>

#include <random>

using namespace qdemon;

TEST_CASE("structure constants reproduce every Pauli product") {
  const PauliBasis& basis = PauliBasis::instance();
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      const Mat2 direct = oracle::pauli(j) * oracle::pauli(k);
      Mat2 expanded = Mat2::Zero();
      int nonzero = 0;
      for (int l = 0; l < 4; ++l) {
        // Tr(sigma_l sigma_j sigma_k) / 2 is the coefficient of sigma_l.
        const complex expected = (oracle::pauli(l) * direct).trace() / 2.0;
        CHECK(std::abs(basis.c(j, k, l) - expected) < 1e-15);
        if (std::abs(expected) > 0) ++nonzero;
        expanded += basis.c(j, k, l) * oracle::pauli(l);
      }
      CHECK(nonzero == 1);
      CHECK((expanded - direct).cwiseAbs().maxCoeff() < 1e-15);
      CHECK(std::abs(basis.product_coefficient(j, k) - basis.c(j, k, basis.product_index(j, k))) == 0.0);
    }
}

TEST_CASE("basis operators are the Pauli matrices") {
  for (int j = 0; j < 4; ++j) CHECK((PauliBasis::instance().op(j) - oracle::pauli(j)).norm() == 0.0);
}

TEST_CASE("coefficient expansion round trips") {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 50; ++trial) {
    Mat2 m;
    m << complex(n(gen), n(gen)), complex(n(gen), n(gen)), complex(n(gen), n(gen)), complex(n(gen), n(gen));
    const auto& b = PauliBasis::instance();
    CHECK((b.from_coefficients(b.coefficients(m)) - m).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("Bloch conversion round trips on 1000 random states") {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 1000; ++i) {
    const BlochVector v = oracle::random_bloch(gen);
    const DensityMatrix rho = density_from_bloch(v);
    CHECK((rho.matrix() - oracle::bloch_matrix(v.x, v.y, v.z)).cwiseAbs().maxCoeff() < 1e-15);
    const BlochVector w = bloch_from_density(rho);
    CHECK(std::abs(w.x - v.x) < 1e-14);
    CHECK(std::abs(w.y - v.y) < 1e-14);
    CHECK(std::abs(w.z - v.z) < 1e-14);
    CHECK(rho.is_normalized_state());
    CHECK(is_hermitian(rho.matrix()));
  }
}

TEST_CASE("Bloch vectors outside the ball are rejected") {
  CHECK_THROWS_AS(density_from_bloch({1.0, 0.0, 0.1}), std::invalid_argument);
  CHECK_NOTHROW(density_from_bloch({0.0, 0.0, 1.0 + 1e-10}));
}

TEST_CASE("density matrices must be Hermitian") {
  Mat2 m;
  m << 0.5, 0.3, 0.1, 0.5;
  CHECK_THROWS_AS(DensityMatrix{m}, std::invalid_argument);
  m(1, 0) = 0.3 + 1e-13;
  const DensityMatrix rho(m);
  CHECK(is_hermitian(rho.matrix(), 0.0));
}

TEST_CASE("energy levels and Hamiltonian") {
  CHECK(energy(Level::ground) == -0.5);
  CHECK(energy(Level::excited) == 0.5);
  CHECK((hamiltonian() + 0.5 * oracle::pauli(3)).norm() == 0.0);
  CHECK(DensityMatrix::ground().expectation(hamiltonian()) == doctest::Approx(-0.5));
  CHECK(DensityMatrix::excited().expectation(hamiltonian()) == doctest::Approx(0.5));
}

TEST_CASE("thermal populations") {
  const ThermalPopulations p0 = thermal_populations(0.0);
  CHECK(p0.ground == 0.5);
  CHECK(p0.excited == 0.5);

  const double expected = std::exp(0.65) / (2.0 * std::cosh(0.65));
  CHECK(thermal_populations(1.3).ground == doctest::Approx(expected).epsilon(1e-15));
  CHECK(thermal_populations(1.3).ground + thermal_populations(1.3).excited == doctest::Approx(1.0).epsilon(1e-15));

  const ThermalPopulations cold = thermal_populations(std::numeric_limits<double>::infinity());
  CHECK(cold.ground == 1.0);
  CHECK(cold.excited == 0.0);
  CHECK(thermal_populations(2000.0).ground == 1.0);

  CHECK_THROWS_AS(thermal_populations(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(thermal_populations(std::nan("")), std::invalid_argument);
}

TEST_CASE("thermal state commutes with H") {
  for (double beta : {0.0, 0.5, 1.3, 2.5, 40.0}) {
    const DensityMatrix rho = thermal_state(beta);
    CHECK(operator_norm(rho.matrix() * hamiltonian() - hamiltonian() * rho.matrix()) < 1e-15);
    CHECK(rho.is_normalized_state());
    // Boltzmann ratio P_e / P_g = e^{-beta}.
    CHECK(rho.population(Level::excited) / rho.population(Level::ground) == doctest::Approx(std::exp(-beta)));
  }
}

TEST_CASE("identity process matrix") {
  const ProcessMatrix chi = ProcessMatrix::identity();
  CHECK(chi.chi(0, 0) == complex(1.0));
  CHECK(chi.chi.cwiseAbs().sum() == 1.0);
  CHECK(chi.log_scale == 0.0);
  CHECK(chi.satisfies_invariants());
}

TEST_CASE("process matrix invariants detect negative eigenvalues") {
  ProcessMatrix chi = ProcessMatrix::identity();
  chi.chi(3, 3) = -0.1;
  CHECK_FALSE(chi.satisfies_invariants());
}

TEST_CASE("state diagnostics") {
  CHECK(DensityMatrix::ground().purity() == doctest::Approx(1.0));
  CHECK(DensityMatrix::maximally_mixed().purity() == doctest::Approx(0.5));
  CHECK(DensityMatrix::maximally_mixed().min_eigenvalue() == doctest::Approx(0.5));
  CHECK_THROWS_AS(DensityMatrix(Mat2::Zero()).normalized(), std::domain_error);
  CHECK(DensityMatrix(2.0 * DensityMatrix::ground().matrix()).normalized().is_normalized_state());
  CHECK_FALSE(DensityMatrix(2.0 * DensityMatrix::ground().matrix()).is_normalized_state());
}

TEST_CASE("norms") {
  Mat2 m;
  m << 0, 2, 0, 0;
  CHECK(operator_norm(m) == doctest::Approx(2.0));
  CHECK(sup_norm(m) == 2.0);
}
