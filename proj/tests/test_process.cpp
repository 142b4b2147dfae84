#include "support.hpp"

#include "qdemon/process.hpp"

#include <doctest.h>

using namespace qdemon;

namespace {

SimParams defaults(double duration = 0.94e-6) {
  SimParams p;
  p.duration = duration;
  return p;
}

// Global scale of chi is arbitrary; compare after matching the 00 entry.
double scaled_distance(const Mat4& chi, const Mat4& expected) {
  const complex s = expected(0, 0) / chi(0, 0);
  return (s * chi - expected).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("theta generator entries") {
  const SimParams p;
  const ThetaGenerator theta(p);
  const double r = 0.37;
  const Mat4 t = theta(r);
  const complex i{0.0, 1.0};
  CHECK(t(0, 0) == complex(-p.k));
  CHECK(t(0, 2) == -i * (p.omega_r / 2));
  CHECK(t(2, 0) == i * (p.omega_r / 2));
  CHECK(t(0, 3) == complex(2 * p.eta * p.k * r));
  CHECK(t(3, 0) == complex(2 * p.eta * p.k * r));
  CHECK(t(3, 3) == complex(p.k));
  int nonzero = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) nonzero += t(a, b) != complex{};
  CHECK(nonzero == 6);
  CHECK((t - t.adjoint()).norm() == 0.0);
}

TEST_CASE("euler step of the state equals the theta generator") {
  // sum theta_mn K_m phi K_n is the right-hand side of the linear equation.
  SimParams p;
  p.scheme = StepScheme::euler;
  const StepModel model(p);
  const ThetaGenerator theta(p);
  const Mat2 phi = oracle::bloch_matrix(0.2, 0.0, 0.5);
  for (double r : {-2.0, 0.0, 0.7, 15.0}) {
    const Mat2 via_theta = phi + p.dt * oracle::apply_chi(theta(r), phi);
    CHECK((model.apply(phi, r) - via_theta).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("kraus step matrix is positive semidefinite and matches its action") {
  const SimParams p;
  const StepModel model(p);
  const Mat2 phi = oracle::bloch_matrix(-0.6, 0.0, 0.3);
  for (double r : {-40.0, -1.0, 0.0, 0.5, 33.0}) {
    const Mat4 t = model.step_matrix(r);
    Eigen::SelfAdjointEigenSolver<Mat4> eig(t);
    CHECK(eig.eigenvalues().minCoeff() > -1e-15);
    CHECK((oracle::apply_chi(t, phi) - model.apply(phi, r)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("initial process matrix is the identity") {
  StreamRng rng(1, 0, 0);
  const auto [record, path] = synthesize_record(defaults(), DensityMatrix::ground(), rng);
  const ProcessPath chi = evolve_chi(record, defaults());
  CHECK(chi.chis.front().chi == ProcessMatrix::identity().chi);
  CHECK(chi.times.front() == 0.0);
  CHECK(chi.size() == record.size() + 1);
  CHECK((chi.effective.front().matrix() - DensityMatrix::maximally_mixed().matrix()).norm() == 0.0);
}

TEST_CASE("weak measurement, omega t = 3 pi / 2 reproduces the rotation process") {
  SimParams p;
  p.k = 1e-4;
  p.duration = 1.5 * oracle::pi / p.omega_r;
  p.dt = p.duration / std::round(p.duration / 1e-8);
  const complex i{0.0, 1.0};
  const Mat2 u = (-oracle::pauli(0) + i * oracle::pauli(2)) / std::sqrt(2.0);
  const Mat4 expected = oracle::unitary_chi(u);
  // chi_00 = chi_22 = 1/2, coherence only between 0 and 2.
  CHECK(expected(0, 0).real() == doctest::Approx(0.5));
  CHECK(expected(2, 2).real() == doctest::Approx(0.5));
  for (StepScheme scheme : {StepScheme::kraus, StepScheme::euler}) {
    p.scheme = scheme;
    StreamRng rng(3, 0, 0);
    const SynthesisResult s = synthesize_record_final(p, DensityMatrix::ground(), rng);
    const ProcessMatrix chi = evolve_chi_final(s.record, p);
    // Euler is first order in omega dt.
    CHECK(scaled_distance(chi.chi, expected) < (scheme == StepScheme::kraus ? 1e-4 : 0.1));
  }
}

TEST_CASE("process of a pi rotation sends ground to excited") {
  const ProcessMatrix chi = unitary_process(oracle::ry(oracle::pi));
  const AppliedProcess out = apply_process(chi, DensityMatrix::ground());
  CHECK((out.normalized.matrix() - DensityMatrix::excited().matrix()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((chi.chi - oracle::unitary_chi(oracle::ry(oracle::pi))).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("identity process leaves any state unchanged") {
  std::mt19937_64 gen(1);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix rho = density_from_bloch(oracle::random_bloch(gen));
    const AppliedProcess out = apply_process(ProcessMatrix::identity(), rho);
    CHECK((out.normalized.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(out.log_trace == doctest::Approx(0.0));
  }
}

TEST_CASE("process reconstruction equals the state filter along 1000 records") {
  std::mt19937_64 gen(2024);
  for (StepScheme scheme : {StepScheme::kraus, StepScheme::euler}) {
    SimParams p = defaults();
    p.scheme = scheme;
    double worst = 0.0, worst_effective = 0.0;
    for (std::uint64_t shot = 0; shot < 1000; ++shot) {
      StreamRng rng(31, 0, shot);
      const DensityMatrix truth_init = density_from_bloch(oracle::random_bloch(gen, true));
      const auto [record, path] = synthesize_record(p, truth_init, rng);
      const ProcessPath chi = evolve_chi(record, p);
      const DensityMatrix other = density_from_bloch(oracle::random_bloch(gen));
      const TrajectoryPath other_path = filter_sme(record, other, p);
      const TrajectoryPath mixed_path = filter_sme(record, DensityMatrix::maximally_mixed(), p);
      for (std::size_t i = 0; i < chi.size(); ++i) {
        worst = std::max(worst, sup_norm(apply_process(chi.chis[i], truth_init).normalized.matrix() -
                                         path.states[i].matrix()));
        worst = std::max(worst, sup_norm(apply_process(chi.chis[i], other).normalized.matrix() -
                                         other_path.states[i].matrix()));
        worst_effective =
            std::max(worst_effective, sup_norm(chi.effective[i].matrix() - mixed_path.states[i].matrix()));
      }
    }
    CHECK(worst <= 1e-8);
    CHECK(worst_effective <= 1e-8);
  }
}

TEST_CASE("path weight differences agree between the pipelines") {
  const SimParams p = defaults();
  StreamRng rng(5, 0, 0);
  const SynthesisResult s = synthesize_record_final(p, thermal_state(1.0), rng);
  const ProcessMatrix chi = evolve_chi_final(s.record, p);
  const double filter_diff =
      path_weight(s.record, DensityMatrix::ground(), p) - path_weight(s.record, DensityMatrix::excited(), p);
  const double chi_diff = apply_process(chi, DensityMatrix::ground()).log_trace -
                          apply_process(chi, DensityMatrix::excited()).log_trace;
  CHECK(chi_diff == doctest::Approx(filter_diff).epsilon(1e-10));
}

TEST_CASE("chi stays Hermitian and positive over 10^6 steps") {
  SimParams p;
  p.duration = 1e6 * p.dt;
  ProcessIntegrator integrator(p);
  StateFilter filter(p, DensityMatrix::maximally_mixed());
  StreamRng rng(77, 0, 0);
  bool ok = true;
  std::size_t rescaled_checks = 0;
  for (std::size_t j = 0; j < 1000000; ++j) {
    const double r = filter.model().sample_record(filter.state(), rng);
    filter.step(r);
    integrator.step(r);
    if (j % 1000 == 999) {
      const ProcessMatrix& chi = integrator.process();
      ok = ok && chi.satisfies_invariants() && (chi.chi - chi.chi.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * chi.max_abs();
      ok = ok && chi.max_abs() >= kRescaleLow && chi.max_abs() <= kRescaleHigh;
      ++rescaled_checks;
    }
  }
  CHECK(ok);
  CHECK(rescaled_checks == 1000);
  CHECK(std::isfinite(integrator.process().log_scale));
  CHECK(sup_norm(effective_state(integrator.process()).matrix() - filter.state()) < 1e-8);
}

TEST_CASE("log-scale bookkeeping is exact") {
  const SimParams p = defaults();
  StreamRng rng(8, 0, 0);
  const SynthesisResult s = synthesize_record_final(p, DensityMatrix::ground(), rng);
  const ProcessMatrix chi = evolve_chi_final(s.record, p);
  const double shift = 3.25;
  ProcessMatrix scaled = chi;
  scaled.chi *= std::exp(shift);
  scaled.log_scale -= shift;
  for (const DensityMatrix& rho : {DensityMatrix::ground(), DensityMatrix::excited(), thermal_state(0.7)}) {
    const AppliedProcess a = apply_process(chi, rho);
    const AppliedProcess b = apply_process(scaled, rho);
    CHECK(sup_norm(a.normalized.matrix() - b.normalized.matrix()) < 1e-15);
    CHECK(b.log_trace == doctest::Approx(a.log_trace).epsilon(1e-14));
  }
  CHECK(sup_norm(effective_state(chi).matrix() - effective_state(scaled).matrix()) < 1e-15);
}

TEST_CASE("effective state of unitary evolution is maximally mixed") {
  SimParams p = defaults();
  p.k = 1e-4;
  StreamRng rng(1, 0, 0);
  const auto [record, path] = synthesize_record(p, DensityMatrix::ground(), rng);
  const ProcessPath chi = evolve_chi(record, p, 10);
  for (const DensityMatrix& e : chi.effective)
    CHECK(sup_norm(e.matrix() - DensityMatrix::maximally_mixed().matrix()) < 1e-4);
  CHECK(sup_norm(effective_state(unitary_process(oracle::ry(1.1))).matrix() -
                 DensityMatrix::maximally_mixed().matrix()) < 1e-15);
}

TEST_CASE("a positive record without drive biases the effective state toward ground") {
  SimParams p = defaults(0.5e-6);
  p.omega_r = 0.0;
  MeasurementRecord ones{std::vector<double>(p.steps(), 2.0), p.dt, p.eta, RecordOrigin::external};
  const DensityMatrix effective = effective_state(evolve_chi_final(ones, p));
  CHECK(bloch_from_density(effective).z > 0.1);
  CHECK(sup_norm(effective.matrix() - filter_sme_final(ones, DensityMatrix::maximally_mixed(), p).state()) < 1e-8);
}

TEST_CASE("average effective state over records from I/2 is I/2") {
  const SimParams p = defaults(0.5e-6);
  const std::size_t n = 5000;
  Eigen::Vector3d sum = Eigen::Vector3d::Zero(), sum_sq = Eigen::Vector3d::Zero();
  for (std::uint64_t shot = 0; shot < n; ++shot) {
    StreamRng rng(41, 0, shot);
    const SynthesisResult s = synthesize_record_final(p, DensityMatrix::maximally_mixed(), rng);
    const BlochVector b = bloch_from_density(effective_state(evolve_chi_final(s.record, p)));
    const Eigen::Vector3d v(b.x, b.y, b.z);
    sum += v;
    sum_sq += v.cwiseAbs2();
  }
  for (int c = 0; c < 3; ++c) {
    const double mean = sum(c) / n;
    const double se = std::sqrt(std::max(sum_sq(c) / n - mean * mean, 0.0) / n);
    CHECK(std::abs(mean) <= std::max(5.0 * se, 1e-12));
  }
}

TEST_CASE("degenerate process matrices are rejected") {
  ProcessMatrix zero;
  CHECK_THROWS_AS(apply_process(zero, DensityMatrix::ground()), std::domain_error);
  CHECK_THROWS_AS(effective_state(zero), std::domain_error);
}

TEST_CASE("apply_linear handles non-positive operators") {
  const ProcessMatrix chi = unitary_process(oracle::ry(0.4));
  const Mat2 op = thermal_state(1.0).matrix() * hamiltonian();
  const Mat2 expected = oracle::ry(0.4) * op * oracle::ry(0.4).adjoint();
  CHECK(sup_norm(apply_linear(chi, op) - expected) < 1e-15);
}

TEST_CASE("contraction table has 256 terms") { CHECK(ChiContraction::instance().size() == 256); }
