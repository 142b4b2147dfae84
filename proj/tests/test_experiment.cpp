#include "support.hpp"

#include "qdemon/experiment.hpp"

#include <doctest.h>

#include <algorithm>

using namespace qdemon;

TEST_CASE("degradation variance") {
  const double k = 2 * oracle::pi * 57e3;
  const double expected = (1 / 0.24 - 1 / 0.48) / (4 * k * 1e-8);
  CHECK(degradation_variance(k, 1e-8, 0.48, 0.24) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(degradation_variance(k, 1e-8, 0.48, 0.48 - 1e-12) < 1e-6);
  CHECK_THROWS_AS(degradation_variance(k, 1e-8, 0.48, 0.48), std::invalid_argument);
  CHECK_THROWS_AS(degradation_variance(k, 1e-8, 0.48, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(degradation_variance(k, 1e-8, 0.48, 0.0), std::invalid_argument);
}

TEST_CASE("added noise has the degradation variance") {
  // Variance identity on 10^6 draws: 1/(4 k dt eta') = 1/(4 k dt eta) + sigma^2.
  const double k = 2 * oracle::pi * 57e3, dt = 1e-8;
  MeasurementRecord zero{std::vector<double>(1000000, 0.0), dt, 0.48, RecordOrigin::synthesized};
  StreamRng rng(1, 0, 0);
  const MeasurementRecord out = degrade_record(zero, k, 0.48, 0.24, rng);
  CHECK(out.origin == RecordOrigin::degraded);
  CHECK(out.eta_used == 0.24);
  double sum = 0, sum_sq = 0;
  for (double r : out.samples) {
    sum += r;
    sum_sq += r * r;
  }
  const double n = static_cast<double>(out.size());
  const double var = sum_sq / n - (sum / n) * (sum / n);
  CHECK(var == doctest::Approx(degradation_variance(k, dt, 0.48, 0.24)).epsilon(0.005));
  CHECK(1 / (4 * k * dt * 0.48) + var == doctest::Approx(1 / (4 * k * dt * 0.24)).epsilon(0.005));
}

TEST_CASE("degradation near the original efficiency leaves the record unchanged") {
  SimParams p;
  StreamRng rng(2, 0, 0);
  const SynthesisResult s = synthesize_record_final(p, DensityMatrix::ground(), rng);
  StreamRng noise(2, 1, 0);
  const MeasurementRecord d = degrade_record(s.record, p.k, p.eta, p.eta * (1 - 1e-14), noise);
  for (std::size_t j = 0; j < s.record.size(); ++j) CHECK(d.samples[j] == doctest::Approx(s.record.samples[j]));
}

TEST_CASE("degraded records are distributed like records taken at the lower efficiency") {
  // Two-sample KS test on the first increments from a fixed state and on the
  // sum over a short record.
  SimParams hi;
  hi.duration = 0.2e-6;
  const SimParams lo = hi.with_eta(0.24);
  const std::size_t n = 20000;
  std::vector<double> first_a, first_b, sum_a, sum_b;
  for (std::uint64_t s = 0; s < n; ++s) {
    StreamRng a(3, 0, s), b(3, 1, s), noise(3, 2, s);
    const SynthesisResult ra = synthesize_record_final(hi, thermal_state(1.0), a);
    const MeasurementRecord degraded = degrade_record(ra.record, hi.k, hi.eta, 0.24, noise);
    const SynthesisResult rb = synthesize_record_final(lo, thermal_state(1.0), b);
    first_a.push_back(degraded.samples[0]);
    first_b.push_back(rb.record.samples[0]);
    double xa = 0, xb = 0;
    for (std::size_t j = 0; j < degraded.size(); ++j) {
      xa += degraded.samples[j];
      xb += rb.record.samples[j];
    }
    sum_a.push_back(xa);
    sum_b.push_back(xb);
  }
  CHECK(oracle::ks_pvalue(first_a, first_b) > 0.01);
  CHECK(oracle::ks_pvalue(sum_a, sum_b) > 0.01);
}

TEST_CASE("standard error") {
  const std::vector<double> ones{1, 1, 1, 1};
  CHECK(standard_error(ones) == 0.0);
  const std::vector<double> two{0, 2};
  CHECK(standard_error(two) == doctest::Approx(0.70710678118654752));
  const std::vector<double> single{3};
  CHECK_THROWS_AS(standard_error(single), std::invalid_argument);
  CHECK(difference_se(3, 4) == doctest::Approx(5.0));
}

TEST_CASE("standard error is permutation invariant and scales as 1/sqrt(N)") {
  StreamRng rng(4, 0, 0);
  std::vector<double> big(10000), small(100);
  for (double& x : big) x = rng.normal();
  for (double& x : small) x = rng.normal();
  const double se_big = standard_error(big);
  std::vector<double> shuffled = big;
  std::mt19937_64 gen(1);
  std::shuffle(shuffled.begin(), shuffled.end(), gen);
  CHECK(standard_error(shuffled) == doctest::Approx(se_big).epsilon(1e-12));
  CHECK(standard_error(small) / se_big == doctest::Approx(10.0).epsilon(0.1));
}

TEST_CASE("single-cell sweep") {
  SimParams p;
  SweepGrid grid;
  grid.betas = {2.5};
  grid.etas = {0.24};
  grid.times = {0.3e-6};
  grid.shots = 300;
  const SweepResult a = sweep(grid, p, {3, 0, 1});
  REQUIRE(a.cells.size() == 1);
  const SweepCell& c = a.cells[0];
  REQUIRE(c.gamma_gain);
  REQUIRE(c.work_gain);
  CHECK(std::isfinite(c.gamma_gain->se));
  CHECK(c.gamma_gain->se > 0);
  CHECK(std::isfinite(c.work_gain->se));
  CHECK(c.results.size() == 2);
  CHECK(c.results[0].policy == PolicyKind::rho_demon);
  CHECK(a.invariant_violations == 0);
  CHECK(c.gamma_gain->value ==
        doctest::Approx(c.results[1].gamma().value - c.results[0].gamma().value).epsilon(1e-15));

  const SweepResult b = sweep(grid, p, {3, 0, 3});
  CHECK(b.cells[0].gamma_gain->value == c.gamma_gain->value);
  CHECK(b.cells[0].work_gain->se == c.work_gain->se);
}

TEST_CASE("sweep grid validation") {
  SimParams p;
  SweepGrid grid;
  grid.etas = {0.6};
  CHECK_THROWS_AS(grid.validate(p), std::invalid_argument);
  grid = SweepGrid{};
  grid.shots = 1;
  CHECK_THROWS_AS(grid.validate(p), std::invalid_argument);
  grid = SweepGrid{};
  grid.betas.clear();
  CHECK_THROWS_AS(grid.validate(p), std::invalid_argument);
  CHECK(SweepGrid{}.cells() == 27);
}

TEST_CASE("histograms") {
  const std::vector<double> zeros(50, 0.0);
  const Histogram h = work_histogram(zeros, tpm_work_edges());
  CHECK(h.counts == std::vector<std::size_t>{0, 50, 0});
  CHECK(h.freq[1] == 1.0);
  CHECK(h.mean == 0.0);

  const std::vector<double> values{-1.0, -0.95, 0.0, 0.5, 1.0, 1.5};
  const Histogram u = work_histogram(values, uniform_edges(4));
  CHECK(u.edges.size() == 5);
  CHECK(u.counts == std::vector<std::size_t>{2, 0, 1, 2});
  CHECK(u.out_of_range == 1);
  CHECK(u.mean == doctest::Approx(1.05 / 6));

  const std::vector<double> none;
  CHECK_THROWS_AS(work_histogram(none, tpm_work_edges()), std::invalid_argument);
  const std::vector<double> bad_edges{0.0, 0.0};
  CHECK_THROWS_AS(work_histogram(values, bad_edges), std::invalid_argument);
  CHECK(uniform_edges().size() == 41);
}

TEST_CASE("feedback shifts the mean work toward extraction") {
  SimParams p;
  p.duration = 0.5e-6;
  const auto none = run_tpm_ensemble(p, 0.5, {PolicyKind::none}, 4000, {5, 0, 1});
  const auto rho = run_tpm_ensemble(p, 0.5, {PolicyKind::rho_demon}, 4000, {5, 0, 1});
  std::vector<double> w_none, w_rho, wr_rho;
  for (const auto& s : none.shots) w_none.push_back(s.work);
  for (const auto& s : rho.shots) {
    w_rho.push_back(s.work);
    wr_rho.push_back(s.conditional_work);
  }
  const Histogram a = work_histogram(w_none, tpm_work_edges());
  const Histogram b = work_histogram(w_rho, tpm_work_edges());
  const Histogram c = work_histogram(wr_rho, uniform_edges());
  CHECK(b.mean < a.mean);
  CHECK(c.out_of_range == 0);
  CHECK(std::abs(b.mean - c.mean) <= 3 * difference_se(standard_error(w_rho), standard_error(wr_rho)));
}

TEST_CASE("tomography of a measurement eigenstate without drive") {
  SimParams p;
  p.omega_r = 0.0;
  StreamRng rng(1, 0, 0);
  const SynthesisResult ref = synthesize_record_final(p, DensityMatrix::ground(), rng);
  const std::vector<double> times{0.2e-6, 0.5e-6, 0.94e-6};
  const ValidationReport r = tomographic_validate(ref.record, p, DensityMatrix::ground(), 500, times, 0.04, {1, 1, 1});
  CHECK(r.pass());
  for (const ValidationPoint& pt : r.points) {
    if (pt.axis != BlochAxis::z) continue;
    CHECK(pt.predicted == 1.0);
    CHECK(pt.subensemble == 500);
    CHECK(pt.tomographic == 1.0);
  }
}

TEST_CASE("tomography in the weak measurement limit follows the Rabi cosine") {
  SimParams p;
  p.k = 1e-4;
  StreamRng rng(1, 0, 0);
  const SynthesisResult ref = synthesize_record_final(p, DensityMatrix::ground(), rng);
  const std::vector<double> times{0.2e-6, 0.5e-6, 0.94e-6};
  const ValidationReport r = tomographic_validate(ref.record, p, DensityMatrix::ground(), 4000, times, 0.04, {1, 1, 1});
  CHECK(r.pass());
  for (const ValidationPoint& pt : r.points) {
    CHECK(pt.subensemble == 4000);
    const double exact = pt.axis == BlochAxis::z ? std::cos(p.omega_r * pt.t) : -std::sin(p.omega_r * pt.t);
    CHECK(std::abs(pt.predicted - exact) < 1e-4);
    CHECK(std::abs(pt.tomographic - exact) <= 3 * pt.se + 0.04);
  }
}

TEST_CASE("tomographic validation at default settings") {
  SimParams p;
  StreamRng rng(2, 0, 0);
  const SynthesisResult ref = synthesize_record_final(p, DensityMatrix::ground(), rng);
  const std::vector<double> times{0.2e-6, 0.5e-6, 0.94e-6};
  const ValidationReport r =
      tomographic_validate(ref.record, p, DensityMatrix::ground(), 20000, times, 0.04, {2, 1, 1});
  CHECK(r.points.size() == 6);
  CHECK(r.pass());
  for (const ValidationPoint& pt : r.points) CHECK(pt.subensemble >= 100);
  CHECK_THROWS_AS(tomographic_validate(ref.record, p, DensityMatrix::ground(), 10, std::vector<double>{2e-6}, 0.04, {}),
                  std::invalid_argument);
}
