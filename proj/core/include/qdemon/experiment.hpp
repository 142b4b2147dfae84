#pragma once

// Ensemble orchestration on top of thermo: efficiency degradation, parameter
// sweeps, standard errors, work histograms and tomographic validation.

#include "qdemon/demon.hpp"
#include "qdemon/parallel.hpp"
#include "qdemon/qcore.hpp"
#include "qdemon/rng.hpp"
#include "qdemon/sim_params.hpp"
#include "qdemon/thermo.hpp"
#include "qdemon/trajectory.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qdemon {

/// Variance of the Gaussian noise that turns a record filtered at eta into
/// one filtered at eta_prime: (1/eta' - 1/eta) / (4 k dt).
double degradation_variance(double k, double dt, double eta, double eta_prime);

/// r'_j = r_j + xi_j with xi ~ N(0, degradation_variance). Requires
/// 0 < eta_prime < eta <= 1. The result is tagged `degraded` with eta_used = eta_prime.
MeasurementRecord degrade_record(const MeasurementRecord& record, double k, double eta, double eta_prime,
                                 StreamRng& rng);

/// sqrt((<A^2> - <A>^2) / N), population variance. Throws for N < 2.
double standard_error(std::span<const double> samples);

/// sqrt(se_a^2 + se_b^2)
double difference_se(double se_a, double se_b);

struct SweepGrid {
  std::vector<double> betas{0.5, 1.3, 2.5};
  std::vector<double> etas{0.12, 0.24, 0.48};  // effective efficiencies, each in (0, params.eta]
  std::vector<double> times{0.2e-6, 0.5e-6, 0.9e-6};
  std::size_t shots = 6400;
  std::vector<PolicyKind> policies{PolicyKind::rho_demon, PolicyKind::chi_demon};
  int angle_bins = 20;
  bool quantize = true;

  void validate(const SimParams& params) const;
  std::size_t cells() const { return betas.size() * etas.size() * times.size(); }
};

struct SweepCell {
  double beta = 0.0;
  double eta = 0.0;
  double t = 0.0;
  std::size_t shots = 0;
  std::vector<EnsembleResult> results;  // one per grid policy, same order
  std::optional<Estimate> gamma_gain;   // gamma_chi - gamma_rho
  std::optional<Estimate> work_gain;    // -(<W>_rho - <W>_chi)
};

struct SweepResult {
  std::vector<SweepCell> cells;  // beta-major, then eta, then t
  std::size_t invariant_violations = 0;
};

/// Every cell runs each policy on the same shot streams (cell index offsets
/// control.stream), so policy comparisons within a cell are matched. Cells
/// with eta' < params.eta degrade the physical record before inference.
SweepResult sweep(const SweepGrid& grid, const SimParams& params, const RunControl& control);

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  std::vector<double> freq;  // counts / total samples
  std::size_t total = 0;
  std::size_t out_of_range = 0;
  double mean = 0.0;  // mean of all values, the marker drawn with the bars
};

/// Bins are [e_j, e_{j+1}) except the last, which is closed. Throws on empty
/// input or fewer than two strictly increasing edges.
Histogram work_histogram(std::span<const double> values, std::span<const double> edges);

/// {-1.5, -0.5, 0.5, 1.5}: one bin per TPM work value.
std::vector<double> tpm_work_edges();
/// `bins` uniform bins over [-1, 1].
std::vector<double> uniform_edges(std::size_t bins = 40, double lo = -1.0, double hi = 1.0);

enum class BlochAxis { x, z };
std::string_view to_string(BlochAxis axis);

struct ValidationPoint {
  double t = 0.0;
  BlochAxis axis = BlochAxis::z;
  double predicted = 0.0;
  std::size_t subensemble = 0;
  double tomographic = 0.0;
  double se = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::string reference_id;          // filled in by the caller
  std::uint64_t seed = 0;            // fresh-trajectory ensemble
  std::uint64_t stream = 0;
  double tolerance = 0.04;
  std::size_t trajectories = 0;
  std::vector<ValidationPoint> points;
  bool pass() const;
};

/// Selects, among N fresh trajectories from rho_i, those whose predicted x(t)
/// or z(t) lies within tol of the reference record's prediction and compares
/// a simulated projective tomography of their true states (x after a pi/2
/// rotation about y) to the reference. A point passes when
/// |tomographic - predicted| <= 3 SE + tol; an empty subensemble fails.
ValidationReport tomographic_validate(const MeasurementRecord& reference, const SimParams& params,
                                      const DensityMatrix& rho_i, std::size_t n, std::span<const double> times,
                                      double tol, const RunControl& control);

}  // namespace qdemon
