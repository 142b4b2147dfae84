#include "qdemon/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qdemon {

double degradation_variance(double k, double dt, double eta, double eta_prime) {
  if (!(eta_prime > 0.0 && eta_prime < eta && eta <= 1.0))
    throw std::invalid_argument("degradation requires 0 < eta' < eta <= 1");
  if (!(k > 0.0 && dt > 0.0)) throw std::invalid_argument("degradation requires k > 0 and dt > 0");
  return (1.0 / eta_prime - 1.0 / eta) / (4.0 * k * dt);
}

MeasurementRecord degrade_record(const MeasurementRecord& record, double k, double eta, double eta_prime,
                                 StreamRng& rng) {
  const double sigma = std::sqrt(degradation_variance(k, record.dt, eta, eta_prime));
  MeasurementRecord out = record;
  for (double& r : out.samples) r += sigma * rng.normal();
  out.eta_used = eta_prime;
  out.origin = RecordOrigin::degraded;
  return out;
}

double standard_error(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("standard_error needs at least two samples");
  Accumulator acc;
  for (double x : samples) acc.add(x);
  return acc.standard_error();
}

double difference_se(double se_a, double se_b) { return std::hypot(se_a, se_b); }

void SweepGrid::validate(const SimParams& params) const {
  if (betas.empty() || etas.empty() || times.empty() || policies.empty())
    throw std::invalid_argument("sweep grid axes must be non-empty");
  if (shots < 2) throw std::invalid_argument("sweep needs at least two shots per cell");
  for (double b : betas)
    if (!(b >= 0.0)) throw std::invalid_argument("sweep betas must be >= 0");
  for (double e : etas)
    if (!(e > 0.0 && e <= params.eta)) throw std::invalid_argument("sweep efficiencies must lie in (0, eta]");
  for (double t : times)
    if (!(t >= 0.0)) throw std::invalid_argument("sweep times must be >= 0");
  FeedbackPolicy{PolicyKind::none, angle_bins, quantize}.validate();
}

SweepResult sweep(const SweepGrid& grid, const SimParams& params, const RunControl& control) {
  params.validate();
  grid.validate(params);
  SweepResult out;
  std::uint64_t cell_index = 0;
  for (double beta : grid.betas) {
    for (double eta : grid.etas) {
      for (double t : grid.times) {
        const SimParams cell_params = params.with_duration(t);
        ShotOptions options;
        if (eta < params.eta) options.effective_eta = eta;
        RunControl cell_control = control;
        cell_control.stream = control.stream + cell_index++;

        SweepCell cell;
        cell.beta = beta;
        cell.eta = eta;
        cell.t = t;
        cell.shots = grid.shots;
        std::optional<Estimate> gamma_rho, gamma_chi, work_rho, work_chi;
        for (PolicyKind kind : grid.policies) {
          const FeedbackPolicy policy{kind, grid.angle_bins, grid.quantize};
          TpmEnsemble run = run_tpm_ensemble(cell_params, beta, policy, grid.shots, cell_control, options);
          out.invariant_violations += run.summary.invariant_violations;
          if (kind == PolicyKind::rho_demon) {
            gamma_rho = run.summary.gamma();
            work_rho = run.summary.mean_work();
          } else if (kind == PolicyKind::chi_demon) {
            gamma_chi = run.summary.gamma();
            work_chi = run.summary.mean_work();
          }
          cell.results.push_back(std::move(run.summary));
        }
        if (gamma_rho && gamma_chi) {
          cell.gamma_gain = Estimate{gamma_chi->value - gamma_rho->value, difference_se(gamma_chi->se, gamma_rho->se)};
          cell.work_gain = Estimate{-(work_rho->value - work_chi->value), difference_se(work_rho->se, work_chi->se)};
        }
        out.cells.push_back(std::move(cell));
      }
    }
  }
  return out;
}

Histogram work_histogram(std::span<const double> values, std::span<const double> edges) {
  if (values.empty()) throw std::invalid_argument("histogram of an empty sample");
  if (edges.size() < 2) throw std::invalid_argument("histogram needs at least two edges");
  for (std::size_t j = 1; j < edges.size(); ++j)
    if (!(edges[j] > edges[j - 1])) throw std::invalid_argument("histogram edges must be strictly increasing");

  Histogram h;
  h.edges.assign(edges.begin(), edges.end());
  h.counts.assign(edges.size() - 1, 0);
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    if (v < edges.front() || v > edges.back() || !std::isfinite(v)) {
      ++h.out_of_range;
      continue;
    }
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    std::size_t bin = static_cast<std::size_t>(it - edges.begin());
    bin = bin == 0 ? 0 : bin - 1;
    if (bin >= h.counts.size()) bin = h.counts.size() - 1;
    ++h.counts[bin];
  }
  h.total = values.size();
  h.mean = sum / static_cast<double>(values.size());
  h.freq.reserve(h.counts.size());
  for (std::size_t c : h.counts) h.freq.push_back(static_cast<double>(c) / static_cast<double>(h.total));
  return h;
}

std::vector<double> tpm_work_edges() { return {-1.5, -0.5, 0.5, 1.5}; }

std::vector<double> uniform_edges(std::size_t bins, double lo, double hi) {
  if (bins < 1 || !(hi > lo)) throw std::invalid_argument("uniform_edges needs bins >= 1 and hi > lo");
  std::vector<double> e(bins + 1);
  for (std::size_t j = 0; j <= bins; ++j) e[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(bins);
  e.back() = hi;
  return e;
}

std::string_view to_string(BlochAxis axis) { return axis == BlochAxis::x ? "x" : "z"; }

bool ValidationReport::pass() const {
  return !points.empty() && std::all_of(points.begin(), points.end(), [](const ValidationPoint& p) { return p.pass; });
}

ValidationReport tomographic_validate(const MeasurementRecord& reference, const SimParams& params,
                                      const DensityMatrix& rho_i, std::size_t n, std::span<const double> times,
                                      double tol, const RunControl& control) {
  params.validate();
  check_record_compatible(reference, params);
  if (times.empty()) throw std::invalid_argument("validation needs at least one time point");
  if (n < 2) throw std::invalid_argument("validation needs at least two trajectories");
  if (!(tol >= 0.0)) throw std::invalid_argument("selection tolerance must be >= 0");

  std::vector<std::size_t> steps;
  for (double t : times) {
    if (!(t >= 0.0)) throw std::invalid_argument("validation times must be >= 0");
    const auto s = static_cast<std::size_t>(std::llround(t / params.dt));
    if (s > reference.size()) throw std::invalid_argument("validation time exceeds the reference record");
    steps.push_back(s);
  }
  const std::size_t last = *std::max_element(steps.begin(), steps.end());

  const TrajectoryPath ref_path = filter_sme(reference.prefix(last), rho_i, params);

  // Bloch vectors of each fresh trajectory at the checked steps.
  const std::size_t m = steps.size();
  std::vector<BlochVector> bloch(n * m);
  std::vector<double> draws(n * m * 2);
  const SimParams run_params = params.with_duration(static_cast<double>(last) * params.dt);
  parallel_for(n, control.threads, [&](std::size_t s) {
    StreamRng rng(control.seed, control.stream, s);
    StateFilter filter(run_params, rho_i);
    auto record_at = [&](std::size_t step) {
      for (std::size_t c = 0; c < m; ++c)
        if (steps[c] == step) bloch[s * m + c] = bloch_from_density(filter.density());
    };
    record_at(0);
    for (std::size_t j = 0; j < last; ++j) {
      filter.step(filter.model().sample_record(filter.state(), rng));
      record_at(j + 1);
    }
    for (std::size_t c = 0; c < 2 * m; ++c) draws[s * 2 * m + c] = rng.uniform();
  });

  ValidationReport report;
  report.seed = control.seed;
  report.stream = control.stream;
  report.tolerance = tol;
  report.trajectories = n;
  for (std::size_t c = 0; c < m; ++c) {
    const BlochVector predicted = ref_path.bloch(steps[c]);
    for (BlochAxis axis : {BlochAxis::z, BlochAxis::x}) {
      const double target = axis == BlochAxis::z ? predicted.z : predicted.x;
      Accumulator acc;
      for (std::size_t s = 0; s < n; ++s) {
        const BlochVector& b = bloch[s * m + c];
        const double own = axis == BlochAxis::z ? b.z : b.x;
        if (std::abs(own - target) > tol) continue;
        DensityMatrix state = density_from_bloch(b);
        if (axis == BlochAxis::x) state = apply_feedback(state, 0.5 * std::numbers::pi);
        const double u = draws[s * 2 * m + 2 * c + (axis == BlochAxis::z ? 0 : 1)];
        acc.add(u < state.population(Level::ground) ? 1.0 : -1.0);
      }
      ValidationPoint p;
      p.t = static_cast<double>(steps[c]) * params.dt;
      p.axis = axis;
      p.predicted = target;
      p.subensemble = acc.n;
      if (acc.n > 0) {
        p.tomographic = acc.mean();
        p.se = acc.standard_error();
        p.pass = std::abs(p.tomographic - p.predicted) <= 3.0 * p.se + tol;
      } else {
        p.tomographic = std::numeric_limits<double>::quiet_NaN();
        p.se = std::numeric_limits<double>::quiet_NaN();
      }
      report.points.push_back(p);
    }
  }
  return report;
}

}  // namespace qdemon
