#pragma once

#include "qdemon/instrument.hpp"
#include "qdemon/qcore.hpp"
#include "qdemon/rng.hpp"
#include "qdemon/sim_params.hpp"

#include <string_view>
#include <utility>
#include <vector>

namespace qdemon {

enum class RecordOrigin { synthesized, degraded, external };

std::string_view to_string(RecordOrigin origin);
RecordOrigin parse_record_origin(std::string_view name);

/// Discretized measurement record {r_j}; sample j covers [j dt, (j+1) dt).
struct MeasurementRecord {
  std::vector<double> samples;
  double dt = 0.0;
  double eta_used = 0.0;
  RecordOrigin origin = RecordOrigin::synthesized;

  std::size_t size() const { return samples.size(); }
  double duration() const { return dt * static_cast<double>(samples.size()); }
  /// First n samples, keeping the metadata.
  MeasurementRecord prefix(std::size_t n) const;
};

/// Conditioned states at t = 0, dt, ..., n dt (n + 1 entries) and the
/// accumulated log trace of the unnormalized state.
struct TrajectoryPath {
  std::vector<DensityMatrix> states;
  double dt = 0.0;
  double log_weight = 0.0;

  std::size_t size() const { return states.size(); }
  double time(std::size_t i) const { return dt * static_cast<double>(i); }
  BlochVector bloch(std::size_t i) const { return bloch_from_density(states[i]); }
  const DensityMatrix& final_state() const { return states.back(); }
};

/// Streaming conditioned-state estimator: advances the linear equation for
/// the unnormalized state one record sample at a time and renormalizes,
/// keeping the log of the accumulated trace.
class StateFilter {
 public:
  StateFilter(const SimParams& params, const DensityMatrix& rho_i);

  /// Throws NumericalError when Tr(phi) <= 0 or the state becomes non-finite.
  void step(double r);

  const Mat2& state() const { return rho_; }
  DensityMatrix density() const { return hermitian_part(rho_); }
  double log_weight() const { return log_weight_; }
  std::size_t steps_taken() const { return steps_; }
  const StepModel& model() const { return model_; }

 private:
  StepModel model_;
  Mat2 rho_;
  double log_weight_ = 0.0;
  std::size_t steps_ = 0;
};

/// Record + final state of a synthesized run without storing the path.
struct SynthesisResult {
  MeasurementRecord record;
  DensityMatrix final_state;
  double log_weight = 0.0;
};

/// Draws a physical record starting from rho_i and returns it with the full
/// conditioned path (params.steps() samples).
std::pair<MeasurementRecord, TrajectoryPath> synthesize_record(const SimParams& params, const DensityMatrix& rho_i,
                                                               StreamRng& rng);

/// Same draws as synthesize_record, keeping only the final state.
SynthesisResult synthesize_record_final(const SimParams& params, const DensityMatrix& rho_i, StreamRng& rng);

/// Deterministic replay of a record from rho_i. Throws std::invalid_argument
/// if record.dt differs from params.dt.
TrajectoryPath filter_sme(const MeasurementRecord& record, const DensityMatrix& rho_i, const SimParams& params);

/// Final state only; same arithmetic as filter_sme.
StateFilter filter_sme_final(const MeasurementRecord& record, const DensityMatrix& rho_i, const SimParams& params);

/// Record-averaged (unconditioned) evolution exp(L t) rho_i from the dense
/// superoperator of L = -i[H_R, .] + k (sigma_z . sigma_z - .).
DensityMatrix lindblad_propagate(const DensityMatrix& rho_i, double t, const SimParams& params);

/// log Tr E_r(rho_i) up to a state-independent constant. Differences between
/// initial states are log-likelihood ratios of the record.
double path_weight(const MeasurementRecord& record, const DensityMatrix& rho_i, const SimParams& params);

void check_record_compatible(const MeasurementRecord& record, const SimParams& params);

}  // namespace qdemon
