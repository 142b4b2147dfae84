#pragma once

// Two-point-measurement (TPM) shots with measurement and feedback, and the
// work / efficacy estimators built on them.
//
// Sign convention: W = E_f - E_i, so extracted work is -W.

#include "qdemon/demon.hpp"
#include "qdemon/parallel.hpp"
#include "qdemon/process.hpp"
#include "qdemon/qcore.hpp"
#include "qdemon/rng.hpp"
#include "qdemon/sim_params.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace qdemon {

struct ShotRecord {
  std::uint64_t shot = 0;
  PolicyKind policy = PolicyKind::none;
  double beta = 0.0;
  double eta = 0.0;  // efficiency seen by the demon
  double t = 0.0;
  Level i = Level::ground;
  Level f = Level::ground;
  double e_i = 0.0;
  double e_f = 0.0;
  double work = 0.0;              // E_f - E_i
  double conditional_work = 0.0;  // W_r = Tr(rho_f H) - Tr(rho_th H)
  double info = 0.0;              // ln <f|rho_f|f> - ln P_i; -inf when <f|rho_f|f> = 0
  double theta = 0.0;             // applied feedback angle
  double overlap = std::numeric_limits<double>::quiet_NaN();  // Tr(rho_th U rho~ U^dag) when chi was inferred
  bool invariants_ok = true;
};

/// Running count, sum and sum of squares. Merging is associative and
/// commutative up to float rounding; reductions run in shot order.
struct Accumulator {
  std::size_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const Accumulator& o) {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN(); }
  /// sqrt((<A^2> - <A>^2) / N)
  double standard_error() const;
};

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

/// |a - b| <= sigmas * sqrt(se_a^2 + se_b^2)
bool agree_within(const Estimate& a, const Estimate& b, double sigmas);

struct EnsembleResult {
  PolicyKind policy = PolicyKind::none;
  double beta = 0.0;
  std::size_t shots = 0;
  Accumulator jarzynski;    // e^{-beta W}
  Accumulator generalized;  // e^{-beta W - I}
  Accumulator work;
  Accumulator work_sq;
  Accumulator conditional_work;
  Accumulator cross;  // E_i E_f
  Accumulator e_i_sq;
  Accumulator e_f_sq;
  std::size_t info_excluded = 0;
  std::size_t invariant_violations = 0;
  double max_overlap = -std::numeric_limits<double>::infinity();

  void add(const ShotRecord& shot);
  void merge(const EnsembleResult& other);

  Estimate gamma() const { return {jarzynski.mean(), jarzynski.standard_error()}; }
  Estimate generalized_jarzynski() const { return {generalized.mean(), generalized.standard_error()}; }
  Estimate mean_work() const { return {work.mean(), work.standard_error()}; }
  Estimate mean_conditional_work() const { return {conditional_work.mean(), conditional_work.standard_error()}; }
  Estimate cross_moment() const { return {cross.mean(), cross.standard_error()}; }
};

/// e^{-beta w}, defined as 1 for w = 0 even when beta = inf.
double boltzmann_factor(double beta, double w);

/// Draws the initial energy eigenstate from the canonical ensemble.
std::pair<Level, double> sample_initial(double beta, StreamRng& rng);

struct ShotOptions {
  /// Demon sees the record degraded to this efficiency (must be < params.eta).
  std::optional<double> effective_eta;
  /// Integrate chi even when the policy does not need it (fills overlap).
  bool infer_process = false;
};

/// One TPM realization: sample i, synthesize the physical record from |i><i|,
/// run the demon's inference (rho filtered from rho_th, chi -> rho-tilde),
/// rotate the true conditioned state by the chosen feedback, then sample f.
ShotRecord tpm_shot(const SimParams& params, double beta, const FeedbackPolicy& policy, StreamRng& rng,
                    const ShotOptions& options = {});

/// ln <f|rho_f|f> - ln <i|rho_i_model|i>; -inf when <f|rho_f|f> <= 0.
double information_exchange(const DensityMatrix& rho_i_model, Level i, const DensityMatrix& rho_f_conditioned,
                            Level f);

/// W_r with -W_r = Tr(rho_i H) - Tr(rho_f H).
double conditional_work(const DensityMatrix& rho_i_model, const DensityMatrix& rho_f_conditioned);

struct TpmEnsemble {
  std::vector<ShotRecord> shots;
  EnsembleResult summary;
};

/// n shots of tpm_shot; shot i uses StreamRng(control.seed, control.stream, i).
TpmEnsemble run_tpm_ensemble(const SimParams& params, double beta, const FeedbackPolicy& policy, std::size_t n,
                             const RunControl& control, const ShotOptions& options = {});

EnsembleResult summarize(std::span<const ShotRecord> shots, double beta);

/// Sample mean of e^{-beta W} with its standard error.
Estimate efficacy_tpm(std::span<const ShotRecord> shots, double beta);

struct OverlapEstimate {
  Estimate gamma;
  double max_overlap = 0.0;  // largest per-shot Tr(rho_th rho~_f)
  std::size_t n = 0;
};

/// gamma = 2 E[Tr(rho_th U rho~ U^dag) | I]: records are synthesized from I/2
/// and the policy's feedback is applied to rho-tilde.
OverlapEstimate efficacy_overlap(const SimParams& params, double beta, const FeedbackPolicy& policy, std::size_t n,
                                 const RunControl& control);

/// TPM sample mean of E_i E_f.
Estimate cross_moment(std::span<const ShotRecord> shots);

/// Monte Carlo of Tr[H U E_r(rho_th H) U^dag] / Tr E_r(rho_th) over records
/// synthesized from rho_th, with E_r applied through chi.
Estimate cross_moment_process(const SimParams& params, double beta, std::size_t n, const RunControl& control,
                              const FeedbackPolicy& policy = {});

struct WorkMoments {
  double mean_work = 0.0;
  double mean_work_sq = 0.0;       // direct <W^2>
  double mean_work_sq_from_energies = 0.0;  // <E_i^2> + <E_f^2> - 2 <E_i E_f>
};

WorkMoments work_moments(std::span<const ShotRecord> shots);

}  // namespace qdemon
