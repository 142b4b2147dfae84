#include "qdemon/thermo.hpp"

#include "qdemon/experiment.hpp"
#include "qdemon/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace qdemon {

double Accumulator::standard_error() const {
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  const double nn = static_cast<double>(n);
  const double m = sum / nn;
  const double var = std::max(0.0, sum_sq / nn - m * m);
  return std::sqrt(var / nn);
}

bool agree_within(const Estimate& a, const Estimate& b, double sigmas) {
  return std::abs(a.value - b.value) <= sigmas * std::hypot(a.se, b.se);
}

double boltzmann_factor(double beta, double w) { return w == 0.0 ? 1.0 : std::exp(-beta * w); }

void EnsembleResult::add(const ShotRecord& s) {
  ++shots;
  jarzynski.add(boltzmann_factor(beta, s.work));
  if (std::isfinite(s.info)) {
    generalized.add(boltzmann_factor(beta, s.work) * std::exp(-s.info));
  } else {
    ++info_excluded;
  }
  work.add(s.work);
  work_sq.add(s.work * s.work);
  conditional_work.add(s.conditional_work);
  cross.add(s.e_i * s.e_f);
  e_i_sq.add(s.e_i * s.e_i);
  e_f_sq.add(s.e_f * s.e_f);
  if (!s.invariants_ok) ++invariant_violations;
  if (std::isfinite(s.overlap)) max_overlap = std::max(max_overlap, s.overlap);
}

void EnsembleResult::merge(const EnsembleResult& o) {
  shots += o.shots;
  jarzynski.merge(o.jarzynski);
  generalized.merge(o.generalized);
  work.merge(o.work);
  work_sq.merge(o.work_sq);
  conditional_work.merge(o.conditional_work);
  cross.merge(o.cross);
  e_i_sq.merge(o.e_i_sq);
  e_f_sq.merge(o.e_f_sq);
  info_excluded += o.info_excluded;
  invariant_violations += o.invariant_violations;
  max_overlap = std::max(max_overlap, o.max_overlap);
}

std::pair<Level, double> sample_initial(double beta, StreamRng& rng) {
  const ThermalPopulations p = thermal_populations(beta);
  const Level i = rng.uniform() < p.ground ? Level::ground : Level::excited;
  return {i, energy(i)};
}

double information_exchange(const DensityMatrix& rho_i_model, Level i, const DensityMatrix& rho_f_conditioned,
                            Level f) {
  const double p_f = rho_f_conditioned.population(f);
  if (!(p_f > 0.0)) return -std::numeric_limits<double>::infinity();
  return std::log(p_f) - std::log(rho_i_model.population(i));
}

double conditional_work(const DensityMatrix& rho_i_model, const DensityMatrix& rho_f_conditioned) {
  return rho_f_conditioned.expectation(hamiltonian()) - rho_i_model.expectation(hamiltonian());
}

ShotRecord tpm_shot(const SimParams& params, double beta, const FeedbackPolicy& policy, StreamRng& rng,
                    const ShotOptions& options) {
  params.validate();
  policy.validate();
  ShotRecord shot;
  shot.policy = policy.kind;
  shot.beta = beta;
  shot.t = params.duration;

  const auto [i, e_i] = sample_initial(beta, rng);
  shot.i = i;
  shot.e_i = e_i;

  // Physics: the true conditioned state given the full record.
  const SynthesisResult truth = synthesize_record_final(params, DensityMatrix::pure(i), rng);

  // The demon's view of the record.
  SimParams view_params = params;
  const MeasurementRecord* view = &truth.record;
  MeasurementRecord degraded;
  if (options.effective_eta) {
    degraded = degrade_record(truth.record, params.k, params.eta, *options.effective_eta, rng);
    view_params.eta = *options.effective_eta;
    view = &degraded;
  }
  shot.eta = view_params.eta;

  const DensityMatrix rho_th = thermal_state(beta);
  const DensityMatrix filtered = filter_sme_final(*view, rho_th, view_params).density();
  DemonInputs inputs;
  inputs.filtered_state = filtered;
  std::optional<ProcessMatrix> chi;
  if (policy.kind == PolicyKind::chi_demon || options.infer_process) {
    chi = evolve_chi_final(*view, view_params);
    inputs.effective_state = effective_state(*chi);
  }
  const FeedbackDecision decision = decide(policy, inputs);
  shot.theta = decision.applied_angle;

  const DensityMatrix true_final = apply_feedback(truth.final_state, shot.theta);
  shot.f = rng.uniform() < true_final.population(Level::ground) ? Level::ground : Level::excited;
  shot.e_f = energy(shot.f);
  shot.work = shot.e_f - shot.e_i;

  const DensityMatrix demon_final = apply_feedback(filtered, shot.theta);
  shot.conditional_work = conditional_work(rho_th, demon_final);
  shot.info = information_exchange(rho_th, shot.i, demon_final, shot.f);
  if (inputs.effective_state) {
    shot.overlap = apply_feedback(*inputs.effective_state, shot.theta).expectation(rho_th.matrix());
  }

  shot.invariants_ok = truth.final_state.is_normalized_state() && filtered.is_normalized_state() &&
                       (!chi || chi->satisfies_invariants());
  return shot;
}

TpmEnsemble run_tpm_ensemble(const SimParams& params, double beta, const FeedbackPolicy& policy, std::size_t n,
                             const RunControl& control, const ShotOptions& options) {
  TpmEnsemble out;
  out.shots.resize(n);
  parallel_for(n, control.threads, [&](std::size_t s) {
    StreamRng rng(control.seed, control.stream, s);
    out.shots[s] = tpm_shot(params, beta, policy, rng, options);
    out.shots[s].shot = s;
  });
  out.summary = summarize(out.shots, beta);
  out.summary.policy = policy.kind;
  return out;
}

EnsembleResult summarize(std::span<const ShotRecord> shots, double beta) {
  EnsembleResult r;
  r.beta = beta;
  if (!shots.empty()) r.policy = shots.front().policy;
  for (const ShotRecord& s : shots) r.add(s);
  return r;
}

Estimate efficacy_tpm(std::span<const ShotRecord> shots, double beta) {
  if (shots.empty()) throw std::invalid_argument("efficacy_tpm needs at least one shot");
  return summarize(shots, beta).gamma();
}

OverlapEstimate efficacy_overlap(const SimParams& params, double beta, const FeedbackPolicy& policy, std::size_t n,
                                 const RunControl& control) {
  if (n < 2) throw std::invalid_argument("efficacy_overlap needs N > 1");
  params.validate();
  policy.validate();
  const DensityMatrix rho_th = thermal_state(beta);
  std::vector<double> overlaps(n);
  parallel_for(n, control.threads, [&](std::size_t s) {
    StreamRng rng(control.seed, control.stream, s);
    const SynthesisResult synth = synthesize_record_final(params, DensityMatrix::maximally_mixed(), rng);
    DemonInputs inputs;
    inputs.effective_state = effective_state(evolve_chi_final(synth.record, params));
    if (policy.kind == PolicyKind::rho_demon)
      inputs.filtered_state = filter_sme_final(synth.record, rho_th, params).density();
    const double theta = decide(policy, inputs).applied_angle;
    overlaps[s] = apply_feedback(*inputs.effective_state, theta).expectation(rho_th.matrix());
  });
  Accumulator acc;
  OverlapEstimate out;
  out.max_overlap = -std::numeric_limits<double>::infinity();
  for (double o : overlaps) {
    acc.add(2.0 * o);
    out.max_overlap = std::max(out.max_overlap, o);
  }
  out.gamma = {acc.mean(), acc.standard_error()};
  out.n = n;
  return out;
}

Estimate cross_moment(std::span<const ShotRecord> shots) {
  Accumulator acc;
  for (const ShotRecord& s : shots) acc.add(s.e_i * s.e_f);
  return {acc.mean(), acc.standard_error()};
}

Estimate cross_moment_process(const SimParams& params, double beta, std::size_t n, const RunControl& control,
                              const FeedbackPolicy& policy) {
  if (n < 2) throw std::invalid_argument("cross_moment_process needs N > 1");
  params.validate();
  policy.validate();
  const DensityMatrix rho_th = thermal_state(beta);
  const Mat2 rho_th_h = rho_th.matrix() * hamiltonian();
  std::vector<double> values(n);
  parallel_for(n, control.threads, [&](std::size_t s) {
    StreamRng rng(control.seed, control.stream, s);
    const SynthesisResult synth = synthesize_record_final(params, rho_th, rng);
    const ProcessMatrix chi = evolve_chi_final(synth.record, params);
    DemonInputs inputs;
    if (policy.kind == PolicyKind::rho_demon) inputs.filtered_state = filter_sme_final(synth.record, rho_th, params).density();
    if (policy.kind == PolicyKind::chi_demon) inputs.effective_state = effective_state(chi);
    const Mat2 u = feedback_unitary(decide(policy, inputs).applied_angle);
    const Mat2 evolved = u * apply_linear(chi, rho_th_h) * u.adjoint();
    const double numerator = (hamiltonian() * evolved).trace().real();
    const double denominator = apply_linear(chi, rho_th.matrix()).trace().real();
    values[s] = numerator / denominator;
  });
  Accumulator acc;
  for (double v : values) acc.add(v);
  return {acc.mean(), acc.standard_error()};
}

WorkMoments work_moments(std::span<const ShotRecord> shots) {
  if (shots.empty()) throw std::invalid_argument("work_moments needs at least one shot");
  Accumulator w, w2, ei2, ef2, cross;
  for (const ShotRecord& s : shots) {
    w.add(s.work);
    w2.add(s.work * s.work);
    ei2.add(s.e_i * s.e_i);
    ef2.add(s.e_f * s.e_f);
    cross.add(s.e_i * s.e_f);
  }
  return {w.mean(), w2.mean(), ei2.mean() + ef2.mean() - 2.0 * cross.mean()};
}

}  // namespace qdemon
