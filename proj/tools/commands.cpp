#include "commands.hpp"

#include "qdemon/experiment.hpp"
#include "qdemon/io.hpp"
#include "qdemon/process.hpp"
#include "qdemon/thermo.hpp"
#include "qdemon/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

namespace qdemon::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Stream ids keep the random draws of different commands disjoint.
constexpr std::uint64_t kSimulateStream = 0;
constexpr std::uint64_t kDemonsStream = 100;
constexpr std::uint64_t kSweepStream = 1000;
constexpr std::uint64_t kHistStream = 2000;
constexpr std::uint64_t kValidateReferenceStream = 3000;
constexpr std::uint64_t kValidateEnsembleStream = 3001;

class Emitter {
 public:
  Emitter(const RunConfig& config, std::string command) : dir_(config.run.out), command_(std::move(command)) {
    provenance_ = config_to_json(config);
    // Neither affects any result; leaving them out keeps reruns into a
    // different directory or with a different worker count byte-identical.
    provenance_["run"].erase("out");
    provenance_["run"].erase("threads");
    seed_ = config.run.seed;
  }

  void emit(const std::string& name, const std::string& contents) const {
    io::write_file(dir_ / name, contents);
    json meta = {{"command", command_}, {"file", name}, {"seed", seed_}, {"config", provenance_}};
    io::write_file(dir_ / (name + ".meta.json"), meta.dump(2) + "\n");
  }

 private:
  fs::path dir_;
  std::string command_;
  json provenance_;
  std::uint64_t seed_ = 0;
};

template <class Fn>
std::string render(Fn&& fn) {
  std::ostringstream out;
  fn(out);
  return out.str();
}

RunControl control_for(const RunConfig& c, std::uint64_t stream) { return {c.run.seed, stream, c.run.threads}; }

FeedbackPolicy policy_for(const RunConfig& c, PolicyKind kind) {
  return {kind, c.feedback.angle_bins, c.feedback.quantize};
}

void warn_if_noisy(std::ostream& log, const std::string& what, const Estimate& e) {
  if (e.value != 0.0 && std::abs(e.se / e.value) > 0.1)
    log << "warning: " << what << " has SE/mean = " << io::format_double(std::abs(e.se / e.value))
        << " > 0.1; increase run.shots\n";
}

json estimate_json(const Estimate& e) { return {{"value", e.value}, {"se", e.se}}; }

json ensemble_json(const EnsembleResult& r) {
  return {{"policy", std::string(to_string(r.policy))},
          {"N", r.shots},
          {"gamma", estimate_json(r.gamma())},
          {"generalized_jarzynski", estimate_json(r.generalized_jarzynski())},
          {"mean_work", estimate_json(r.mean_work())},
          {"mean_work_sq", estimate_json({r.work_sq.mean(), r.work_sq.standard_error()})},
          {"mean_conditional_work", estimate_json(r.mean_conditional_work())},
          {"cross_moment", estimate_json(r.cross_moment())},
          {"info_excluded", r.info_excluded},
          {"invariant_violations", r.invariant_violations}};
}

}  // namespace

int cmd_simulate(const RunConfig& config, std::ostream& log) {
  config.check();
  const Emitter out(config, "simulate");
  const SimParams& p = config.physics;
  const DensityMatrix rho_i = parse_initial_state(config.simulate.initial);

  StreamRng rng(config.run.seed, kSimulateStream, 0);
  const auto [record, path] = synthesize_record(p, rho_i, rng);
  const std::size_t stride = config.simulate.stride;
  const ProcessPath chi_path = evolve_chi(record, p, stride);

  bool ok = true;
  for (const DensityMatrix& s : path.states) ok = ok && s.is_normalized_state();
  for (const ProcessMatrix& c : chi_path.chis) ok = ok && c.satisfies_invariants();

  std::vector<double> snapshot_times = config.simulate.snapshot_at;
  if (snapshot_times.empty()) snapshot_times.push_back(record.duration());
  std::vector<io::ChiSnapshot> snapshots;
  for (double t : snapshot_times) {
    const auto steps = static_cast<std::size_t>(std::llround(t / p.dt));
    const MeasurementRecord prefix = record.prefix(steps);
    snapshots.push_back({prefix.duration(), evolve_chi_final(prefix, p)});
  }

  out.emit("record.csv", render([&](std::ostream& o) { io::write_record_csv(o, record); }));
  out.emit("record.json", io::record_sidecar_json(record, p));
  out.emit("trajectory.csv", render([&](std::ostream& o) { io::write_trajectory_csv(o, path); }));
  out.emit("chi_snapshots.json", io::chi_snapshots_json(snapshots));
  out.emit("effective.csv", render([&](std::ostream& o) { io::write_effective_csv(o, chi_path); }));
  out.emit("deviation.csv",
           render([&](std::ostream& o) { io::write_deviation_csv(o, path, chi_path, rho_i, stride); }));

  log << "simulate: " << record.size() << " steps written to " << config.run.out << "\n";
  if (!ok) {
    log << "error: state or process invariants violated\n";
    return kInvariantViolation;
  }
  return kOk;
}

int cmd_demons(const RunConfig& config, std::ostream& log) {
  config.check();
  const Emitter out(config, "demons");
  const double beta = config.demons.beta;
  const std::vector<PolicyKind> kinds{PolicyKind::none, PolicyKind::rho_demon, PolicyKind::chi_demon};

  std::ostringstream efficacy, work, shots_csv;
  efficacy << "t,gamma_none,se_gamma_none,gamma_rho,se_gamma_rho,gamma_chi,se_gamma_chi,gj_rho,se_gj_rho,"
              "gj_chi,se_gj_chi,gamma_chi_minus_rho,se_gamma_chi_minus_rho,N\n";
  work << "t,work_none,se_work_none,work_rho,se_work_rho,work_chi,se_work_chi,"
          "adv_rho_vs_none,se_adv_rho_vs_none,adv_chi_vs_none,se_adv_chi_vs_none,adv_rho_vs_chi,se_adv_rho_vs_chi,N\n";
  std::vector<ShotRecord> all_shots;
  std::size_t violations = 0;
  const auto f = io::format_double;

  for (std::size_t ti = 0; ti < config.demons.times.size(); ++ti) {
    const double t = config.demons.times[ti];
    const SimParams params = config.physics.with_duration(t);
    std::vector<EnsembleResult> results;
    for (PolicyKind kind : kinds) {
      TpmEnsemble run = run_tpm_ensemble(params, beta, policy_for(config, kind), config.run.shots,
                                         control_for(config, kDemonsStream + ti));
      violations += run.summary.invariant_violations;
      warn_if_noisy(log, "gamma(" + std::string(to_string(kind)) + ", t=" + f(t) + ")", run.summary.gamma());
      if (config.run.shot_log) all_shots.insert(all_shots.end(), run.shots.begin(), run.shots.end());
      results.push_back(std::move(run.summary));
    }
    const Estimate g0 = results[0].gamma(), g1 = results[1].gamma(), g2 = results[2].gamma();
    const Estimate gj1 = results[1].generalized_jarzynski(), gj2 = results[2].generalized_jarzynski();
    const Estimate w0 = results[0].mean_work(), w1 = results[1].mean_work(), w2 = results[2].mean_work();
    efficacy << f(t) << ',' << f(g0.value) << ',' << f(g0.se) << ',' << f(g1.value) << ',' << f(g1.se) << ','
             << f(g2.value) << ',' << f(g2.se) << ',' << f(gj1.value) << ',' << f(gj1.se) << ',' << f(gj2.value)
             << ',' << f(gj2.se) << ',' << f(g2.value - g1.value) << ',' << f(difference_se(g2.se, g1.se)) << ','
             << config.run.shots << '\n';
    // Advantage of policy a over b in extracted work: -(<W>_a - <W>_b).
    auto adv = [&](const Estimate& a, const Estimate& b) {
      return f(-(a.value - b.value)) + ',' + f(difference_se(a.se, b.se));
    };
    work << f(t) << ',' << f(w0.value) << ',' << f(w0.se) << ',' << f(w1.value) << ',' << f(w1.se) << ','
         << f(w2.value) << ',' << f(w2.se) << ',' << adv(w1, w0) << ',' << adv(w2, w0) << ',' << adv(w1, w2) << ','
         << config.run.shots << '\n';
  }

  out.emit("efficacy.csv", efficacy.str());
  out.emit("work.csv", work.str());
  if (config.run.shot_log) out.emit("shots.csv", render([&](std::ostream& o) { io::write_shot_log(o, all_shots); }));
  log << "demons: " << config.demons.times.size() << " time points written to " << config.run.out << "\n";
  if (violations) {
    log << "error: " << violations << " shots violated state or process invariants\n";
    return kInvariantViolation;
  }
  return kOk;
}

int cmd_sweep(const RunConfig& config, std::ostream& log) {
  config.check();
  const Emitter out(config, "sweep");
  const SweepGrid grid{config.sweep.betas, config.sweep.etas,  config.sweep.times,    config.run.shots,
                       config.sweep.policies, config.feedback.angle_bins, config.feedback.quantize};
  const SweepResult result = sweep(grid, config.physics, control_for(config, kSweepStream));

  json cells = json::array();
  for (const SweepCell& c : result.cells) {
    json cell = {{"beta", c.beta}, {"eta_eff", c.eta}, {"t", c.t}, {"N", c.shots}, {"policies", json::array()}};
    for (const EnsembleResult& r : c.results) {
      cell["policies"].push_back(ensemble_json(r));
      warn_if_noisy(log, "gamma(" + std::string(to_string(r.policy)) + ", beta=" + io::format_double(c.beta) +
                             ", eta=" + io::format_double(c.eta) + ", t=" + io::format_double(c.t) + ")",
                    r.gamma());
    }
    if (c.gamma_gain) cell["gamma_gain"] = estimate_json(*c.gamma_gain);
    if (c.work_gain) cell["work_gain"] = estimate_json(*c.work_gain);
    cells.push_back(cell);
  }
  out.emit("gamma_gain.csv",
           render([&](std::ostream& o) { io::write_sweep_csv(o, result, io::SweepQuantity::gamma_gain); }));
  out.emit("work_gain.csv",
           render([&](std::ostream& o) { io::write_sweep_csv(o, result, io::SweepQuantity::work_gain); }));
  out.emit("cells.json", cells.dump(2) + "\n");
  log << "sweep: " << result.cells.size() << " cells written to " << config.run.out << "\n";
  if (result.invariant_violations) {
    log << "error: " << result.invariant_violations << " shots violated state or process invariants\n";
    return kInvariantViolation;
  }
  return kOk;
}

int cmd_hist(const RunConfig& config, std::ostream& log) {
  config.check();
  const Emitter out(config, "hist");
  const double beta = config.hist.beta;
  const std::vector<double> tpm_edges = tpm_work_edges();
  const std::vector<double> wr_edges = uniform_edges(config.hist.bins);
  json summary = json::array();
  std::vector<ShotRecord> all_shots;
  std::size_t violations = 0;

  for (PolicyKind kind : config.hist.policies) {
    const TpmEnsemble run = run_tpm_ensemble(config.physics, beta, policy_for(config, kind), config.run.shots,
                                             control_for(config, kHistStream));
    violations += run.summary.invariant_violations;
    std::vector<double> w, wr;
    w.reserve(run.shots.size());
    wr.reserve(run.shots.size());
    for (const ShotRecord& s : run.shots) {
      w.push_back(s.work);
      wr.push_back(s.conditional_work);
    }
    const Histogram h_tpm = work_histogram(w, tpm_edges);
    const Histogram h_wr = work_histogram(wr, wr_edges);
    const std::string name(to_string(kind));
    out.emit("hist_tpm_" + name + ".csv", render([&](std::ostream& o) { io::write_histogram_csv(o, h_tpm); }));
    out.emit("hist_wr_" + name + ".csv", render([&](std::ostream& o) { io::write_histogram_csv(o, h_wr); }));
    summary.push_back({{"policy", name},
                       {"beta", beta},
                       {"t", config.physics.duration},
                       {"N", run.shots.size()},
                       {"mean_work", estimate_json(run.summary.mean_work())},
                       {"mean_conditional_work", estimate_json(run.summary.mean_conditional_work())},
                       {"out_of_range_wr", h_wr.out_of_range}});
    if (config.run.shot_log) all_shots.insert(all_shots.end(), run.shots.begin(), run.shots.end());
  }
  out.emit("hist_summary.json", summary.dump(2) + "\n");
  if (config.run.shot_log) out.emit("shots.csv", render([&](std::ostream& o) { io::write_shot_log(o, all_shots); }));
  log << "hist: " << config.hist.policies.size() << " policies written to " << config.run.out << "\n";
  if (violations) {
    log << "error: " << violations << " shots violated state or process invariants\n";
    return kInvariantViolation;
  }
  return kOk;
}

int cmd_validate(const RunConfig& config, std::ostream& log) {
  config.check();
  const Emitter out(config, "validate");
  const SimParams& p = config.physics;
  const DensityMatrix rho_i = parse_initial_state(config.validate.initial);

  StreamRng rng(config.run.seed, kValidateReferenceStream, config.validate.reference_shot);
  const SynthesisResult reference = synthesize_record_final(p, rho_i, rng);
  ValidationReport report =
      tomographic_validate(reference.record, p, rho_i, config.validate.trajectories, config.validate.times,
                           config.validate.tolerance, control_for(config, kValidateEnsembleStream));
  report.reference_id = "seed " + std::to_string(config.run.seed) + " stream " +
                        std::to_string(kValidateReferenceStream) + " shot " +
                        std::to_string(config.validate.reference_shot);

  json points = json::array();
  for (const ValidationPoint& pt : report.points) {
    points.push_back({{"t", pt.t},
                      {"axis", std::string(to_string(pt.axis))},
                      {"predicted", pt.predicted},
                      {"subensemble", pt.subensemble},
                      {"tomographic", pt.subensemble ? json(pt.tomographic) : json(nullptr)},
                      {"se", pt.subensemble ? json(pt.se) : json(nullptr)},
                      {"pass", pt.pass}});
    if (pt.subensemble < 100)
      log << "warning: subensemble at t=" << io::format_double(pt.t) << " (" << to_string(pt.axis) << ") has only "
          << pt.subensemble << " trajectories\n";
  }
  json doc = {{"reference_id", report.reference_id},
              {"initial", config.validate.initial},
              {"trajectories", report.trajectories},
              {"tolerance", report.tolerance},
              {"points", points},
              {"pass", report.pass()}};
  out.emit("validation.json", doc.dump(2) + "\n");
  log << "validate: " << (report.pass() ? "pass" : "FAIL") << "\n";
  return report.pass() ? kOk : kValidationFailed;
}

}  // namespace qdemon::cli
