#include "config.hpp"

#include "qdemon/experiment.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <stdexcept>

namespace qdemon::cli {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw std::invalid_argument(where + " must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : obj.items())
    if (!keys.count(item.key())) throw std::invalid_argument("unknown key '" + where + "." + item.key() + "'");
}

template <class T>
void read(const json& obj, const char* key, const std::string& where, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument("bad value for '" + where + "." + key + "'");
  }
}

void read_policies(const json& obj, const char* key, const std::string& where, std::vector<PolicyKind>& out) {
  std::vector<std::string> names;
  if (!obj.contains(key)) return;
  read(obj, key, where, names);
  out.clear();
  for (const auto& n : names) out.push_back(parse_policy(n));
}

json policy_names(const std::vector<PolicyKind>& kinds) {
  json arr = json::array();
  for (PolicyKind k : kinds) arr.push_back(std::string(to_string(k)));
  return arr;
}

void check_times(const std::vector<double>& times, const std::string& where) {
  if (times.empty()) throw std::invalid_argument(where + " must not be empty");
  for (double t : times)
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument(where + " entries must be finite and >= 0");
}

}  // namespace

DensityMatrix parse_initial_state(const std::string& name) {
  if (name == "ground") return DensityMatrix::ground();
  if (name == "excited") return DensityMatrix::excited();
  if (name == "mixed") return DensityMatrix::maximally_mixed();
  if (name == "plus_x") return density_from_bloch({1.0, 0.0, 0.0});
  throw std::invalid_argument("unknown initial state '" + name + "' (expected ground|excited|mixed|plus_x)");
}

void RunConfig::check() const {
  physics.validate();
  if (run.shots < 2) throw std::invalid_argument("run.shots must be >= 2");
  FeedbackPolicy{PolicyKind::none, feedback.angle_bins, feedback.quantize}.validate();
  parse_initial_state(simulate.initial);
  parse_initial_state(validate.initial);
  if (simulate.stride < 1) throw std::invalid_argument("simulate.stride must be >= 1");
  for (double t : simulate.snapshot_at)
    if (!(t >= 0.0 && t <= physics.duration * (1.0 + 1e-12)))
      throw std::invalid_argument("simulate.snapshot_at entries must lie in [0, duration]");
  if (!(demons.beta >= 0.0)) throw std::invalid_argument("demons.beta must be >= 0");
  check_times(demons.times, "demons.times");
  SweepGrid grid{sweep.betas, sweep.etas, sweep.times, run.shots, sweep.policies, feedback.angle_bins, feedback.quantize};
  grid.validate(physics);
  if (!(hist.beta >= 0.0)) throw std::invalid_argument("hist.beta must be >= 0");
  if (hist.policies.empty()) throw std::invalid_argument("hist.policies must not be empty");
  if (hist.bins < 1) throw std::invalid_argument("hist.bins must be >= 1");
  if (validate.trajectories < 2) throw std::invalid_argument("validate.trajectories must be >= 2");
  check_times(validate.times, "validate.times");
  for (double t : validate.times)
    if (t > physics.duration * (1.0 + 1e-12)) throw std::invalid_argument("validate.times must not exceed duration");
  if (!(validate.tolerance >= 0.0)) throw std::invalid_argument("validate.tolerance must be >= 0");
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  reject_unknown(j, "config", {"physics", "run", "feedback", "simulate", "demons", "sweep", "hist", "validate"});

  if (j.contains("physics")) {
    const json& p = j.at("physics");
    reject_unknown(p, "physics", {"k_hz", "omega_r_hz", "eta", "dt", "duration", "scheme"});
    double k_hz = c.physics.k / kTwoPi;
    double omega_hz = c.physics.omega_r / kTwoPi;
    read(p, "k_hz", "physics", k_hz);
    read(p, "omega_r_hz", "physics", omega_hz);
    c.physics.k = kTwoPi * k_hz;
    c.physics.omega_r = kTwoPi * omega_hz;
    read(p, "eta", "physics", c.physics.eta);
    read(p, "dt", "physics", c.physics.dt);
    read(p, "duration", "physics", c.physics.duration);
    std::string scheme(to_string(c.physics.scheme));
    read(p, "scheme", "physics", scheme);
    c.physics.scheme = parse_step_scheme(scheme);
  }
  if (j.contains("run")) {
    const json& r = j.at("run");
    reject_unknown(r, "run", {"seed", "threads", "out", "shots", "shot_log"});
    read(r, "seed", "run", c.run.seed);
    read(r, "threads", "run", c.run.threads);
    read(r, "out", "run", c.run.out);
    read(r, "shots", "run", c.run.shots);
    read(r, "shot_log", "run", c.run.shot_log);
  }
  if (j.contains("feedback")) {
    const json& f = j.at("feedback");
    reject_unknown(f, "feedback", {"angle_bins", "quantize"});
    read(f, "angle_bins", "feedback", c.feedback.angle_bins);
    read(f, "quantize", "feedback", c.feedback.quantize);
  }
  if (j.contains("simulate")) {
    const json& s = j.at("simulate");
    reject_unknown(s, "simulate", {"initial", "snapshot_at", "stride"});
    read(s, "initial", "simulate", c.simulate.initial);
    read(s, "snapshot_at", "simulate", c.simulate.snapshot_at);
    read(s, "stride", "simulate", c.simulate.stride);
  }
  if (j.contains("demons")) {
    const json& d = j.at("demons");
    reject_unknown(d, "demons", {"beta", "times"});
    read(d, "beta", "demons", c.demons.beta);
    read(d, "times", "demons", c.demons.times);
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    reject_unknown(s, "sweep", {"betas", "etas", "times", "policies"});
    read(s, "betas", "sweep", c.sweep.betas);
    read(s, "etas", "sweep", c.sweep.etas);
    read(s, "times", "sweep", c.sweep.times);
    read_policies(s, "policies", "sweep", c.sweep.policies);
  }
  if (j.contains("hist")) {
    const json& h = j.at("hist");
    reject_unknown(h, "hist", {"beta", "policies", "bins"});
    read(h, "beta", "hist", c.hist.beta);
    read_policies(h, "policies", "hist", c.hist.policies);
    read(h, "bins", "hist", c.hist.bins);
  }
  if (j.contains("validate")) {
    const json& v = j.at("validate");
    reject_unknown(v, "validate", {"initial", "trajectories", "times", "tolerance", "reference_shot"});
    read(v, "initial", "validate", c.validate.initial);
    read(v, "trajectories", "validate", c.validate.trajectories);
    read(v, "times", "validate", c.validate.times);
    read(v, "tolerance", "validate", c.validate.tolerance);
    read(v, "reference_shot", "validate", c.validate.reference_shot);
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const RunConfig& c) {
  return {
      {"physics",
       {{"k_hz", c.physics.k / kTwoPi},
        {"omega_r_hz", c.physics.omega_r / kTwoPi},
        {"eta", c.physics.eta},
        {"dt", c.physics.dt},
        {"duration", c.physics.duration},
        {"scheme", std::string(to_string(c.physics.scheme))}}},
      {"run",
       {{"seed", c.run.seed},
        {"threads", c.run.threads},
        {"out", c.run.out},
        {"shots", c.run.shots},
        {"shot_log", c.run.shot_log}}},
      {"feedback", {{"angle_bins", c.feedback.angle_bins}, {"quantize", c.feedback.quantize}}},
      {"simulate",
       {{"initial", c.simulate.initial}, {"snapshot_at", c.simulate.snapshot_at}, {"stride", c.simulate.stride}}},
      {"demons", {{"beta", c.demons.beta}, {"times", c.demons.times}}},
      {"sweep",
       {{"betas", c.sweep.betas},
        {"etas", c.sweep.etas},
        {"times", c.sweep.times},
        {"policies", policy_names(c.sweep.policies)}}},
      {"hist", {{"beta", c.hist.beta}, {"policies", policy_names(c.hist.policies)}, {"bins", c.hist.bins}}},
      {"validate",
       {{"initial", c.validate.initial},
        {"trajectories", c.validate.trajectories},
        {"times", c.validate.times},
        {"tolerance", c.validate.tolerance},
        {"reference_shot", c.validate.reference_shot}}},
  };
}

}  // namespace qdemon::cli
