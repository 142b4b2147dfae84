#include "qdemon/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qdemon::io {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_record_csv(std::ostream& out, const MeasurementRecord& record) {
  out << "t,r\n";
  for (std::size_t j = 0; j < record.size(); ++j)
    out << format_double(record.dt * static_cast<double>(j)) << ',' << format_double(record.samples[j]) << '\n';
}

std::string record_sidecar_json(const MeasurementRecord& record, const SimParams& params) {
  json j;
  j["dt"] = record.dt;
  j["k"] = params.k;
  j["omega_R"] = params.omega_r;
  j["eta"] = record.eta_used;
  j["origin"] = std::string(to_string(record.origin));
  return j.dump(2) + "\n";
}

LoadedRecord read_record(std::istream& csv, std::istream& sidecar) {
  json meta;
  try {
    meta = json::parse(sidecar);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("record sidecar: ") + e.what());
  }
  LoadedRecord out;
  try {
    out.record.dt = meta.at("dt").get<double>();
    out.k = meta.at("k").get<double>();
    out.omega_r = meta.at("omega_R").get<double>();
    out.eta = meta.at("eta").get<double>();
    out.record.origin = parse_record_origin(meta.value("origin", std::string("external")));
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("record sidecar: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("record sidecar: ") + e.what());
  }
  out.record.eta_used = out.eta;

  std::string line;
  if (!std::getline(csv, line) || line.rfind("t,r", 0) != 0) throw std::runtime_error("record csv: missing 't,r' header");
  std::size_t row = 1;
  while (std::getline(csv, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("record csv: malformed row " + std::to_string(row));
    double r = 0.0;
    try {
      std::size_t used = 0;
      r = std::stod(line.substr(comma + 1), &used);
    } catch (const std::exception&) {
      throw std::runtime_error("record csv: malformed row " + std::to_string(row));
    }
    if (!std::isfinite(r)) throw std::runtime_error("record csv: non-finite sample in row " + std::to_string(row));
    out.record.samples.push_back(r);
  }
  return out;
}

LoadedRecord read_record(const std::filesystem::path& csv, const std::filesystem::path& sidecar) {
  std::ifstream c(csv), s(sidecar);
  if (!c) throw std::runtime_error("cannot open " + csv.string());
  if (!s) throw std::runtime_error("cannot open " + sidecar.string());
  return read_record(c, s);
}

void write_trajectory_csv(std::ostream& out, const TrajectoryPath& path) {
  out << "t,x,y,z,purity\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    const BlochVector b = path.bloch(i);
    out << format_double(path.time(i)) << ',' << format_double(b.x) << ',' << format_double(b.y) << ','
        << format_double(b.z) << ',' << format_double(path.states[i].purity()) << '\n';
  }
}

void write_deviation_csv(std::ostream& out, const TrajectoryPath& sme, const ProcessPath& chi,
                         const DensityMatrix& rho_i, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("stride must be >= 1");
  out << "t,x_sme,z_sme,x_chi,z_chi,deviation\n";
  for (std::size_t p = 0; p < chi.size(); ++p) {
    const std::size_t step = static_cast<std::size_t>(std::llround(chi.times[p] / sme.dt));
    if (step >= sme.size()) break;
    const DensityMatrix from_chi = apply_process(chi.chis[p], rho_i).normalized;
    const BlochVector a = sme.bloch(step);
    const BlochVector b = bloch_from_density(from_chi);
    out << format_double(chi.times[p]) << ',' << format_double(a.x) << ',' << format_double(a.z) << ','
        << format_double(b.x) << ',' << format_double(b.z) << ','
        << format_double(sup_norm(sme.states[step].matrix() - from_chi.matrix())) << '\n';
  }
}

std::string chi_snapshots_json(std::span<const ChiSnapshot> snapshots) {
  json arr = json::array();
  for (const ChiSnapshot& s : snapshots) {
    json entries = json::array();
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) entries.push_back({s.chi.chi(r, c).real(), s.chi.chi(r, c).imag()});
    arr.push_back({{"time", s.time}, {"log_scale", s.chi.log_scale}, {"chi", entries}});
  }
  return arr.dump(2) + "\n";
}

void write_effective_csv(std::ostream& out, const ProcessPath& path) {
  out << "t,x,y,z\n";
  for (std::size_t p = 0; p < path.size(); ++p) {
    const BlochVector b = bloch_from_density(path.effective[p]);
    out << format_double(path.times[p]) << ',' << format_double(b.x) << ',' << format_double(b.y) << ','
        << format_double(b.z) << '\n';
  }
}

void write_shot_log(std::ostream& out, std::span<const ShotRecord> shots) {
  out << "shot,policy,beta,eta,t,i,f,W,Wr,info,theta\n";
  for (const ShotRecord& s : shots) {
    out << s.shot << ',' << to_string(s.policy) << ',' << format_double(s.beta) << ',' << format_double(s.eta) << ','
        << format_double(s.t) << ',' << index(s.i) << ',' << index(s.f) << ',' << format_double(s.work) << ','
        << format_double(s.conditional_work) << ',' << format_double(s.info) << ',' << format_double(s.theta)
        << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& result, SweepQuantity quantity) {
  out << "beta,eta_eff,t,value,se,N\n";
  for (const SweepCell& c : result.cells) {
    const std::optional<Estimate>& e = quantity == SweepQuantity::gamma_gain ? c.gamma_gain : c.work_gain;
    if (!e) continue;
    out << format_double(c.beta) << ',' << format_double(c.eta) << ',' << format_double(c.t) << ','
        << format_double(e->value) << ',' << format_double(e->se) << ',' << c.shots << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << "bin_left,bin_right,count,freq\n";
  for (std::size_t j = 0; j < h.counts.size(); ++j)
    out << format_double(h.edges[j]) << ',' << format_double(h.edges[j + 1]) << ',' << h.counts[j] << ','
        << format_double(h.freq[j]) << '\n';
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << contents;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace qdemon::io
