#pragma once

// Plain-text exchange formats. Numbers are written with %.17g so that files
// round-trip exactly and are byte-identical for identical inputs.

#include "qdemon/experiment.hpp"
#include "qdemon/process.hpp"
#include "qdemon/thermo.hpp"
#include "qdemon/trajectory.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace qdemon::io {

std::string format_double(double v);

/// `t,r` with one row per sample; t is the start of the sample interval.
void write_record_csv(std::ostream& out, const MeasurementRecord& record);
/// {dt, k, omega_R, eta, origin}, rates in rad/s.
std::string record_sidecar_json(const MeasurementRecord& record, const SimParams& params);

struct LoadedRecord {
  MeasurementRecord record;
  double k = 0.0;
  double omega_r = 0.0;
  double eta = 0.0;
};

/// Reads a record CSV and its JSON sidecar. Rejects malformed rows and
/// non-finite samples with std::runtime_error.
LoadedRecord read_record(std::istream& csv, std::istream& sidecar);
LoadedRecord read_record(const std::filesystem::path& csv, const std::filesystem::path& sidecar);

/// `t,x,y,z,purity`
void write_trajectory_csv(std::ostream& out, const TrajectoryPath& path);

/// `t,x_sme,z_sme,x_chi,z_chi,deviation` for the same record: SME path
/// against the process-matrix reconstruction from the same initial state.
void write_deviation_csv(std::ostream& out, const TrajectoryPath& sme, const ProcessPath& chi,
                         const DensityMatrix& rho_i, std::size_t stride);

struct ChiSnapshot {
  double time = 0.0;
  ProcessMatrix chi;
};

/// [{"time":..., "log_scale":..., "chi":[[re,im] x 16 row-major]}, ...]
std::string chi_snapshots_json(std::span<const ChiSnapshot> snapshots);

/// `t,x,y,z` of rho-tilde along a process path.
void write_effective_csv(std::ostream& out, const ProcessPath& path);

/// `shot,policy,beta,eta,t,i,f,W,Wr,info,theta`
void write_shot_log(std::ostream& out, std::span<const ShotRecord> shots);

enum class SweepQuantity { gamma_gain, work_gain };

/// `beta,eta_eff,t,value,se,N`; cells without both demons are skipped.
void write_sweep_csv(std::ostream& out, const SweepResult& result, SweepQuantity quantity);

/// `bin_left,bin_right,count,freq`
void write_histogram_csv(std::ostream& out, const Histogram& h);

/// Writes text to a file, creating parent directories. Throws std::runtime_error on failure.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace qdemon::io
