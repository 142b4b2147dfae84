#pragma once

#include "config.hpp"

#include <iosfwd>

namespace qdemon::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsageError = 1,          // bad config, bad flags, I/O failure
  kInvariantViolation = 2,  // a PSD / Hermiticity / trace monitor tripped
  kValidationFailed = 3,    // tomographic validation did not pass
};

// Each command writes its files under config.run.out and, next to every
// file, a `<file>.meta.json` with the resolved config and seed. Progress and
// warnings go to `log`.

/// record.csv (+ record.json), trajectory.csv, chi_snapshots.json,
/// effective.csv, deviation.csv
int cmd_simulate(const RunConfig& config, std::ostream& log);

/// efficacy.csv and work.csv over demons.times at demons.beta for the
/// none / rho / chi policies.
int cmd_demons(const RunConfig& config, std::ostream& log);

/// gamma_gain.csv, work_gain.csv, cells.json
int cmd_sweep(const RunConfig& config, std::ostream& log);

/// hist_tpm_<policy>.csv, hist_wr_<policy>.csv, hist_summary.json
int cmd_hist(const RunConfig& config, std::ostream& log);

/// validation.json
int cmd_validate(const RunConfig& config, std::ostream& log);

}  // namespace qdemon::cli
