#include "qdemon/trajectory.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>
#include <string>

namespace qdemon {

namespace {

constexpr complex kI{0.0, 1.0};

// vec(A X B) = (B^T kron A) vec(X), column-major vec.
Mat4 superop(const Mat2& a, const Mat2& b) {
  const Mat2 bt = b.transpose();
  Mat4 s;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) s.block<2, 2>(2 * r, 2 * c) = bt(r, c) * a;
  return s;
}

}  // namespace

std::string_view to_string(RecordOrigin origin) {
  switch (origin) {
    case RecordOrigin::synthesized: return "synthesized";
    case RecordOrigin::degraded: return "degraded";
    case RecordOrigin::external: return "external";
  }
  return "external";
}

RecordOrigin parse_record_origin(std::string_view name) {
  if (name == "synthesized") return RecordOrigin::synthesized;
  if (name == "degraded") return RecordOrigin::degraded;
  if (name == "external") return RecordOrigin::external;
  throw std::invalid_argument("unknown record origin '" + std::string(name) + "'");
}

MeasurementRecord MeasurementRecord::prefix(std::size_t n) const {
  MeasurementRecord out = *this;
  out.samples.resize(std::min(n, samples.size()));
  return out;
}

StateFilter::StateFilter(const SimParams& params, const DensityMatrix& rho_i) : model_(params) {
  const double tr = rho_i.trace();
  if (!(tr > 0.0)) throw std::invalid_argument("initial operator must have positive trace");
  rho_ = rho_i.matrix() / tr;
  log_weight_ = std::log(tr);
}

void StateFilter::step(double r) {
  const Mat2 phi = model_.apply(rho_, r);
  const double tr = phi.trace().real();
  ++steps_;
  if (!std::isfinite(tr) || !phi.allFinite()) throw NumericalError("non-finite conditioned state", steps_);
  if (tr <= 0.0) throw NumericalError("conditioned state trace <= 0", steps_);
  rho_ = phi / tr;
  rho_ = 0.5 * (rho_ + rho_.adjoint()).eval();
  log_weight_ += std::log(tr);
}

void check_record_compatible(const MeasurementRecord& record, const SimParams& params) {
  if (std::abs(record.dt - params.dt) > 1e-9 * params.dt)
    throw std::invalid_argument("record step " + std::to_string(record.dt) + " does not match params.dt " +
                                std::to_string(params.dt));
  for (double r : record.samples)
    if (!std::isfinite(r)) throw std::invalid_argument("record contains non-finite samples");
}

std::pair<MeasurementRecord, TrajectoryPath> synthesize_record(const SimParams& params, const DensityMatrix& rho_i,
                                                               StreamRng& rng) {
  StateFilter filter(params, rho_i);
  const std::size_t n = params.steps();
  MeasurementRecord record{{}, params.dt, params.eta, RecordOrigin::synthesized};
  record.samples.reserve(n);
  TrajectoryPath path;
  path.dt = params.dt;
  path.states.reserve(n + 1);
  path.states.push_back(filter.density());
  for (std::size_t j = 0; j < n; ++j) {
    const double r = filter.model().sample_record(filter.state(), rng);
    record.samples.push_back(r);
    filter.step(r);
    path.states.push_back(filter.density());
  }
  path.log_weight = filter.log_weight();
  return {std::move(record), std::move(path)};
}

SynthesisResult synthesize_record_final(const SimParams& params, const DensityMatrix& rho_i, StreamRng& rng) {
  StateFilter filter(params, rho_i);
  const std::size_t n = params.steps();
  MeasurementRecord record{{}, params.dt, params.eta, RecordOrigin::synthesized};
  record.samples.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double r = filter.model().sample_record(filter.state(), rng);
    record.samples.push_back(r);
    filter.step(r);
  }
  return {std::move(record), filter.density(), filter.log_weight()};
}

TrajectoryPath filter_sme(const MeasurementRecord& record, const DensityMatrix& rho_i, const SimParams& params) {
  check_record_compatible(record, params);
  StateFilter filter(params, rho_i);
  TrajectoryPath path;
  path.dt = params.dt;
  path.states.reserve(record.size() + 1);
  path.states.push_back(filter.density());
  for (double r : record.samples) {
    filter.step(r);
    path.states.push_back(filter.density());
  }
  path.log_weight = filter.log_weight();
  return path;
}

StateFilter filter_sme_final(const MeasurementRecord& record, const DensityMatrix& rho_i, const SimParams& params) {
  check_record_compatible(record, params);
  StateFilter filter(params, rho_i);
  for (double r : record.samples) filter.step(r);
  return filter;
}

DensityMatrix lindblad_propagate(const DensityMatrix& rho_i, double t, const SimParams& params) {
  params.validate();
  if (!(t >= 0.0)) throw std::invalid_argument("propagation time must be >= 0");
  const Mat2 id = Mat2::Identity();
  const Mat2& sz = PauliBasis::instance().op(3);
  const Mat2 drive = -0.5 * params.omega_r * PauliBasis::instance().op(2);
  const Mat4 generator = -kI * (superop(drive, id) - superop(id, drive)) + params.k * (superop(sz, sz) - Mat4::Identity());
  const Mat4 propagator = (generator * t).exp();

  Eigen::Vector4cd v;
  v << rho_i(0, 0), rho_i(1, 0), rho_i(0, 1), rho_i(1, 1);
  const Eigen::Vector4cd out = propagator * v;
  Mat2 m;
  m << out(0), out(2), out(1), out(3);
  return hermitian_part(m);
}

double path_weight(const MeasurementRecord& record, const DensityMatrix& rho_i, const SimParams& params) {
  return filter_sme_final(record, rho_i, params).log_weight();
}

}  // namespace qdemon
