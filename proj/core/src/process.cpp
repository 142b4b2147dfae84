#include "qdemon/process.hpp"

#include <cmath>
#include <stdexcept>

namespace qdemon {

ChiContraction::ChiContraction() {
  const PauliBasis& basis = PauliBasis::instance();
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      auto& group = table_[static_cast<std::size_t>(4 * m + n)];
      for (int mp = 0; mp < 4; ++mp) {
        for (int np = 0; np < 4; ++np) {
          const int j = basis.product_index(m, mp);
          const int k = basis.product_index(n, np);
          group[static_cast<std::size_t>(4 * mp + np)] = {
              static_cast<std::uint8_t>(mp), static_cast<std::uint8_t>(np), static_cast<std::uint8_t>(j),
              static_cast<std::uint8_t>(k), basis.c(m, mp, j) * std::conj(basis.c(n, np, k))};
        }
      }
    }
  }
}

const ChiContraction& ChiContraction::instance() {
  static const ChiContraction table;
  return table;
}

Mat4 ChiContraction::apply(const Mat4& step, const Mat4& chi) const {
  Mat4 out = Mat4::Zero();
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      const complex t = step(m, n);
      if (t == complex{}) continue;
      for (const Term& term : terms(m, n)) {
        out(term.dst_row, term.dst_col) += term.coef * t * chi(term.src_row, term.src_col);
      }
    }
  }
  return out;
}

ProcessIntegrator::ProcessIntegrator(const SimParams& params) : model_(params) {}

void ProcessIntegrator::step(double r) {
  chi_.chi = ChiContraction::instance().apply(model_.step_matrix(r), chi_.chi);
  chi_.hermitize();
  ++steps_;
  if (!chi_.chi.allFinite()) throw NumericalError("non-finite process matrix", steps_);
  const double largest = chi_.max_abs();
  if (largest < kRescaleLow || largest > kRescaleHigh) {
    const double scale = chi_.trace();
    if (!(scale > 0.0)) throw NumericalError("process matrix trace <= 0 during rescale", steps_);
    chi_.chi /= scale;
    chi_.log_scale += std::log(scale);
  }
}

ProcessPath evolve_chi(const MeasurementRecord& record, const SimParams& params, std::size_t stride) {
  check_record_compatible(record, params);
  if (stride == 0) stride = 1;
  ProcessIntegrator integrator(params);
  ProcessPath path;
  auto store = [&](std::size_t step) {
    path.times.push_back(params.dt * static_cast<double>(step));
    path.chis.push_back(integrator.process());
    path.effective.push_back(effective_state(integrator.process()));
  };
  store(0);
  for (std::size_t j = 0; j < record.size(); ++j) {
    integrator.step(record.samples[j]);
    if ((j + 1) % stride == 0 || j + 1 == record.size()) store(j + 1);
  }
  return path;
}

ProcessMatrix evolve_chi_final(const MeasurementRecord& record, const SimParams& params) {
  check_record_compatible(record, params);
  ProcessIntegrator integrator(params);
  for (double r : record.samples) integrator.step(r);
  return integrator.process();
}

Mat2 apply_linear(const ProcessMatrix& chi, const Mat2& op) {
  const PauliBasis& basis = PauliBasis::instance();
  Mat2 out = Mat2::Zero();
  for (int j = 0; j < 4; ++j) {
    const Mat2 left = basis.op(j) * op;
    for (int k = 0; k < 4; ++k) {
      const complex c = chi.chi(j, k);
      if (c == complex{}) continue;
      out += c * left * basis.op(k).adjoint();
    }
  }
  return out;
}

AppliedProcess apply_process(const ProcessMatrix& chi, const DensityMatrix& rho_i) {
  const Mat2 phi = apply_linear(chi, rho_i.matrix());
  const double tr = phi.trace().real();
  if (!(tr > 0.0)) throw std::domain_error("process output has trace <= 0");
  return {phi, hermitian_part(phi / tr), std::log(tr) + chi.log_scale};
}

DensityMatrix effective_state(const ProcessMatrix& chi) {
  const PauliBasis& basis = PauliBasis::instance();
  Vec4 coeff = Vec4::Zero();
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) coeff(basis.product_index(j, k)) += chi.chi(j, k) * basis.product_coefficient(j, k);
  const Mat2 m = basis.from_coefficients(coeff);
  const double tr = m.trace().real();
  if (!(tr > 0.0)) throw std::domain_error("degenerate process matrix: Tr E(I) <= 0");
  return hermitian_part(m / tr);
}

ProcessMatrix unitary_process(const Mat2& u) {
  const Vec4 a = PauliBasis::instance().coefficients(u);
  ProcessMatrix p;
  p.chi = a * a.adjoint();
  return p;
}

}  // namespace qdemon
