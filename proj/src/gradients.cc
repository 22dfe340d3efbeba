#include "atdev/gradients.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "atdev/error.h"
#include "atdev/stats.h"

namespace atdev {

double default_fd_step(const Dataset& d, std::size_t j) {
  return std::max(1e-4 * stats::stddev(d.column(j)), 1e-8);
}

namespace {

void check_finite(const DerivativeField& f) {
  for (std::size_t i = 0; i < f.values.size(); ++i)
    if (!std::isfinite(f.values[i]))
      throw NumericalError("non-finite derivative d/dx" + std::to_string(f.j + 1) + " at row " +
                           std::to_string(i));
}

DerivativeField central_difference(const Predictor& m, const Dataset& d, std::size_t j,
                                   const DerivativeOptions& options, Matrix& x) {
  const double h = options.fd_step.value_or(default_fd_step(d, j));
  if (!(h > 0.0)) throw UsageError("finite-difference step must be positive");
  const auto col = d.column(j);
  for (std::size_t i = 0; i < x.rows(); ++i) x(i, j) = col[i] + h;
  const std::vector<double> up = m.predict(x);
  for (std::size_t i = 0; i < x.rows(); ++i) x(i, j) = col[i] - h;
  const std::vector<double> down = m.predict(x);
  for (std::size_t i = 0; i < x.rows(); ++i) x(i, j) = col[i];

  DerivativeField f{j, std::vector<double>(x.rows()), DerivativeMethod::CentralFd};
  for (std::size_t i = 0; i < x.rows(); ++i) f.values[i] = (up[i] - down[i]) / (2.0 * h);
  check_finite(f);
  return f;
}

}  // namespace

DerivativeField partial_derivatives(const Predictor& m, const Dataset& d, std::size_t j,
                                    const DerivativeOptions& options) {
  if (j >= d.cols()) throw UsageError("partial_derivatives: variable index out of range");
  Matrix x = d.to_matrix();
  if (m.has_analytic_gradient() && !options.force_fd) {
    const Matrix g = m.gradient(x);
    DerivativeField f{j, g.column(j), DerivativeMethod::Analytic};
    check_finite(f);
    return f;
  }
  return central_difference(m, d, j, options, x);
}

std::vector<DerivativeField> all_partial_derivatives(const Predictor& m, const Dataset& d,
                                                     const DerivativeOptions& options) {
  Matrix x = d.to_matrix();
  std::vector<DerivativeField> fields;
  fields.reserve(d.cols());
  if (m.has_analytic_gradient() && !options.force_fd) {
    const Matrix g = m.gradient(x);
    for (std::size_t j = 0; j < d.cols(); ++j) {
      fields.push_back({j, g.column(j), DerivativeMethod::Analytic});
      check_finite(fields.back());
    }
    return fields;
  }
  for (std::size_t j = 0; j < d.cols(); ++j) fields.push_back(central_difference(m, d, j, options, x));
  return fields;
}

std::vector<double> total_derivatives(std::span<const DerivativeField> fields, const Dataset& d,
                                      const DependenceModel& dep) {
  const std::size_t j = dep.anchor();
  if (fields.size() != d.cols()) throw UsageError("total_derivatives: one field per variable expected");
  const auto xj = d.column(j);
  std::vector<double> out = fields[j].values;
  for (std::size_t k = 0; k < d.cols(); ++k) {
    if (k == j) continue;
    const auto& fk = fields[k].values;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += fk[i] * dep.derivative(k, xj[i]);
  }
  return out;
}

std::vector<double> total_derivatives(const Predictor& m, const Dataset& d, std::size_t j,
                                      const DependenceModel& dep, const DerivativeOptions& options) {
  if (dep.anchor() != j) throw UsageError("total_derivatives: dependence model anchored elsewhere");
  const auto fields = all_partial_derivatives(m, d, options);
  return total_derivatives(fields, d, dep);
}

}  // namespace atdev
