#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "atdev/dataset.h"
#include "atdev/dependence.h"
#include "atdev/predictor.h"

namespace atdev {

enum class DerivativeMethod { Analytic, CentralFd };

// df/dx_j evaluated at every observed row.
struct DerivativeField {
  std::size_t j = 0;
  std::vector<double> values;
  DerivativeMethod method = DerivativeMethod::Analytic;
};

struct DerivativeOptions {
  // Overrides the finite-difference step for every variable.
  std::optional<double> fd_step;
  // Use central differences even when the backend has analytic gradients.
  bool force_fd = false;
};

// Default central-difference step for column j: max(1e-4 * sd(x_j), 1e-8).
double default_fd_step(const Dataset& d, std::size_t j);

// Analytic gradients when the backend has them, otherwise
// (f(x + h e_j) - f(x - h e_j)) / 2h. Throws NumericalError naming the row of
// the first non-finite derivative.
DerivativeField partial_derivatives(const Predictor& m, const Dataset& d, std::size_t j,
                                    const DerivativeOptions& options = {});

// All p fields; the analytic path evaluates the gradient once.
std::vector<DerivativeField> all_partial_derivatives(const Predictor& m, const Dataset& d,
                                                     const DerivativeOptions& options = {});

// Total derivative df/dx_j = f_j + sum_{k != j} f_k * m_k^1(x_j) at every row.
std::vector<double> total_derivatives(std::span<const DerivativeField> fields, const Dataset& d,
                                      const DependenceModel& dep);
std::vector<double> total_derivatives(const Predictor& m, const Dataset& d, std::size_t j,
                                      const DependenceModel& dep,
                                      const DerivativeOptions& options = {});

}  // namespace atdev
