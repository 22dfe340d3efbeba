#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "atdev/dataset.h"
#include "atdev/effects.h"
#include "atdev/gradients.h"
#include "atdev/predictor.h"

namespace atdev {

// v[k * p + j] is the variance of ATDEV-matrix cell (k, j) over the empirical
// distribution of x_j; v_plus[j] sums column j; dgsm[j] = E[(df/dx_j)^2].
// All entries are nonnegative.
struct ImportanceReport {
  std::vector<std::string> names;
  std::vector<double> v;
  std::vector<double> v_plus;
  std::vector<double> dgsm;

  std::size_t size() const { return names.size(); }
  double at(std::size_t k, std::size_t j) const { return v[k * names.size() + j]; }

  bool operator==(const ImportanceReport&) const = default;
};

struct ComponentImportance {
  std::vector<double> v;
  std::vector<double> v_plus;
};

// Count-weighted variance of every cell curve. Missing cells count as zero.
ComponentImportance atdev_importance(const EffectMatrix& em);

std::vector<double> dgsm(std::span<const DerivativeField> fields);
std::vector<double> dgsm(const Predictor& m, const Dataset& d, const DerivativeOptions& options = {});

// Both families from one set of derivative fields.
ImportanceReport importance_report(const Predictor& m, const Dataset& d,
                                   const EffectOptions& options = {});

}  // namespace atdev
