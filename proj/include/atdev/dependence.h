#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "atdev/dataset.h"

namespace atdev {

enum class DependenceMethod { Linear, LocalLinear };

std::string to_string(DependenceMethod m);
DependenceMethod parse_dependence_method(std::string_view s);

// x_k = slope * x_j + intercept + e_k, by OLS.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Piecewise-constant derivative of E[x_k | x_j] over the anchor's bins.
struct LocalLinearFit {
  std::vector<double> edges;
  std::vector<double> slopes;
};

struct DependenceFit {
  std::variant<LinearFit, LocalLinearFit> fit;
  double residual_variance = 0.0;

  // m_k^1(x_j)
  double derivative(double xj) const;
};

// Dependence of every other column on one anchor column j: the m_k(x_j) that
// carry x_j's influence through correlated predictors.
class DependenceModel {
 public:
  DependenceModel(std::size_t anchor, DependenceMethod method, std::vector<DependenceFit> fits);

  // All m_k^1 identically zero (independent predictors).
  static DependenceModel independent(std::size_t anchor, std::size_t p);

  std::size_t anchor() const { return anchor_; }
  DependenceMethod method() const { return method_; }
  std::size_t size() const { return fits_.size(); }

  // Fit for variable k; the entry at the anchor is a unit-slope placeholder.
  const DependenceFit& fit(std::size_t k) const { return fits_.at(k); }
  double derivative(std::size_t k, double xj) const { return fits_.at(k).derivative(xj); }

 private:
  std::size_t anchor_;
  DependenceMethod method_;
  std::vector<DependenceFit> fits_;
};

// One fit per k != j. Linear: exact OLS. LocalLinear: the conditional means of
// x_k and x_j are taken per quantile bin of x_j (`bins` of them) and the slope
// in bin b is the secant through the neighbouring bin means (one-sided at the
// ends). Throws DataError if x_j has zero variance.
DependenceModel fit_dependence(const Dataset& d, std::size_t j,
                               DependenceMethod method = DependenceMethod::Linear,
                               std::size_t bins = 100);

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<double> values;  // p x p, row-major

  std::size_t size() const { return names.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * names.size() + j]; }

  bool operator==(const CorrelationMatrix&) const = default;
};

// Pearson correlations; throws DataError on a constant column.
CorrelationMatrix corr_matrix(const Dataset& d);

}  // namespace atdev
