#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "atdev/predictor.h"

namespace atdev {

// coef * prod_i x_{var_i}^{power_i}; an empty factor list is a constant.
struct Term {
  double coef = 0.0;
  std::vector<std::pair<std::size_t, int>> factors;  // (variable index, power >= 1)

  bool operator==(const Term&) const = default;
};

enum class ModelId {
  AdditiveLinear,       // sum_j beta_j x_j
  Multiplicative,       // x1 x2
  QuadPlusInteraction,  // x1^2 + x1 x2
  Case61,               // x1 + x2^2 + x3^3 + 0.8 x2 x4
  Case621,              // x1^2 + x2                      (p = 3)
  Case622,              // x1 + x2 + x1 x2                (p = 3)
  Case623,              // x1 + (3x2^2-1)/2 + (4x3^3-3x3)/2 + 0.8 x2 x4
  Custom,
};

std::string to_string(ModelId id);
ModelId parse_model_id(std::string_view s);

// Polynomial regression function with exact gradients. Every catalog model is
// stored as a term list, so catalog and custom models share one code path.
class AnalyticModel final : public Predictor {
 public:
  AnalyticModel(ModelId id, std::vector<Term> terms, std::size_t arity);

  // Catalog constructor. For AdditiveLinear `coefficients` are the betas
  // (default (1, 1)); for the other ids a non-empty list replaces the term
  // coefficients in order.
  static AnalyticModel from_catalog(ModelId id, std::vector<double> coefficients = {});
  static AnalyticModel custom(std::vector<Term> terms, std::size_t arity);

  // c * f, used for scale-equivariance checks.
  AnalyticModel scaled(double c) const;

  ModelId id() const { return id_; }
  const std::vector<Term>& terms() const { return terms_; }

  std::size_t arity() const override { return arity_; }
  bool has_analytic_gradient() const override { return true; }

  double evaluate(std::span<const double> x) const;
  void gradient_at(std::span<const double> x, std::span<double> out) const;

  // True if no term involves variable j.
  bool independent_of(std::size_t j) const;

 protected:
  std::vector<double> do_predict(const Matrix& x) const override;
  Matrix do_gradient(const Matrix& x) const override;

 private:
  ModelId id_;
  std::vector<Term> terms_;
  std::size_t arity_;
};

}  // namespace atdev
