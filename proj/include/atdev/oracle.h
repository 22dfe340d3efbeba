#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "atdev/analytic_model.h"
#include "atdev/curve.h"
#include "atdev/dataset.h"

namespace atdev {

// Moments the closed forms depend on, estimated from a dataset: sample means
// and the OLS regression x_k = slope(k, j) x_j + intercept(k, j) + e.
struct OracleParams {
  std::size_t p = 0;
  std::vector<double> means;
  std::vector<double> slopes;      // p x p, [k * p + j] = slope of x_k on x_j
  std::vector<double> intercepts;  // same layout

  double mu(std::size_t k) const { return means.at(k); }
  double beta(std::size_t k, std::size_t j) const { return slopes.at(k * p + j); }
  double c(std::size_t k, std::size_t j) const { return intercepts.at(k * p + j); }

  static OracleParams from_data(const Dataset& d);
};

// Closed-form curve c0 + c1 x + c2 x^2 + c3 x^3 in x_j, defined up to an
// additive constant (c0 is always 0).
struct OracleCurve {
  ModelId model = ModelId::AdditiveLinear;
  CurveKind kind = CurveKind::PD;
  std::size_t j = 0;
  std::optional<std::size_t> k;
  std::array<double, 4> coeffs{};

  double operator()(double x) const {
    return coeffs[0] + x * (coeffs[1] + x * (coeffs[2] + x * coeffs[3]));
  }
};

// Covered: the two-variable models additive_linear (unit coefficients),
// multiplicative and quad_plus_interaction for j, k in {0, 1}; case_621 for
// every (j, k); case_622 for j in {0, 1}. Kinds PD, ALE, ACE (needs k != j),
// ATDEV and Marginal (which equals ATDEV up to a constant). Anything else
// throws UsageError("no oracle ...").
OracleCurve oracle(ModelId model, CurveKind kind, std::size_t j, std::optional<std::size_t> k,
                   const OracleParams& params);

}  // namespace atdev
