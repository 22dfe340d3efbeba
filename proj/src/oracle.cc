#include "atdev/oracle.h"

#include <string>

#include "atdev/error.h"
#include "atdev/stats.h"

namespace atdev {

OracleParams OracleParams::from_data(const Dataset& d) {
  const std::size_t p = d.cols();
  OracleParams o{p, std::vector<double>(p), std::vector<double>(p * p, 0.0),
                 std::vector<double>(p * p, 0.0)};
  for (std::size_t j = 0; j < p; ++j) o.means[j] = stats::mean(d.column(j));
  for (std::size_t j = 0; j < p; ++j) {
    const double var_j = stats::variance(d.column(j));
    for (std::size_t k = 0; k < p; ++k) {
      const double b = k == j ? 1.0 : stats::covariance(d.column(j), d.column(k)) / var_j;
      o.slopes[k * p + j] = b;
      o.intercepts[k * p + j] = o.means[k] - b * o.means[j];
    }
  }
  return o;
}

namespace {

using Coeffs = std::array<double, 4>;

Coeffs add(Coeffs a, const Coeffs& b) {
  for (std::size_t i = 0; i < 4; ++i) a[i] += b[i];
  return a;
}

[[noreturn]] void no_oracle(ModelId model, CurveKind kind, std::size_t j,
                            std::optional<std::size_t> k) {
  std::string what = "no oracle for " + to_string(model) + " " + to_string(kind) + " j=" +
                     std::to_string(j);
  if (k) what += " k=" + std::to_string(*k);
  throw UsageError(what);
}

// Two-variable closed forms. `o` is the other variable.
Coeffs pair_own(ModelId model, CurveKind kind, std::size_t j, const OracleParams& q) {
  const std::size_t o = 1 - j;
  const double b = q.beta(o, j), c = q.c(o, j);
  switch (model) {
    case ModelId::AdditiveLinear: return {0, 1, 0, 0};
    case ModelId::Multiplicative:
      if (kind == CurveKind::PD) return {0, q.mu(o), 0, 0};
      return {0, c, b / 2, 0};
    case ModelId::QuadPlusInteraction:
      if (j == 0) {
        if (kind == CurveKind::PD) return {0, q.mu(1), 1, 0};
        return {0, c, 1 + b / 2, 0};
      }
      if (kind == CurveKind::PD) return {0, q.mu(0), 0, 0};
      return {0, c, b / 2, 0};
    default: break;
  }
  throw UsageError("no oracle");
}

// Cross effect on x_j carried through the other variable.
Coeffs pair_cross(ModelId model, std::size_t j, const OracleParams& q) {
  const std::size_t o = 1 - j;
  const double b = q.beta(o, j), c = q.c(o, j);
  switch (model) {
    case ModelId::AdditiveLinear: return {0, b, 0, 0};
    case ModelId::Multiplicative: return {0, 0, b / 2, 0};
    case ModelId::QuadPlusInteraction:
      // d/dx1 = 2 x1 + x2; for j = 1 the conditional mean of x1 enters.
      if (j == 0) return {0, 0, b / 2, 0};
      return {0, 2 * b * c, b / 2 + b * b, 0};
    default: break;
  }
  throw UsageError("no oracle");
}

Coeffs two_variable(ModelId model, CurveKind kind, std::size_t j, std::optional<std::size_t> k,
                    const OracleParams& q) {
  if (j > 1) no_oracle(model, kind, j, k);
  switch (kind) {
    case CurveKind::PD:
    case CurveKind::ALE: return pair_own(model, kind, j, q);
    case CurveKind::ACE:
      if (!k || *k != 1 - j) no_oracle(model, kind, j, k);
      return pair_cross(model, j, q);
    case CurveKind::ATDEV:
    case CurveKind::Marginal:
      return add(pair_own(model, CurveKind::ALE, j, q), pair_cross(model, j, q));
    default: no_oracle(model, kind, j, k);
  }
}

// x1^2 + x2 on three variables; additive, so PD == ALE.
Coeffs case621_own(std::size_t j) {
  if (j == 0) return {0, 0, 1, 0};
  if (j == 1) return {0, 1, 0, 0};
  return {0, 0, 0, 0};
}

Coeffs case621_cross(std::size_t k, std::size_t j, const OracleParams& q) {
  const double b = q.beta(k, j), c = q.c(k, j);
  if (k == 0) return {0, 2 * b * c, b * b, 0};  // E[2 x1 | x_j] * slope, integrated
  if (k == 1) return {0, b, 0, 0};
  return {0, 0, 0, 0};
}

Coeffs case621(CurveKind kind, std::size_t j, std::optional<std::size_t> k, const OracleParams& q) {
  if (j > 2) no_oracle(ModelId::Case621, kind, j, k);
  switch (kind) {
    case CurveKind::PD:
    case CurveKind::ALE: return case621_own(j);
    case CurveKind::ACE:
      if (!k || *k == j || *k > 2) no_oracle(ModelId::Case621, kind, j, k);
      return case621_cross(*k, j, q);
    case CurveKind::ATDEV:
    case CurveKind::Marginal: {
      Coeffs t = case621_own(j);
      for (std::size_t m = 0; m < 3; ++m)
        if (m != j) t = add(t, case621_cross(m, j, q));
      return t;
    }
    default: no_oracle(ModelId::Case621, kind, j, k);
  }
}

// x1 + x2 + x1 x2 with x3 outside the model: the additive and multiplicative
// pair forms summed; cross effects through x3 vanish.
Coeffs case622(CurveKind kind, std::size_t j, std::optional<std::size_t> k, const OracleParams& q) {
  if (j > 1) no_oracle(ModelId::Case622, kind, j, k);
  if (kind == CurveKind::ACE && k && *k == 2) return {0, 0, 0, 0};
  if (kind == CurveKind::ACE && (!k || *k != 1 - j)) no_oracle(ModelId::Case622, kind, j, k);
  return add(two_variable(ModelId::AdditiveLinear, kind, j, k, q),
             two_variable(ModelId::Multiplicative, kind, j, k, q));
}

}  // namespace

OracleCurve oracle(ModelId model, CurveKind kind, std::size_t j, std::optional<std::size_t> k,
                   const OracleParams& params) {
  OracleCurve out{model, kind, j, k, {}};
  switch (model) {
    case ModelId::AdditiveLinear:
    case ModelId::Multiplicative:
    case ModelId::QuadPlusInteraction:
      if (params.p != 2) no_oracle(model, kind, j, k);
      out.coeffs = two_variable(model, kind, j, k, params);
      break;
    case ModelId::Case621:
      if (params.p != 3) no_oracle(model, kind, j, k);
      out.coeffs = case621(kind, j, k, params);
      break;
    case ModelId::Case622:
      if (params.p != 3) no_oracle(model, kind, j, k);
      out.coeffs = case622(kind, j, k, params);
      break;
    default: no_oracle(model, kind, j, k);
  }
  return out;
}

}  // namespace atdev
