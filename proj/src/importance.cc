#include "atdev/importance.h"

#include <algorithm>

#include "atdev/error.h"

namespace atdev {

ComponentImportance atdev_importance(const EffectMatrix& em) {
  if (em.kind != MatrixKind::ATDEV) throw UsageError("atdev_importance: needs an ATDEV matrix");
  const std::size_t p = em.p;
  ComponentImportance out{std::vector<double>(p * p, 0.0), std::vector<double>(p, 0.0)};
  for (std::size_t k = 0; k < p; ++k)
    for (std::size_t j = 0; j < p; ++j)
      if (const auto& c = em.cell(k, j)) out.v[k * p + j] = std::max(0.0, weighted_variance(*c));
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t k = 0; k < p; ++k) out.v_plus[j] += out.v[k * p + j];
  return out;
}

std::vector<double> dgsm(std::span<const DerivativeField> fields) {
  std::vector<double> out;
  out.reserve(fields.size());
  for (const auto& f : fields) {
    if (f.values.empty()) throw DataError("dgsm: empty derivative field");
    double s = 0.0;
    for (double g : f.values) s += g * g;
    out.push_back(s / static_cast<double>(f.values.size()));
  }
  return out;
}

std::vector<double> dgsm(const Predictor& m, const Dataset& d, const DerivativeOptions& options) {
  return dgsm(all_partial_derivatives(m, d, options));
}

ImportanceReport importance_report(const Predictor& m, const Dataset& d,
                                   const EffectOptions& options) {
  const auto fields = all_partial_derivatives(m, d, options.derivatives);
  std::vector<BinScheme> bins;
  std::vector<DependenceModel> deps;
  for (std::size_t j = 0; j < d.cols(); ++j) {
    bins.push_back(quantile_bins(d, j, options.bins));
    deps.push_back(fit_dependence(d, j, options.dependence, options.bins));
  }
  const EffectMatrix em = effect_matrix(fields, d, MatrixKind::ATDEV, deps, bins);
  ComponentImportance ci = atdev_importance(em);
  return {d.names(), std::move(ci.v), std::move(ci.v_plus), dgsm(fields)};
}

}  // namespace atdev
