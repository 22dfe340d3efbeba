#include "atdev/effects.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "atdev/error.h"

namespace atdev {

std::vector<double> accumulate(const BinScheme& bins, std::span<const double> means) {
  if (means.size() != bins.size()) throw UsageError("accumulate: one mean per bin expected");
  const std::vector<double> w = bins.widths();
  std::vector<double> out(means.size());
  double below = 0.0;
  for (std::size_t b = 0; b < means.size(); ++b) {
    out[b] = below + 0.5 * means[b] * w[b];
    below += means[b] * w[b];
  }
  return out;
}

namespace {

EffectCurve on_bins(CurveKind kind, const BinScheme& bins, std::vector<double> values,
                    std::optional<std::size_t> k = std::nullopt) {
  EffectCurve c;
  c.kind = kind;
  c.j = bins.variable;
  c.k = k;
  c.grid = bins.midpoints;
  c.values = std::move(values);
  c.counts = bins.counts();
  return c;
}

void check_field(const DerivativeField& f, const BinScheme& bins) {
  if (f.values.size() != bins.row_bin.size())
    throw UsageError("derivative field and bins cover different row counts");
}

}  // namespace

EffectCurve pdp(const Predictor& m, const Dataset& d, std::size_t j, std::span<const double> grid) {
  if (j >= d.cols()) throw UsageError("pdp: variable index out of range");
  if (grid.empty()) throw UsageError("pdp: empty grid");
  const auto col = d.column(j);
  const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
  for (double g : grid)
    if (!(g >= *lo && g <= *hi))
      throw UsageError("pdp: grid point " + format_double(g) + " outside the observed range of '" +
                       d.name(j) + "'");

  Matrix x = d.to_matrix();
  const double n = static_cast<double>(d.rows());
  EffectCurve c;
  c.kind = CurveKind::PD;
  c.j = j;
  c.grid.assign(grid.begin(), grid.end());
  c.values.reserve(grid.size());
  for (double g : grid) {
    for (std::size_t i = 0; i < x.rows(); ++i) x(i, j) = g;
    const std::vector<double> f = m.predict(x);
    double s = 0.0;
    for (double v : f) s += v;
    c.values.push_back(s / n);
  }
  c.counts.assign(grid.size(), 1);
  c.validate();
  return c;
}

EffectCurve pdp(const Predictor& m, const Dataset& d, const BinScheme& bins) {
  EffectCurve c = pdp(m, d, bins.variable, bins.midpoints);
  c.counts = bins.counts();
  return c;
}

EffectCurve marginal(const Predictor& m, const Dataset& d, const BinScheme& bins) {
  const std::vector<double> f = m.predict(d.to_matrix());
  return on_bins(CurveKind::Marginal, bins, bin_means(bins, f));
}

EffectCurve marginal_response(const Dataset& d, const BinScheme& bins) {
  if (!d.has_response()) throw DataError("marginal_response: dataset has no response column");
  return on_bins(CurveKind::Marginal, bins, bin_means(bins, d.response()));
}

EffectCurve ale(const DerivativeField& fj, const BinScheme& bins) {
  check_field(fj, bins);
  if (fj.j != bins.variable) throw UsageError("ale: derivative field is not d/dx_j of the binned variable");
  return on_bins(CurveKind::ALE, bins, accumulate(bins, bin_means(bins, fj.values)));
}

EffectCurve ale(const Predictor& m, const Dataset& d, const BinScheme& bins,
                const DerivativeOptions& options) {
  return ale(partial_derivatives(m, d, bins.variable, options), bins);
}

EffectCurve ace(const DerivativeField& fk, const Dataset& d, const DependenceModel& dep,
                const BinScheme& bins) {
  check_field(fk, bins);
  const std::size_t j = bins.variable;
  const std::size_t k = fk.j;
  if (k == j) throw UsageError("ace: k must differ from j");
  if (dep.anchor() != j) throw UsageError("ace: dependence model anchored elsewhere");
  const auto xj = d.column(j);
  std::vector<double> integrand(fk.values.size());
  for (std::size_t i = 0; i < integrand.size(); ++i)
    integrand[i] = fk.values[i] * dep.derivative(k, xj[i]);
  return on_bins(CurveKind::ACE, bins, accumulate(bins, bin_means(bins, integrand)), k);
}

EffectCurve ace(const Predictor& m, const Dataset& d, std::size_t k, const DependenceModel& dep,
                const BinScheme& bins, const DerivativeOptions& options) {
  return ace(partial_derivatives(m, d, k, options), d, dep, bins);
}

EffectCurve atdev_curve(std::span<const DerivativeField> fields, const Dataset& d,
                        const DependenceModel& dep, const BinScheme& bins) {
  if (fields.size() != d.cols()) throw UsageError("atdev: one derivative field per variable expected");
  const std::size_t j = bins.variable;
  EffectCurve total = ale(fields[j], bins);
  for (std::size_t k = 0; k < d.cols(); ++k) {
    if (k == j) continue;
    const EffectCurve c = ace(fields[k], d, dep, bins);
    for (std::size_t t = 0; t < total.size(); ++t) total.values[t] += c.values[t];
  }
  total.kind = CurveKind::ATDEV;
  return total;
}

EffectCurve atdev_curve(const Predictor& m, const Dataset& d, const DependenceModel& dep,
                        const BinScheme& bins, const DerivativeOptions& options) {
  const auto fields = all_partial_derivatives(m, d, options);
  return atdev_curve(fields, d, dep, bins);
}

EffectCurve le_curve(const DerivativeField& fk, const BinScheme& bins) {
  check_field(fk, bins);
  const bool diag = fk.j == bins.variable;
  return on_bins(diag ? CurveKind::LE : CurveKind::LECross, bins, bin_means(bins, fk.values),
                 diag ? std::nullopt : std::optional<std::size_t>(fk.j));
}

EffectCurve le_curve(const Predictor& m, const Dataset& d, std::size_t k, const BinScheme& bins,
                     const DerivativeOptions& options) {
  return le_curve(partial_derivatives(m, d, k, options), bins);
}

std::string to_string(MatrixKind kind) { return kind == MatrixKind::ATDEV ? "ATDEV" : "LE"; }

MatrixKind parse_matrix_kind(std::string_view s) {
  if (s == "ATDEV" || s == "atdev") return MatrixKind::ATDEV;
  if (s == "LE" || s == "le") return MatrixKind::LE;
  throw UsageError("unknown matrix kind '" + std::string(s) + "'");
}

void EffectMatrix::validate() const {
  if (cells.size() != p * p) throw UsageError("effect matrix: expected p*p cells");
  for (std::size_t j = 0; j < p; ++j) {
    const auto& diag = cell(j, j);
    if (!diag) throw UsageError("effect matrix: missing diagonal cell " + std::to_string(j));
    diag->validate();
    for (std::size_t k = 0; k < p; ++k) {
      const auto& c = cell(k, j);
      if (c && c->grid != diag->grid) throw UsageError("effect matrix: column grids differ");
    }
  }
  if (kind != MatrixKind::ATDEV) return;
  if (totals.size() != p) throw UsageError("effect matrix: one total per column expected");
  for (std::size_t j = 0; j < p; ++j) {
    if (totals[j].grid != cell(j, j)->grid) throw UsageError("effect matrix: total grid differs");
    for (std::size_t t = 0; t < totals[j].size(); ++t) {
      double s = 0.0;
      for (std::size_t k = 0; k < p; ++k)
        if (const auto& c = cell(k, j)) s += c->values[t];
      if (std::abs(s - totals[j].values[t]) > 1e-10)
        throw UsageError("effect matrix: total of column " + std::to_string(j) +
                         " differs from the column sum");
    }
  }
}

EffectMatrix effect_matrix(std::span<const DerivativeField> fields, const Dataset& d,
                           MatrixKind kind, std::span<const DependenceModel> deps,
                           std::span<const BinScheme> bins) {
  const std::size_t p = d.cols();
  if (fields.size() != p || bins.size() != p)
    throw UsageError("effect_matrix: one derivative field and bin scheme per variable expected");
  if (kind == MatrixKind::ATDEV && deps.size() != p)
    throw UsageError("effect_matrix: one dependence model per variable expected");

  EffectMatrix em;
  em.kind = kind;
  em.p = p;
  em.cells.resize(p * p);
  for (std::size_t j = 0; j < p; ++j) {
    if (bins[j].variable != j) throw UsageError("effect_matrix: bins out of column order");
    for (std::size_t k = 0; k < p; ++k) {
      auto& slot = em.cells[k * p + j];
      if (kind == MatrixKind::LE) {
        slot = le_curve(fields[k], bins[j]);
      } else {
        slot = center(k == j ? ale(fields[j], bins[j]) : ace(fields[k], d, deps[j], bins[j]));
      }
    }
    if (kind == MatrixKind::ATDEV) {
      EffectCurve total = *em.cells[j * p + j];
      total.kind = CurveKind::ATDEV;
      for (std::size_t k = 0; k < p; ++k) {
        if (k == j) continue;
        const auto& c = *em.cells[k * p + j];
        for (std::size_t t = 0; t < total.size(); ++t) total.values[t] += c.values[t];
      }
      em.totals.push_back(std::move(total));
    }
  }
  return em;
}

EffectMatrix effect_matrix(const Predictor& m, const Dataset& d, MatrixKind kind,
                           const EffectOptions& options) {
  const auto fields = all_partial_derivatives(m, d, options.derivatives);
  std::vector<BinScheme> bins;
  std::vector<DependenceModel> deps;
  for (std::size_t j = 0; j < d.cols(); ++j) {
    bins.push_back(quantile_bins(d, j, options.bins));
    if (kind == MatrixKind::ATDEV) deps.push_back(fit_dependence(d, j, options.dependence, options.bins));
  }
  return effect_matrix(fields, d, kind, deps, bins);
}

}  // namespace atdev
