#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "atdev/binning.h"
#include "atdev/curve.h"
#include "atdev/dataset.h"
#include "atdev/dependence.h"
#include "atdev/gradients.h"
#include "atdev/predictor.h"

namespace atdev {

// Cumulative midpoint integration over the bins: the value at midpoint t is
// sum_{b<t} means[b] * width_b + means[t] * width_t / 2, i.e. the integral of
// the piecewise-constant integrand from the lower edge to the midpoint.
std::vector<double> accumulate(const BinScheme& bins, std::span<const double> means);

// Average prediction with x_j overwritten by each grid value at every row
// (the full extrapolating sweep). Grid points must lie in [min, max] of x_j.
// Every grid point gets weight 1.
EffectCurve pdp(const Predictor& m, const Dataset& d, std::size_t j, std::span<const double> grid);
// Same, on the bin midpoints with bin counts as weights.
EffectCurve pdp(const Predictor& m, const Dataset& d, const BinScheme& bins);

// Per-bin mean of the predictions at the observed rows.
EffectCurve marginal(const Predictor& m, const Dataset& d, const BinScheme& bins);
// Per-bin mean of the observed response; requires a response column.
EffectCurve marginal_response(const Dataset& d, const BinScheme& bins);

// Accumulated own effect of x_j from the field df/dx_j, uncentered.
EffectCurve ale(const DerivativeField& fj, const BinScheme& bins);
EffectCurve ale(const Predictor& m, const Dataset& d, const BinScheme& bins,
                const DerivativeOptions& options = {});

// Accumulated effect of x_j (bins.variable) carried through x_k: per-bin mean
// of df/dx_k * m_k^1(x_j), integrated like ale.
EffectCurve ace(const DerivativeField& fk, const Dataset& d, const DependenceModel& dep,
                const BinScheme& bins);
EffectCurve ace(const Predictor& m, const Dataset& d, std::size_t k, const DependenceModel& dep,
                const BinScheme& bins, const DerivativeOptions& options = {});

// ale + sum of every ace, pointwise; `fields` holds one DerivativeField per
// variable.
EffectCurve atdev_curve(std::span<const DerivativeField> fields, const Dataset& d,
                        const DependenceModel& dep, const BinScheme& bins);
EffectCurve atdev_curve(const Predictor& m, const Dataset& d, const DependenceModel& dep,
                        const BinScheme& bins, const DerivativeOptions& options = {});

// Per-bin mean of df/dx_k over the bins of x_j. No integration. Kind is LE
// when k == j and LECross otherwise.
EffectCurve le_curve(const DerivativeField& fk, const BinScheme& bins);
EffectCurve le_curve(const Predictor& m, const Dataset& d, std::size_t k, const BinScheme& bins,
                     const DerivativeOptions& options = {});

enum class MatrixKind { ATDEV, LE };

std::string to_string(MatrixKind kind);
MatrixKind parse_matrix_kind(std::string_view s);

// p x p grid of curves. Cell (k, j) sits in row k, column j and is plotted
// against x_j: the diagonal holds ALE (ATDEV kind) or LE, the off-diagonal
// cells ACE of x_j through x_k or the cross local effect of x_k on the x_j
// bins. Every column shares the bins of its variable.
struct EffectMatrix {
  MatrixKind kind = MatrixKind::ATDEV;
  std::size_t p = 0;
  std::vector<std::optional<EffectCurve>> cells;  // row-major
  std::vector<EffectCurve> totals;                // ATDEV kind: column sums, one per j

  const std::optional<EffectCurve>& cell(std::size_t k, std::size_t j) const {
    return cells.at(k * p + j);
  }

  // Throws UsageError on a missing diagonal, mismatched column grids or, for
  // ATDEV kind, totals that differ from the column sums by more than 1e-10.
  void validate() const;

  bool operator==(const EffectMatrix&) const = default;
};

struct EffectOptions {
  std::size_t bins = 100;
  DependenceMethod dependence = DependenceMethod::Linear;
  DerivativeOptions derivatives;
};

// ATDEV cells are centered and their column sums stored as totals. LE cells
// are left on the derivative scale (uncentered), since their level is the
// quantity of interest.
EffectMatrix effect_matrix(std::span<const DerivativeField> fields, const Dataset& d,
                           MatrixKind kind, std::span<const DependenceModel> deps,
                           std::span<const BinScheme> bins);
EffectMatrix effect_matrix(const Predictor& m, const Dataset& d, MatrixKind kind,
                           const EffectOptions& options = {});

}  // namespace atdev
