#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace atdev {

enum class CurveKind { PD, Marginal, ALE, ACE, ATDEV, LE, LECross };

std::string to_string(CurveKind kind);
CurveKind parse_curve_kind(std::string_view s);

// One sampled 1-D effect function. `j` is the plotted (column) variable; `k`
// is the row variable for ACE and LECross cells.
struct EffectCurve {
  CurveKind kind = CurveKind::PD;
  std::size_t j = 0;
  std::optional<std::size_t> k;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<std::size_t> counts;
  bool centered = false;

  std::size_t size() const { return grid.size(); }

  // Throws UsageError if lengths differ or the grid is not strictly increasing.
  void validate() const;

  bool operator==(const EffectCurve&) const = default;
};

// Subtracts the count-weighted mean, i.e. the mean of the curve under the
// empirical distribution of x_j.
EffectCurve center(EffectCurve curve);

double weighted_mean(const EffectCurve& c);
double weighted_variance(const EffectCurve& c);

}  // namespace atdev
