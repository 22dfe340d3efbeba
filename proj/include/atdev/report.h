#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "atdev/curve.h"
#include "atdev/dependence.h"
#include "atdev/gradients.h"
#include "atdev/importance.h"

namespace atdev {

enum class HeatScale { Signed, Nonnegative };

// p x p heat map. Signed maps (correlations) are symmetric with entries in
// [-1, 1]; nonnegative maps (ATDEV components) may be asymmetric.
// `normalized` holds values / max|value| (all zeros when the max is zero).
struct HeatMapData {
  std::string title;
  std::vector<std::string> names;
  std::vector<double> values;  // row-major
  std::vector<double> normalized;
  HeatScale scale = HeatScale::Nonnegative;

  std::size_t size() const { return names.size(); }
  void validate() const;

  bool operator==(const HeatMapData&) const = default;
};

HeatMapData correlation_heatmap(const CorrelationMatrix& c);
HeatMapData importance_heatmap(const ImportanceReport& r);

struct BarData {
  std::string title;
  std::vector<std::string> names;
  std::vector<double> values;

  // Indices sorted by decreasing value, ties by index.
  std::vector<std::size_t> ranking() const;

  bool operator==(const BarData&) const = default;
};

struct Histogram {
  std::string variable;
  std::vector<double> edges;  // bins + 1 equal-width edges over [min, max]
  std::vector<std::size_t> counts;

  bool operator==(const Histogram&) const = default;
};

// Equal-width histogram; a constant sample gets one bin of width 1 around it.
Histogram histogram(std::string variable, std::span<const double> values, std::size_t bins = 50);

// Raw (x_j, df/dx_k) pairs behind one LE matrix cell, subsampled to at most
// `cap` rows chosen without replacement by a seeded shuffle, kept in row order.
struct ScatterSample {
  std::size_t k = 0;
  std::size_t j = 0;
  std::vector<double> x;
  std::vector<double> derivative;

  bool operator==(const ScatterSample&) const = default;
};

std::vector<std::size_t> subsample_rows(std::size_t n, std::size_t cap, std::uint64_t seed);
ScatterSample scatter_sample(const DerivativeField& fk, std::span<const double> xj,
                             std::size_t j, std::span<const std::size_t> rows);

// Curves of one variable meant to be drawn on shared axes, e.g. centered
// ATDEV with centered marginal, or centered PD, marginal and ALE.
struct Overlay {
  std::string variable;
  std::string group;
  std::vector<EffectCurve> curves;

  bool operator==(const Overlay&) const = default;
};

}  // namespace atdev
