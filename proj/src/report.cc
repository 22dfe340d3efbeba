#include "atdev/report.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "atdev/error.h"
#include "atdev/rng.h"

namespace atdev {

namespace {

std::vector<double> normalize(const std::vector<double>& v) {
  double mx = 0.0;
  for (double x : v) mx = std::max(mx, std::abs(x));
  std::vector<double> out(v.size(), 0.0);
  if (mx > 0.0)
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / mx;
  return out;
}

}  // namespace

void HeatMapData::validate() const {
  const std::size_t p = names.size();
  if (values.size() != p * p || normalized.size() != p * p)
    throw UsageError("heat map: expected p*p values");
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const double v = values[i * p + j];
      if (scale == HeatScale::Nonnegative && v < 0.0)
        throw UsageError("heat map: negative entry in a nonnegative map");
      if (scale == HeatScale::Signed && (v < -1.0 || v > 1.0 || v != values[j * p + i]))
        throw UsageError("heat map: signed map must be symmetric within [-1, 1]");
    }
  }
}

HeatMapData correlation_heatmap(const CorrelationMatrix& c) {
  HeatMapData h{"correlation", c.names, c.values, normalize(c.values), HeatScale::Signed};
  h.validate();
  return h;
}

HeatMapData importance_heatmap(const ImportanceReport& r) {
  HeatMapData h{"atdev_components", r.names, r.v, normalize(r.v), HeatScale::Nonnegative};
  h.validate();
  return h;
}

std::vector<std::size_t> BarData::ranking() const {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return idx;
}

Histogram histogram(std::string variable, std::span<const double> values, std::size_t bins) {
  if (values.empty()) throw DataError("histogram: no values");
  if (bins == 0) throw UsageError("histogram: bins must be >= 1");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it, hi = *hi_it;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
    bins = 1;
  }
  Histogram h{std::move(variable), std::vector<double>(bins + 1), std::vector<std::size_t>(bins, 0)};
  const double w = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = lo + w * static_cast<double>(b);
  h.edges.back() = hi;
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / w);
    h.counts[std::min(b, bins - 1)] += 1;
  }
  return h;
}

std::vector<std::size_t> subsample_rows(std::size_t n, std::size_t cap, std::uint64_t seed) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  if (n <= cap) return rows;
  Rng rng(seed);
  rng.shuffle(rows.begin(), rows.end());
  rows.resize(cap);
  std::sort(rows.begin(), rows.end());
  return rows;
}

ScatterSample scatter_sample(const DerivativeField& fk, std::span<const double> xj, std::size_t j,
                             std::span<const std::size_t> rows) {
  ScatterSample s{fk.j, j, {}, {}};
  s.x.reserve(rows.size());
  s.derivative.reserve(rows.size());
  for (std::size_t r : rows) {
    s.x.push_back(xj[r]);
    s.derivative.push_back(fk.values[r]);
  }
  return s;
}

}  // namespace atdev
