#include "atdev/stats.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace atdev::stats {

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.empty()) return 0.0;
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

double covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("covariance: length mismatch");
  if (x.empty()) return 0.0;
  const double mx = mean(x);
  const double my = mean(y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return s / static_cast<double>(x.size());
}

double weighted_mean(std::span<const double> x, std::span<const std::size_t> w) {
  if (x.size() != w.size()) throw std::invalid_argument("weighted_mean: length mismatch");
  double s = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x[i] * static_cast<double>(w[i]);
    total += static_cast<double>(w[i]);
  }
  return total > 0.0 ? s / total : 0.0;
}

double weighted_variance(std::span<const double> x, std::span<const std::size_t> w) {
  const double m = weighted_mean(x, w);
  double s = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += (x[i] - m) * (x[i] - m) * static_cast<double>(w[i]);
    total += static_cast<double>(w[i]);
  }
  return total > 0.0 ? s / total : 0.0;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty range");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<double> polyfit(std::span<const double> x, std::span<const double> y,
                            std::size_t degree) {
  if (x.size() != y.size()) throw std::invalid_argument("polyfit: length mismatch");
  const std::size_t m = degree + 1;
  if (x.size() < m) throw std::invalid_argument("polyfit: too few points");

  // Normal equations, solved by Gaussian elimination with partial pivoting.
  std::vector<double> a(m * (m + 1), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<double> pw(2 * m - 1, 1.0);
    for (std::size_t d = 1; d < pw.size(); ++d) pw[d] = pw[d - 1] * x[i];
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) a[r * (m + 1) + c] += pw[r + c];
      a[r * (m + 1) + m] += pw[r] * y[i];
    }
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r)
      if (std::abs(a[r * (m + 1) + col]) > std::abs(a[piv * (m + 1) + col])) piv = r;
    if (a[piv * (m + 1) + col] == 0.0) throw std::invalid_argument("polyfit: singular design");
    for (std::size_t c = 0; c <= m; ++c) std::swap(a[col * (m + 1) + c], a[piv * (m + 1) + c]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = a[r * (m + 1) + col] / a[col * (m + 1) + col];
      for (std::size_t c = col; c <= m; ++c) a[r * (m + 1) + c] -= f * a[col * (m + 1) + c];
    }
  }
  std::vector<double> coef(m);
  for (std::size_t r = 0; r < m; ++r) coef[r] = a[r * (m + 1) + m] / a[r * (m + 1) + r];
  return coef;
}

}  // namespace atdev::stats
