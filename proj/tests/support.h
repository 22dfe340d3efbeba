#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <unistd.h>

#include "atdev/binning.h"
#include "atdev/curve.h"
#include "atdev/dataset.h"
#include "atdev/rng.h"
#include "atdev/stats.h"

namespace test {

inline std::vector<double> uniform_column(atdev::Rng& rng, std::size_t n, double lo = -1.0,
                                          double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

// Columns named x1..xp.
inline atdev::Dataset make_dataset(std::vector<std::vector<double>> cols) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < cols.size(); ++j) names.push_back("x" + std::to_string(j + 1));
  return atdev::Dataset(std::move(names), std::move(cols));
}

inline atdev::Dataset random_dataset(atdev::Rng& rng, std::size_t n, std::size_t p) {
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < p; ++j) cols.push_back(uniform_column(rng, n));
  return make_dataset(std::move(cols));
}

// Runs `body` for `cases` independently seeded generators.
inline void for_all(std::size_t cases, std::uint64_t seed, const std::function<void(atdev::Rng&)>& body) {
  for (std::size_t c = 0; c < cases; ++c) {
    atdev::Rng rng(seed * 1000003 + c);
    body(rng);
  }
}

// Grid indices whose point lies inside the central `mass` of x_j.
inline std::vector<std::size_t> inner_support(const atdev::EffectCurve& c, std::span<const double> xj,
                                              double mass = 0.9) {
  std::vector<double> s(xj.begin(), xj.end());
  std::sort(s.begin(), s.end());
  const double lo = atdev::stats::quantile_sorted(s, (1 - mass) / 2);
  const double hi = atdev::stats::quantile_sorted(s, 1 - (1 - mass) / 2);
  std::vector<std::size_t> idx;
  for (std::size_t t = 0; t < c.size(); ++t)
    if (c.grid[t] >= lo && c.grid[t] <= hi) idx.push_back(t);
  return idx;
}

inline std::vector<std::size_t> all_points(const atdev::EffectCurve& c) {
  std::vector<std::size_t> idx(c.size());
  for (std::size_t t = 0; t < c.size(); ++t) idx[t] = t;
  return idx;
}

inline double max_gap(const atdev::EffectCurve& a, const atdev::EffectCurve& b,
                      std::span<const std::size_t> idx) {
  double m = 0.0;
  for (std::size_t t : idx) m = std::max(m, std::abs(a.values[t] - b.values[t]));
  return m;
}

inline double max_abs(const atdev::EffectCurve& a) {
  double m = 0.0;
  for (double v : a.values) m = std::max(m, std::abs(v));
  return m;
}

inline double range(const atdev::EffectCurve& a) {
  const auto [lo, hi] = std::minmax_element(a.values.begin(), a.values.end());
  return *hi - *lo;
}

// Least-squares polynomial through the selected curve points, increasing powers.
inline std::vector<double> fit_curve(const atdev::EffectCurve& c, std::span<const std::size_t> idx,
                                     std::size_t degree) {
  std::vector<double> x, y;
  for (std::size_t t : idx) {
    x.push_back(c.grid[t]);
    y.push_back(c.values[t]);
  }
  return atdev::stats::polyfit(x, y, degree);
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("atdev_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

}  // namespace test
