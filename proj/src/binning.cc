#include "atdev/binning.h"

#include <algorithm>
#include <string>

#include "atdev/error.h"
#include "atdev/stats.h"

namespace atdev {

std::vector<std::size_t> BinScheme::counts() const {
  std::vector<std::size_t> c(members.size());
  for (std::size_t b = 0; b < members.size(); ++b) c[b] = members[b].size();
  return c;
}

std::vector<double> BinScheme::widths() const {
  std::vector<double> w(size());
  for (std::size_t b = 0; b < size(); ++b) w[b] = edges[b + 1] - edges[b];
  return w;
}

std::size_t BinScheme::locate(double x) const {
  const auto it = std::upper_bound(edges.begin(), edges.end(), x);
  if (it == edges.begin()) return 0;
  const auto b = static_cast<std::size_t>(it - edges.begin()) - 1;
  return std::min(b, edges.size() - 2);
}

namespace {

void assign_members(const Dataset& d, BinScheme& s) {
  const auto x = d.column(s.variable);
  const std::size_t k = s.edges.size() - 1;
  s.members.assign(k, {});
  s.row_bin.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t b = s.locate(x[i]);
    s.row_bin[i] = b;
    s.members[b].push_back(i);
  }
}

void finalize(const Dataset& d, BinScheme& s) {
  assign_members(d, s);
  // Merge empty bins into their right neighbour by dropping the shared edge.
  // The last bin holds the maximum and is never empty.
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t b = 0; b + 1 < s.members.size(); ++b) {
      if (s.members[b].empty()) {
        s.edges.erase(s.edges.begin() + static_cast<std::ptrdiff_t>(b) + 1);
        assign_members(d, s);
        merged = true;
        break;
      }
    }
  }
  s.midpoints.resize(s.edges.size() - 1);
  for (std::size_t b = 0; b + 1 < s.edges.size(); ++b)
    s.midpoints[b] = 0.5 * (s.edges[b] + s.edges[b + 1]);
}

}  // namespace

BinScheme quantile_bins(const Dataset& d, std::size_t j, std::size_t K) {
  if (K < 2) throw UsageError("quantile_bins: K must be >= 2, got " + std::to_string(K));
  if (j >= d.cols()) throw UsageError("quantile_bins: variable index out of range");
  std::vector<double> sorted(d.column(j).begin(), d.column(j).end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back())
    throw DataError("degenerate variable '" + d.name(j) + "': constant column");

  BinScheme s;
  s.variable = j;
  s.edges.reserve(K + 1);
  s.edges.push_back(sorted.front());
  for (std::size_t i = 1; i < K; ++i) {
    const double e = stats::quantile_sorted(sorted, static_cast<double>(i) / static_cast<double>(K));
    if (e > s.edges.back()) s.edges.push_back(e);
  }
  if (sorted.back() > s.edges.back()) {
    s.edges.push_back(sorted.back());
  } else {
    s.edges.back() = sorted.back();
  }
  finalize(d, s);
  return s;
}

BinScheme bins_from_edges(const Dataset& d, std::size_t j, std::vector<double> edges) {
  if (j >= d.cols()) throw UsageError("bins_from_edges: variable index out of range");
  if (edges.size() < 2) throw UsageError("bins_from_edges: need at least two edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw UsageError("bins_from_edges: edges must be strictly increasing");
  BinScheme s;
  s.variable = j;
  s.edges = std::move(edges);
  finalize(d, s);
  return s;
}

std::vector<double> bin_means(const BinScheme& bins, std::span<const double> values) {
  if (values.size() != bins.row_bin.size()) throw UsageError("bin_means: one value per row expected");
  std::vector<double> sum(bins.size(), 0.0);
  std::vector<std::size_t> n(bins.size(), 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum[bins.row_bin[i]] += values[i];
    ++n[bins.row_bin[i]];
  }
  for (std::size_t b = 0; b < sum.size(); ++b) sum[b] /= static_cast<double>(n[b]);
  return sum;
}

}  // namespace atdev
