#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "atdev/dataset.h"

namespace atdev {

// Partition of one variable's observed range into K half-open bins
// [e_i, e_{i+1}), the last one closed. edges.front() is the observed minimum
// (the accumulation lower bound z_{j,0}) and edges.back() the maximum.
struct BinScheme {
  std::size_t variable = 0;
  std::vector<double> edges;
  std::vector<double> midpoints;
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::size_t> row_bin;  // bin of every row, same order as the dataset

  std::size_t size() const { return midpoints.size(); }
  std::vector<std::size_t> counts() const;
  std::vector<double> widths() const;

  // Bin containing x under the half-open rule; values outside the range are
  // clamped to the first/last bin.
  std::size_t locate(double x) const;
};

// Equal-count bins with edges at the empirical i/K quantiles of x_j. Duplicate
// edges are merged and any empty bin is merged into its right neighbour, so the
// result may have fewer than K bins. Throws DataError on a constant column and
// UsageError when K < 2.
BinScheme quantile_bins(const Dataset& d, std::size_t j, std::size_t K = 100);

// Builds a scheme from explicit edges (strictly increasing, covering the data).
BinScheme bins_from_edges(const Dataset& d, std::size_t j, std::vector<double> edges);

// Mean of `values` (one per row) within each bin.
std::vector<double> bin_means(const BinScheme& bins, std::span<const double> values);

}  // namespace atdev
