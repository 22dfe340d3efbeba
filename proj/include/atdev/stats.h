#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace atdev::stats {

double mean(std::span<const double> x);

// Population (divide-by-N) variance.
double variance(std::span<const double> x);
double stddev(std::span<const double> x);
double covariance(std::span<const double> x, std::span<const double> y);

double weighted_mean(std::span<const double> x, std::span<const std::size_t> w);
double weighted_variance(std::span<const double> x, std::span<const std::size_t> w);

// Type-7 sample quantile (linear interpolation between order statistics)
// of an already sorted range.
double quantile_sorted(std::span<const double> sorted, double q);

// Ordinary least-squares fit of y on [1, x, x^2, ..., x^degree]; returns the
// coefficients in increasing power order.
std::vector<double> polyfit(std::span<const double> x, std::span<const double> y,
                            std::size_t degree);

}  // namespace atdev::stats
