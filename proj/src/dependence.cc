#include "atdev/dependence.h"

#include <algorithm>
#include <cmath>

#include "atdev/binning.h"
#include "atdev/error.h"
#include "atdev/stats.h"

namespace atdev {

std::string to_string(DependenceMethod m) {
  return m == DependenceMethod::Linear ? "linear" : "local_linear";
}

DependenceMethod parse_dependence_method(std::string_view s) {
  if (s == "linear") return DependenceMethod::Linear;
  if (s == "local_linear") return DependenceMethod::LocalLinear;
  throw UsageError("unknown dependence method '" + std::string(s) + "'");
}

double DependenceFit::derivative(double xj) const {
  if (const auto* lin = std::get_if<LinearFit>(&fit)) return lin->slope;
  const auto& loc = std::get<LocalLinearFit>(fit);
  const auto it = std::upper_bound(loc.edges.begin(), loc.edges.end(), xj);
  std::size_t b = it == loc.edges.begin() ? 0 : static_cast<std::size_t>(it - loc.edges.begin()) - 1;
  b = std::min(b, loc.slopes.size() - 1);
  return loc.slopes[b];
}

DependenceModel::DependenceModel(std::size_t anchor, DependenceMethod method,
                                 std::vector<DependenceFit> fits)
    : anchor_(anchor), method_(method), fits_(std::move(fits)) {
  if (anchor_ >= fits_.size()) throw UsageError("dependence model: anchor out of range");
}

DependenceModel DependenceModel::independent(std::size_t anchor, std::size_t p) {
  std::vector<DependenceFit> fits(p);
  fits.at(anchor).fit = LinearFit{1.0, 0.0};
  return DependenceModel(anchor, DependenceMethod::Linear, std::move(fits));
}

DependenceModel fit_dependence(const Dataset& d, std::size_t j, DependenceMethod method,
                               std::size_t bins) {
  if (j >= d.cols()) throw UsageError("fit_dependence: anchor index out of range");
  const auto xj = d.column(j);
  const double var_j = stats::variance(xj);
  if (!(var_j > 0.0)) throw DataError("fit_dependence: anchor '" + d.name(j) + "' has zero variance");
  const double mean_j = stats::mean(xj);

  std::vector<DependenceFit> fits(d.cols());
  fits[j].fit = LinearFit{1.0, 0.0};

  if (method == DependenceMethod::Linear) {
    for (std::size_t k = 0; k < d.cols(); ++k) {
      if (k == j) continue;
      const auto xk = d.column(k);
      const double slope = stats::covariance(xj, xk) / var_j;
      const double intercept = stats::mean(xk) - slope * mean_j;
      double rss = 0.0;
      for (std::size_t i = 0; i < xk.size(); ++i) {
        const double e = xk[i] - intercept - slope * xj[i];
        rss += e * e;
      }
      fits[k].fit = LinearFit{slope, intercept};
      fits[k].residual_variance = rss / static_cast<double>(xk.size());
    }
    return DependenceModel(j, method, std::move(fits));
  }

  const BinScheme scheme = quantile_bins(d, j, bins);
  const std::size_t nb = scheme.size();
  if (nb < 2) throw DataError("fit_dependence: local_linear needs at least two anchor bins");
  const std::vector<double> xbar = bin_means(scheme, xj);
  for (std::size_t k = 0; k < d.cols(); ++k) {
    if (k == j) continue;
    const auto xk = d.column(k);
    const std::vector<double> kbar = bin_means(scheme, xk);
    LocalLinearFit loc;
    loc.edges = scheme.edges;
    loc.slopes.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      const std::size_t lo = b == 0 ? 0 : b - 1;
      const std::size_t hi = b + 1 == nb ? nb - 1 : b + 1;
      loc.slopes[b] = (kbar[hi] - kbar[lo]) / (xbar[hi] - xbar[lo]);
    }
    // Pooled within-bin variance of x_k.
    double rss = 0.0;
    for (std::size_t i = 0; i < xk.size(); ++i) {
      const double e = xk[i] - kbar[scheme.row_bin[i]];
      rss += e * e;
    }
    fits[k].fit = std::move(loc);
    fits[k].residual_variance = rss / static_cast<double>(xk.size());
  }
  return DependenceModel(j, method, std::move(fits));
}

CorrelationMatrix corr_matrix(const Dataset& d) {
  const std::size_t p = d.cols();
  if (d.rows() < 2) throw DataError("corr_matrix: need at least two rows");
  std::vector<double> sd(p);
  for (std::size_t j = 0; j < p; ++j) {
    sd[j] = stats::stddev(d.column(j));
    if (!(sd[j] > 0.0)) throw DataError("corr_matrix: column '" + d.name(j) + "' is constant");
  }
  CorrelationMatrix c{d.names(), std::vector<double>(p * p, 0.0)};
  for (std::size_t i = 0; i < p; ++i) {
    c.values[i * p + i] = 1.0;
    for (std::size_t j = i + 1; j < p; ++j) {
      const double r = std::clamp(stats::covariance(d.column(i), d.column(j)) / (sd[i] * sd[j]), -1.0, 1.0);
      c.values[i * p + j] = r;
      c.values[j * p + i] = r;
    }
  }
  return c;
}

}  // namespace atdev
