#include "atdev/mlp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "atdev/error.h"
#include "atdev/rng.h"
#include "atdev/stats.h"

namespace atdev {

MlpModel::MlpModel(MlpWeights weights) : w_(std::move(weights)) {
  const std::size_t p = w_.inputs;
  const std::size_t h = w_.hidden;
  if (p == 0 || h == 0) throw ModelError("mlp: inputs and hidden width must be positive");
  if (w_.w1.size() != h * p || w_.b1.size() != h || w_.w2.size() != h)
    throw ModelError("mlp: weight shapes inconsistent with inputs/hidden");
  auto finite = [](const std::vector<double>& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  if (!finite(w_.w1) || !finite(w_.b1) || !finite(w_.w2) || !std::isfinite(w_.b2))
    throw ModelError("mlp: non-finite weight");
}

std::vector<double> MlpModel::do_predict(const Matrix& x) const {
  const std::size_t p = w_.inputs;
  std::vector<double> y(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto row = x.row(r);
    double out = w_.b2;
    for (std::size_t h = 0; h < w_.hidden; ++h) {
      double z = w_.b1[h];
      const double* wr = &w_.w1[h * p];
      for (std::size_t i = 0; i < p; ++i) z += wr[i] * row[i];
      out += w_.w2[h] * std::tanh(z);
    }
    y[r] = out;
  }
  return y;
}

Matrix MlpModel::do_gradient(const Matrix& x) const {
  const std::size_t p = w_.inputs;
  Matrix g(x.rows(), p);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto row = x.row(r);
    auto out = g.row(r);
    for (std::size_t h = 0; h < w_.hidden; ++h) {
      double z = w_.b1[h];
      const double* wr = &w_.w1[h * p];
      for (std::size_t i = 0; i < p; ++i) z += wr[i] * row[i];
      const double a = std::tanh(z);
      const double s = w_.w2[h] * (1.0 - a * a);
      for (std::size_t i = 0; i < p; ++i) out[i] += s * wr[i];
    }
  }
  return g;
}

namespace {

struct Scaling {
  std::vector<double> x_mean, x_scale;
  double y_mean = 0.0, y_scale = 1.0;
};

struct Adam {
  std::vector<double> m, v;
  double b1t = 1.0, b2t = 1.0;
  explicit Adam(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
  void step(std::vector<double>& params, const std::vector<double>& grad, double lr) {
    constexpr double kB1 = 0.9, kB2 = 0.999, kEps = 1e-8;
    b1t *= kB1;
    b2t *= kB2;
    for (std::size_t i = 0; i < params.size(); ++i) {
      m[i] = kB1 * m[i] + (1 - kB1) * grad[i];
      v[i] = kB2 * v[i] + (1 - kB2) * grad[i] * grad[i];
      const double mh = m[i] / (1 - b1t);
      const double vh = v[i] / (1 - b2t);
      params[i] -= lr * mh / (std::sqrt(vh) + kEps);
    }
  }
};

// Flat parameter vector layout: [w1 (H*p) | b1 (H) | w2 (H) | b2].
MlpWeights unpack(const std::vector<double>& theta, std::size_t p, std::size_t h) {
  MlpWeights w;
  w.inputs = p;
  w.hidden = h;
  w.w1.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(h * p));
  w.b1.assign(theta.begin() + static_cast<std::ptrdiff_t>(h * p),
              theta.begin() + static_cast<std::ptrdiff_t>(h * p + h));
  w.w2.assign(theta.begin() + static_cast<std::ptrdiff_t>(h * p + h),
              theta.begin() + static_cast<std::ptrdiff_t>(h * p + 2 * h));
  w.b2 = theta.back();
  return w;
}

// Maps weights trained on standardised data back to original units.
MlpWeights unscale(MlpWeights w, const Scaling& s) {
  const std::size_t p = w.inputs;
  for (std::size_t h = 0; h < w.hidden; ++h) {
    for (std::size_t i = 0; i < p; ++i) {
      w.w1[h * p + i] /= s.x_scale[i];
      w.b1[h] -= w.w1[h * p + i] * s.x_mean[i];
    }
    w.w2[h] *= s.y_scale;
  }
  w.b2 = w.b2 * s.y_scale + s.y_mean;
  return w;
}

double mse(const std::vector<double>& pred, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += (pred[i] - y[i]) * (pred[i] - y[i]);
  return s / static_cast<double>(y.size());
}

}  // namespace

MlpFit fit_mlp(const Dataset& train, const Dataset& valid, const MlpOptions& opt) {
  if (!train.has_response() || !valid.has_response())
    throw UsageError("fit_mlp: training and validation data need a response column");
  if (train.cols() != valid.cols()) throw UsageError("fit_mlp: train/valid column counts differ");
  if (opt.hidden == 0 || opt.batch_size == 0 || opt.max_epochs == 0)
    throw UsageError("fit_mlp: hidden width, batch size and epochs must be positive");

  const std::size_t p = train.cols();
  const std::size_t H = opt.hidden;
  const std::size_t n = train.rows();

  Scaling sc;
  for (std::size_t i = 0; i < p; ++i) {
    sc.x_mean.push_back(stats::mean(train.column(i)));
    const double sd = stats::stddev(train.column(i));
    sc.x_scale.push_back(sd > 0.0 ? sd : 1.0);
  }
  sc.y_mean = stats::mean(train.response());
  const double ysd = stats::stddev(train.response());
  sc.y_scale = ysd > 0.0 ? ysd : 1.0;

  Matrix xs(n, p);
  std::vector<double> ys(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < p; ++i) xs(r, i) = (train.at(r, i) - sc.x_mean[i]) / sc.x_scale[i];
    ys[r] = (train.response()[r] - sc.y_mean) / sc.y_scale;
  }

  Rng rng(opt.seed);
  std::vector<double> theta(H * p + 2 * H + 1, 0.0);
  const double w1_sd = 1.0 / std::sqrt(static_cast<double>(p));
  // A constant target is fitted exactly by a zero output layer, which is then a
  // fixed point of the updates.
  const double w2_sd = ysd > 0.0 ? 1.0 / std::sqrt(static_cast<double>(H)) : 0.0;
  for (std::size_t i = 0; i < H * p; ++i) theta[i] = rng.normal(0.0, w1_sd);
  for (std::size_t h = 0; h < H; ++h) theta[H * p + H + h] = rng.normal(0.0, w2_sd);

  Adam adam(theta.size());
  std::vector<double> grad(theta.size());
  std::vector<double> a(H);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  const Matrix x_train = train.to_matrix();
  const Matrix x_valid = valid.to_matrix();

  FitReport report;
  std::vector<double> best_theta = theta;
  double best_valid = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= opt.max_epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    for (std::size_t start = 0; start < n; start += opt.batch_size) {
      const std::size_t stop = std::min(n, start + opt.batch_size);
      std::fill(grad.begin(), grad.end(), 0.0);
      const double inv = 1.0 / static_cast<double>(stop - start);
      for (std::size_t b = start; b < stop; ++b) {
        const std::size_t r = order[b];
        const auto x = xs.row(r);
        double out = theta.back();
        for (std::size_t h = 0; h < H; ++h) {
          double z = theta[H * p + h];
          const double* wr = &theta[h * p];
          for (std::size_t i = 0; i < p; ++i) z += wr[i] * x[i];
          a[h] = std::tanh(z);
          out += theta[H * p + H + h] * a[h];
        }
        const double err = 2.0 * (out - ys[r]) * inv;
        grad.back() += err;
        for (std::size_t h = 0; h < H; ++h) {
          grad[H * p + H + h] += err * a[h];
          const double dz = err * theta[H * p + H + h] * (1.0 - a[h] * a[h]);
          grad[H * p + h] += dz;
          double* gr = &grad[h * p];
          for (std::size_t i = 0; i < p; ++i) gr[i] += dz * x[i];
        }
      }
      adam.step(theta, grad, opt.learning_rate);
    }

    const MlpModel current(unscale(unpack(theta, p, H), sc));
    double train_mse = 0.0;
    double valid_mse = 0.0;
    try {
      train_mse = mse(current.predict(x_train), train.response());
      valid_mse = mse(current.predict(x_valid), valid.response());
    } catch (const NumericalError&) {
      train_mse = std::numeric_limits<double>::quiet_NaN();
    }
    if (!std::isfinite(train_mse) || !std::isfinite(valid_mse))
      throw NumericalError("fit_mlp: loss diverged at epoch " + std::to_string(epoch) +
                           "; last finite epoch " + std::to_string(epoch - 1));
    report.train_history.push_back(train_mse);
    report.valid_history.push_back(valid_mse);
    report.epochs_run = epoch;

    if (valid_mse < best_valid) {
      best_valid = valid_mse;
      best_theta = theta;
      report.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= opt.patience) {
      break;
    }
  }

  MlpModel model(unscale(unpack(best_theta, p, H), sc));
  report.train_mse = report.train_history[report.best_epoch - 1];
  report.valid_mse = best_valid;
  const double vy = stats::variance(valid.response());
  report.valid_r2 = vy > 0.0 ? 1.0 - best_valid / vy : (best_valid == 0.0 ? 1.0 : 0.0);
  return MlpFit{std::move(model), std::move(report)};
}

}  // namespace atdev
