#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "atdev/dataset.h"
#include "atdev/predictor.h"

namespace atdev {

// Single hidden layer, tanh activation, linear output:
//   f(x) = b2 + sum_h w2[h] * tanh(b1[h] + sum_i w1[h*p + i] * x[i])
struct MlpWeights {
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  std::vector<double> w1;  // hidden x inputs, row-major
  std::vector<double> b1;
  std::vector<double> w2;
  double b2 = 0.0;

  bool operator==(const MlpWeights&) const = default;
};

class MlpModel final : public Predictor {
 public:
  explicit MlpModel(MlpWeights weights);

  const MlpWeights& weights() const { return w_; }

  std::size_t arity() const override { return w_.inputs; }
  bool has_analytic_gradient() const override { return true; }

 protected:
  std::vector<double> do_predict(const Matrix& x) const override;
  // df/dx = W1^T diag(sech^2(W1 x + b1)) w2
  Matrix do_gradient(const Matrix& x) const override;

 private:
  MlpWeights w_;
};

struct MlpOptions {
  std::size_t hidden = 40;
  std::size_t max_epochs = 400;
  std::size_t patience = 20;
  std::size_t batch_size = 32;
  double learning_rate = 2e-3;
  std::uint64_t seed = 1;
};

struct FitReport {
  double train_mse = 0.0;
  double valid_mse = 0.0;
  double valid_r2 = 0.0;
  std::size_t epochs_run = 0;
  std::size_t best_epoch = 0;
  std::vector<double> train_history;  // per-epoch MSE, original response units
  std::vector<double> valid_history;
};

struct MlpFit {
  MlpModel model;
  FitReport report;
};

// Mini-batch Adam on squared error with inputs and response standardised
// internally (the scaling is folded back into the returned weights). Stops after
// `patience` epochs without a validation improvement and returns the weights of
// the best validation epoch. Deterministic for a fixed seed.
//
// Throws NumericalError if the loss becomes non-finite.
MlpFit fit_mlp(const Dataset& train, const Dataset& valid, const MlpOptions& options = {});

}  // namespace atdev
