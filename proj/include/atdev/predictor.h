#pragma once

#include <cstddef>
#include <vector>

#include "atdev/matrix.h"

namespace atdev {

// The regression function f(x) under study. Implementations are immutable
// after construction and safe to call from several threads.
//
// predict() and gradient() validate the input width and that every output is
// finite; backends implement do_predict()/do_gradient().
class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual std::size_t arity() const = 0;
  virtual bool has_analytic_gradient() const { return false; }

  std::vector<double> predict(const Matrix& x) const;

  // N x p matrix of partial derivatives df/dx_j at every row. Throws
  // ModelError when the backend has no analytic gradient.
  Matrix gradient(const Matrix& x) const;

 protected:
  virtual std::vector<double> do_predict(const Matrix& x) const = 0;
  virtual Matrix do_gradient(const Matrix& x) const;
};

}  // namespace atdev
