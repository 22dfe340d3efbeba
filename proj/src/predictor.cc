#include "atdev/predictor.h"

#include <cmath>
#include <string>

#include "atdev/error.h"

namespace atdev {

namespace {
void check_width(const Matrix& x, std::size_t p) {
  if (x.cols() != p)
    throw UsageError("predictor expects " + std::to_string(p) + " columns, got " +
                     std::to_string(x.cols()));
}
}  // namespace

std::vector<double> Predictor::predict(const Matrix& x) const {
  check_width(x, arity());
  std::vector<double> y = do_predict(x);
  if (y.size() != x.rows())
    throw ModelError("predictor returned " + std::to_string(y.size()) + " values for " +
                     std::to_string(x.rows()) + " rows");
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!std::isfinite(y[i])) throw NumericalError("non-finite prediction at row " + std::to_string(i));
  return y;
}

Matrix Predictor::gradient(const Matrix& x) const {
  check_width(x, arity());
  Matrix g = do_gradient(x);
  if (g.rows() != x.rows() || g.cols() != x.cols())
    throw ModelError("gradient has wrong shape");
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (double v : g.row(i))
      if (!std::isfinite(v)) throw NumericalError("non-finite gradient at row " + std::to_string(i));
  return g;
}

Matrix Predictor::do_gradient(const Matrix&) const {
  throw ModelError("backend has no analytic gradient");
}

}  // namespace atdev
