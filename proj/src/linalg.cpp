#include "sbnn/linalg.hpp"

#include <cmath>

namespace sbnn {

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: dimension mismatch " + shape_of(a) + " vs " +
                     shape_of(b));
  }
  Matrix out = a * b;
  require_finite(out, "matmul");
  return out;
}

Matrix least_squares(const Matrix& a, const Matrix& y) {
  if (y.cols() != 1) {
    throw ShapeError("least_squares: y must be a single column, got " +
                     shape_of(y));
  }
  if (a.rows() != y.rows()) {
    throw ShapeError("least_squares: row mismatch " + shape_of(a) + " vs " +
                     shape_of(y));
  }
  require_finite(a, "least_squares (design matrix)");
  require_finite(y, "least_squares (targets)");

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  cod.setThreshold(kRankThreshold);
  Matrix w = cod.solve(y);
  require_finite(w, "least_squares");
  return w;
}

Matrix finite_diff_gradient(const std::function<double(const Matrix&)>& f,
                            const Matrix& at, double step) {
  if (!(step > 0.0)) {
    throw ConfigError("finite_diff_gradient: step must be positive");
  }
  Matrix grad(at.rows(), at.cols());
  Matrix x = at;
  for (Index i = 0; i < at.rows(); ++i) {
    for (Index j = 0; j < at.cols(); ++j) {
      const double saved = x(i, j);
      x(i, j) = saved + step;
      const double fp = f(x);
      x(i, j) = saved - step;
      const double fm = f(x);
      x(i, j) = saved;
      if (!std::isfinite(fp) || !std::isfinite(fm)) {
        throw NumericError("finite_diff_gradient: non-finite f around entry (" +
                           std::to_string(i) + "," + std::to_string(j) + ")");
      }
      grad(i, j) = (fp - fm) / (2.0 * step);
    }
  }
  return grad;
}

}  // namespace sbnn
