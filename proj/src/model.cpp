#include "sbnn/model.hpp"

#include <cmath>

namespace sbnn {

NetworkParams init_params(Index d, Index h, std::uint64_t seed,
                          bool init_w2) {
  if (d < 1 || h < 1) {
    throw ConfigError("init_params: need d >= 1 and h >= 1");
  }
  Rng rng(seed);
  const double bound = std::sqrt(6.0 / static_cast<double>(d + h));
  NetworkParams p;
  p.d = d;
  p.h = h;
  p.w1 = Matrix::Zero(d + 1, h);
  for (Index r = 0; r < d; ++r) {
    for (Index c = 0; c < h; ++c) {
      p.w1(r, c) = rng.uniform(-bound, bound);
    }
  }
  p.w2 = Matrix::Zero(h + 1, 1);
  if (init_w2) {
    for (Index r = 0; r < h; ++r) {
      p.w2(r, 0) = rng.uniform(-bound, bound);
    }
  }
  return p;
}

Matrix relu(const Matrix& z) { return z.cwiseMax(0.0); }

Matrix relu_prime(const Matrix& z) {
  return (z.array() > 0.0).cast<double>().matrix();
}

Matrix augmented(const Matrix& x) {
  Matrix out(x.rows(), x.cols() + 1);
  out.leftCols(x.cols()) = x;
  out.col(x.cols()).setOnes();
  return out;
}

std::pair<Matrix, Matrix> hidden_pass(const Matrix& w1, const Matrix& x_aug) {
  if (x_aug.cols() != w1.rows()) {
    throw ShapeError("hidden_pass: dimension mismatch " + shape_of(x_aug) +
                     " vs " + shape_of(w1));
  }
  Matrix z1 = x_aug * w1;
  require_finite(z1, "hidden_pass");
  Matrix x1aug = augmented(relu(z1));
  return {std::move(z1), std::move(x1aug)};
}

ForwardCache forward(const NetworkParams& params, const Matrix& x) {
  if (x.cols() != params.d) {
    throw ShapeError("forward: expected " + std::to_string(params.d) +
                     " features, got " + shape_of(x));
  }
  ForwardCache cache;
  auto hidden = hidden_pass(params.w1, augmented(x));
  cache.z1 = std::move(hidden.first);
  cache.x1aug = std::move(hidden.second);
  cache.yhat = cache.x1aug * params.w2;
  require_finite(cache.yhat, "forward");
  return cache;
}

double mse_cost(const Matrix& yhat, const Matrix& y) {
  if (yhat.cols() != 1 || y.cols() != 1 || yhat.rows() != y.rows()) {
    throw ShapeError("mse_cost: shape mismatch " + shape_of(yhat) + " vs " +
                     shape_of(y));
  }
  const double cost =
      (yhat - y).squaredNorm() / (2.0 * static_cast<double>(y.rows()));
  if (!std::isfinite(cost)) {
    throw NumericError("mse_cost: non-finite cost");
  }
  return cost;
}

}  // namespace sbnn
