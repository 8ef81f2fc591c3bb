#pragma once

#include <utility>

#include "sbnn/types.hpp"

namespace sbnn {

// Two-layer regression network. Biases ride inside the augmented weight
// matrices: w1 is (d+1) x h with the input bias in the last row, w2 is
// (h+1) x 1 with the output bias in the last entry, so the closed-form
// output solve and its Jacobian cover biases with no special cases.
struct NetworkParams {
  Matrix w1;
  Matrix w2;
  Index d = 0;
  Index h = 0;
};

// Fan-based uniform init on [-sqrt(6/(d+h)), +sqrt(6/(d+h))], bias row
// zero. w1 entries are drawn in row-major order, then w2 when requested;
// the split-boost trainer leaves w2 zero for the first inner solve to
// overwrite.
NetworkParams init_params(Index d, Index h, std::uint64_t seed, bool init_w2);

Matrix relu(const Matrix& z);

// Indicator z > 0; exactly 0 at the kink.
Matrix relu_prime(const Matrix& z);

// [x | 1]
Matrix augmented(const Matrix& x);

struct ForwardCache {
  Matrix z1;     // n x h pre-activations
  Matrix x1aug;  // n x (h+1): relu(z1) with a constant-1 column appended
  Matrix yhat;   // n x 1
};

// First-layer pass only: {z1, x1aug} from the bias-augmented input [x|1].
std::pair<Matrix, Matrix> hidden_pass(const Matrix& w1, const Matrix& x_aug);

ForwardCache forward(const NetworkParams& params, const Matrix& x);

// (1/2n) * sum of squared errors; yhat and y are single columns.
double mse_cost(const Matrix& yhat, const Matrix& y);

}  // namespace sbnn
