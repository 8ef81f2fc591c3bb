#pragma once

#include <utility>

#include "sbnn/training.hpp"

namespace sbnn {

struct BaselineConfig {
  double gamma = 0.1;    // constant learning rate
  double lambda = 0.01;  // weight-decay intensity
  double epsilon = 1e-6;
  int max_epochs = 500;
  int hidden = 10;
  std::uint64_t seed = 0;
};

// Train MSE plus (lambda/2) * squared weight norms; bias row and bias
// entry excluded from the penalty.
double baseline_cost(const NetworkParams& params, const Matrix& x,
                     const Matrix& y, double lambda);

// Exact gradients of baseline_cost with respect to (w1, w2).
std::pair<Matrix, Matrix> baseline_gradients(const NetworkParams& params,
                                             const Matrix& x, const Matrix& y,
                                             double lambda);

// Full-batch gradient descent on both layers at a constant rate, with
// the same early-stopping rule and history schema as the split-boost
// trainer. j_train holds the penalized cost the step was computed at;
// the j_train_avg_w2 column holds the unpenalized MSE of the post-epoch
// model.
TrainResult train_baseline(const BaselineConfig& config, const Subset& train,
                           const Subset& val);

// Fresh run on the merged rows for exactly best_epoch epochs; no early
// stopping. `track` fills the j_val column (else the train MSE repeats).
TrainResult retrain_baseline(const BaselineConfig& config,
                             const Subset& train_plus_val, int best_epoch,
                             const Subset* track = nullptr);

}  // namespace sbnn
