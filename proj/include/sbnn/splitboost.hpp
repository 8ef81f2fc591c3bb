#pragma once

#include "sbnn/training.hpp"

namespace sbnn {

struct TrainConfig {
  double gamma_star = 0.1;  // base learning rate for the switch
  double epsilon = 1e-6;    // early-stop threshold on |dJ_val|
  int max_epochs = 500;
  int hidden = 10;
  std::uint64_t seed = 0;
  bool lr_switch_enabled = true;
  // Switch branch direction as printed (gamma* after an increase). The
  // false setting inverts it; see LearningRateSwitch.
  bool lr_switch_as_written = true;
};

// Closed-form output weights for one partition: the least-squares
// minimizer of ||y - x1aug * w|| (minimum-norm under rank deficiency).
Matrix fit_w2(const Matrix& x1aug, const Matrix& y);

// Jacobian of the inner solution w2* with respect to the hidden weights,
// shape (h+1) x ((d+1)*h) with columns indexed by vec_index. Computed as
// -pinv(Hess) * T where Hess = x1aug'x1aug / n and T is the mixed second
// derivative of the partition cost. w2star must be the exact minimizer
// for (cache, y): a stationarity violation beyond 1e-6 relative raises
// ContractError.
Matrix w2_jacobian(const Matrix& x_aug, const ForwardCache& cache,
                   const Matrix& w2star, const Matrix& y);

// Cross-partition objective: each half is scored with the other half's
// inner solution, both inner problems solved fresh at this w1.
double bilevel_cost(const Matrix& w1, const Subset& a, const Subset& b);

// Full hypergradient of bilevel_cost with respect to w1: the direct
// backpropagation terms plus the implicit terms through both inner
// solutions' Jacobians.
Matrix w1_gradient(const Matrix& w1, const Subset& a, const Subset& b);

// Per epoch: hidden pass on both halves, two inner solves, hypergradient
// step on w1 with the switched rate, w2 <- average of the two solutions,
// validation cost with the averaged w2; stops when the validation cost
// change drops below epsilon.
TrainResult train(const TrainConfig& config, const Subset& train_a,
                  const Subset& train_b, const Subset& val);

// Fresh run on the merged train+val rows for exactly best_epoch epochs,
// re-splitting into two halves with the config seed; no early stopping.
// `track` substitutes the j_val history column (e.g. a test set for
// curve reporting); without it the column repeats the train MSE.
TrainResult retrain(const TrainConfig& config, const Subset& train_plus_val,
                    int best_epoch, const Subset* track = nullptr);

}  // namespace sbnn
