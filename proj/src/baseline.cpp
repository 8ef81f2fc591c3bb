#include "sbnn/baseline.hpp"

#include <chrono>
#include <cmath>
#include <optional>

namespace sbnn {

namespace {

void validate(const BaselineConfig& cfg) {
  if (cfg.gamma < 0.0) throw ConfigError("gamma must be >= 0");
  if (cfg.lambda < 0.0) throw ConfigError("lambda must be >= 0");
  if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (cfg.max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (cfg.hidden < 1) throw ConfigError("hidden must be >= 1");
}

double penalty(const NetworkParams& p, double lambda) {
  return 0.5 * lambda *
         (p.w1.topRows(p.d).squaredNorm() + p.w2.topRows(p.h).squaredNorm());
}

TrainResult run_loop(const BaselineConfig& cfg, const Subset& train,
                     const Subset* eval, std::optional<int> forced_epochs) {
  validate(cfg);
  if (train.n() == 0) throw ConfigError("train_baseline: empty training set");

  NetworkParams params =
      init_params(train.x.cols(), cfg.hidden, cfg.seed, true);
  const int epochs = forced_epochs.value_or(cfg.max_epochs);

  TrainResult result;
  EarlyStopping stopper(cfg.epsilon);

  for (int epoch = 1; epoch <= epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    NetworkParams before = params;
    try {
      const double j_train =
          baseline_cost(params, train.x, train.y, cfg.lambda);
      const auto [g1, g2] =
          baseline_gradients(params, train.x, train.y, cfg.lambda);

      params.w1 -= cfg.gamma * g1;
      params.w2 -= cfg.gamma * g2;
      require_finite(params.w1, "train_baseline (w1 update)");
      require_finite(params.w2, "train_baseline (w2 update)");

      const double train_mse =
          mse_cost(forward(params, train.x).yhat, train.y);
      const double j_val = eval
                               ? mse_cost(forward(params, eval->x).yhat,
                                          eval->y)
                               : train_mse;

      const double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      result.history.push_back(
          {epoch, j_train, train_mse, j_val, cfg.gamma, wall});

      if (!forced_epochs && stopper.should_stop(j_val)) {
        result.stopped_early = true;
        break;
      }
    } catch (const NumericError& e) {
      throw TrainingError(
          "train_baseline: diverged at epoch " + std::to_string(epoch) +
              ": " + e.what(),
          epoch, std::move(before));
    }
  }

  result.params = std::move(params);
  result.best_epoch = static_cast<int>(result.history.size());
  return result;
}

}  // namespace

double baseline_cost(const NetworkParams& params, const Matrix& x,
                     const Matrix& y, double lambda) {
  const ForwardCache cache = forward(params, x);
  return mse_cost(cache.yhat, y) + penalty(params, lambda);
}

std::pair<Matrix, Matrix> baseline_gradients(const NetworkParams& params,
                                             const Matrix& x, const Matrix& y,
                                             double lambda) {
  const Index n = y.rows();
  const Matrix x_aug = augmented(x);
  auto [z1, x1aug] = hidden_pass(params.w1, x_aug);

  const Matrix grad_yhat = (x1aug * params.w2 - y) / static_cast<double>(n);
  Matrix g2 = x1aug.transpose() * grad_yhat;  // (h+1) x 1
  g2.topRows(params.h) += lambda * params.w2.topRows(params.h);

  const Matrix grad_x1 = grad_yhat * params.w2.transpose();  // n x (h+1)
  const Matrix grad_z1 =
      grad_x1.leftCols(params.h).cwiseProduct(relu_prime(z1));
  Matrix g1 = x_aug.transpose() * grad_z1;  // (d+1) x h
  g1.topRows(params.d) += lambda * params.w1.topRows(params.d);

  require_finite(g1, "baseline_gradients (w1)");
  require_finite(g2, "baseline_gradients (w2)");
  return {std::move(g1), std::move(g2)};
}

TrainResult train_baseline(const BaselineConfig& config, const Subset& train,
                           const Subset& val) {
  if (val.n() == 0) throw ConfigError("train_baseline: empty validation set");
  return run_loop(config, train, &val, std::nullopt);
}

TrainResult retrain_baseline(const BaselineConfig& config,
                             const Subset& train_plus_val, int best_epoch,
                             const Subset* track) {
  if (best_epoch < 1) {
    throw ConfigError("retrain_baseline: best_epoch must be >= 1");
  }
  return run_loop(config, train_plus_val, track, best_epoch);
}

}  // namespace sbnn
