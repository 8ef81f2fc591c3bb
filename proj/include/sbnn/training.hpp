#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sbnn/model.hpp"

namespace sbnn {

struct EpochRecord {
  int epoch = 0;              // 1-based
  double j_train = 0.0;       // cost the gradient step was computed at
  double j_train_avg_w2 = 0.0;  // train-set MSE of the post-epoch model
  double j_val = 0.0;         // validation MSE of the post-epoch model
  double gamma_used = 0.0;
  double wall_time_s = 0.0;
};

struct TrainResult {
  NetworkParams params;
  int best_epoch = 0;
  std::vector<EpochRecord> history;
  bool stopped_early = false;
};

// Divergence: the epoch that went non-finite plus the last finite weights.
class TrainingError : public Error {
 public:
  TrainingError(const std::string& msg, int epoch, NetworkParams last_finite)
      : Error(msg), epoch_(epoch), last_finite_(std::move(last_finite)) {}
  int epoch() const { return epoch_; }
  const NetworkParams& last_finite_params() const { return last_finite_; }

 private:
  int epoch_;
  NetworkParams last_finite_;
};

// Stops when |J_v(k) - J_v(k-1)| < epsilon. The first epoch has no
// predecessor and never stops.
class EarlyStopping {
 public:
  explicit EarlyStopping(double epsilon) : epsilon_(epsilon) {}
  bool should_stop(double j_val) {
    const bool stop = has_prev_ && std::abs(j_val - prev_) < epsilon_;
    prev_ = j_val;
    has_prev_ = true;
    return stop;
  }

 private:
  double epsilon_;
  bool has_prev_ = false;
  double prev_ = 0.0;
};

// gamma = gamma* when the training cost increased, gamma*/10 otherwise,
// including at epoch 1 where no predecessor exists. as_written=false
// inverts the branch (shrink the rate after an increase).
class LearningRateSwitch {
 public:
  LearningRateSwitch(double gamma_star, bool as_written)
      : gamma_star_(gamma_star), as_written_(as_written) {}
  double next(double j_train) {
    const bool increased = has_prev_ && j_train - prev_ > 0.0;
    prev_ = j_train;
    has_prev_ = true;
    if (as_written_) return increased ? gamma_star_ : gamma_star_ / 10.0;
    return increased ? gamma_star_ / 10.0 : gamma_star_;
  }

 private:
  double gamma_star_;
  bool as_written_;
  bool has_prev_ = false;
  double prev_ = 0.0;
};

// 17 significant digits; round-trips every finite double.
std::string format_double(double v);

// Schema: epoch,j_train,j_train_avg_w2,j_val,gamma_used,wall_time_s
void write_history_csv(const std::string& path,
                       const std::vector<EpochRecord>& history);

}  // namespace sbnn
