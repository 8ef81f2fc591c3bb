#include "sbnn/splitboost.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <utility>

#include "sbnn/data.hpp"
#include "sbnn/linalg.hpp"

namespace sbnn {

namespace {

void validate(const TrainConfig& cfg) {
  if (cfg.gamma_star < 0.0) throw ConfigError("gamma_star must be >= 0");
  if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (cfg.max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (cfg.hidden < 1) throw ConfigError("hidden must be >= 1");
}

// Everything one partition contributes to an epoch.
struct PartitionState {
  Matrix x_aug;       // n x (d+1)
  ForwardCache cache;
  Matrix w2star;      // (h+1) x 1
};

PartitionState solve_partition(const Matrix& w1, const Subset& part) {
  PartitionState st;
  st.x_aug = augmented(part.x);
  auto hidden = hidden_pass(w1, st.x_aug);
  st.cache.z1 = std::move(hidden.first);
  st.cache.x1aug = std::move(hidden.second);
  st.w2star = fit_w2(st.cache.x1aug, part.y);
  st.cache.yhat = st.cache.x1aug * st.w2star;
  return st;
}

// Direct term of the scored partition k under the other side's weights
// w2j: x_aug_k' * (dJ/dX1 restricted to activation columns, gated by the
// relu derivative).
Matrix direct_term(const PartitionState& k, const Matrix& y_k,
                   const Matrix& w2j) {
  const Index n = y_k.rows();
  const Index h = k.cache.z1.cols();
  const Matrix grad_yhat =
      (k.cache.x1aug * w2j - y_k) / static_cast<double>(n);
  const Matrix grad_x1 = grad_yhat * w2j.transpose();  // n x (h+1)
  const Matrix grad_z1 =
      grad_x1.leftCols(h).cwiseProduct(relu_prime(k.cache.z1));
  return k.x_aug.transpose() * grad_z1;  // (d+1) x h
}

// dJ_k/dw2j for the scored partition (the inner-solution gradient that
// the Jacobian path consumes).
Matrix w2_cost_gradient(const PartitionState& k, const Matrix& y_k,
                        const Matrix& w2j) {
  const Index n = y_k.rows();
  const Matrix grad_yhat =
      (k.cache.x1aug * w2j - y_k) / static_cast<double>(n);
  return k.cache.x1aug.transpose() * grad_yhat;  // (h+1) x 1
}

// vec -> (d+1) x h with the column-stacking convention.
Matrix unvec(const Matrix& v, Index rows, Index cols) {
  Matrix out(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) {
      out(r, c) = v(vec_index(r, c, rows), 0);
    }
  }
  return out;
}

Matrix gradient_from_states(const PartitionState& a, const Matrix& y_a,
                            const PartitionState& b, const Matrix& y_b) {
  // J_b scored with w2a*, J_a scored with w2b* (cross application).
  Matrix grad = direct_term(b, y_b, a.w2star) + direct_term(a, y_a, b.w2star);

  const Index d1 = a.x_aug.cols();
  const Index h = a.cache.z1.cols();

  const Matrix jac_a = w2_jacobian(a.x_aug, a.cache, a.w2star, y_a);
  const Matrix jac_b = w2_jacobian(b.x_aug, b.cache, b.w2star, y_b);
  const Matrix via_a = jac_a.transpose() * w2_cost_gradient(b, y_b, a.w2star);
  const Matrix via_b = jac_b.transpose() * w2_cost_gradient(a, y_a, b.w2star);
  grad += unvec(via_a, d1, h) + unvec(via_b, d1, h);
  require_finite(grad, "w1_gradient");
  return grad;
}

std::vector<Index> iota_indices(Index n) {
  std::vector<Index> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), Index{0});
  return v;
}

Subset take_rows(const Subset& s, const std::vector<Index>& rows) {
  Subset out;
  out.x.resize(static_cast<Index>(rows.size()), s.x.cols());
  out.y.resize(static_cast<Index>(rows.size()), 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.x.row(static_cast<Index>(i)) = s.x.row(rows[i]);
    out.y(static_cast<Index>(i), 0) = s.y(rows[i], 0);
  }
  return out;
}

// Shared epoch loop for train and retrain. With forced_epochs set, early
// stopping is disabled and exactly that many epochs run. `eval` provides
// the j_val column; when null the train MSE is reused.
TrainResult run_loop(const TrainConfig& cfg, const Subset& a, const Subset& b,
                     const Subset* eval, std::optional<int> forced_epochs) {
  validate(cfg);
  if (a.n() == 0 || b.n() == 0) {
    throw ConfigError("train: empty training partition");
  }
  if (a.x.cols() != b.x.cols()) {
    throw ShapeError("train: partition feature mismatch " + shape_of(a.x) +
                     " vs " + shape_of(b.x));
  }

  const Index d = a.x.cols();
  NetworkParams params = init_params(d, cfg.hidden, cfg.seed, false);

  const Subset full_train = concat(a, b);
  const int epochs = forced_epochs.value_or(cfg.max_epochs);

  TrainResult result;
  EarlyStopping stopper(cfg.epsilon);
  LearningRateSwitch lr(cfg.gamma_star, cfg.lr_switch_as_written);

  for (int epoch = 1; epoch <= epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    NetworkParams before = params;
    try {
      PartitionState sa = solve_partition(params.w1, a);
      PartitionState sb = solve_partition(params.w1, b);

      const double j_train = mse_cost(sb.cache.x1aug * sa.w2star, b.y) +
                             mse_cost(sa.cache.x1aug * sb.w2star, a.y);

      const Matrix grad = gradient_from_states(sa, a.y, sb, b.y);
      const double gamma =
          cfg.lr_switch_enabled ? lr.next(j_train) : cfg.gamma_star;

      params.w1 -= gamma * grad;
      params.w2 = 0.5 * (sa.w2star + sb.w2star);
      require_finite(params.w1, "train (w1 update)");

      const double j_train_avg_w2 =
          mse_cost(forward(params, full_train.x).yhat, full_train.y);
      const double j_val =
          eval ? mse_cost(forward(params, eval->x).yhat, eval->y)
               : j_train_avg_w2;

      const double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      result.history.push_back(
          {epoch, j_train, j_train_avg_w2, j_val, gamma, wall});

      if (!forced_epochs && stopper.should_stop(j_val)) {
        result.stopped_early = true;
        break;
      }
    } catch (const NumericError& e) {
      throw TrainingError(
          "train: diverged at epoch " + std::to_string(epoch) + ": " +
              e.what(),
          epoch, std::move(before));
    }
  }

  result.params = std::move(params);
  result.best_epoch = static_cast<int>(result.history.size());
  return result;
}

}  // namespace

Matrix fit_w2(const Matrix& x1aug, const Matrix& y) {
  return least_squares(x1aug, y);
}

Matrix w2_jacobian(const Matrix& x_aug, const ForwardCache& cache,
                   const Matrix& w2star, const Matrix& y) {
  const Index n = x_aug.rows();
  const Index d1 = x_aug.cols();
  const Index h = cache.z1.cols();
  if (cache.z1.rows() != n || cache.x1aug.rows() != n ||
      cache.x1aug.cols() != h + 1 || w2star.rows() != h + 1 ||
      w2star.cols() != 1 || y.rows() != n || y.cols() != 1) {
    throw ShapeError("w2_jacobian: inconsistent shapes (x_aug " +
                     shape_of(x_aug) + ", z1 " + shape_of(cache.z1) +
                     ", x1aug " + shape_of(cache.x1aug) + ", w2star " +
                     shape_of(w2star) + ", y " + shape_of(y) + ")");
  }

  const Matrix residual = cache.x1aug * w2star - y;  // n x 1
  const double stationarity =
      (cache.x1aug.transpose() * residual).lpNorm<Eigen::Infinity>();
  const double scale =
      1.0 + (cache.x1aug.transpose() * y).lpNorm<Eigen::Infinity>();
  if (stationarity > 1e-6 * scale) {
    throw ContractError(
        "w2_jacobian: w2star is not stationary for this cache (|grad| = " +
        std::to_string(stationarity) + ", scale = " + std::to_string(scale) +
        "); run fit_w2 on the same activations first");
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  const Matrix hess = inv_n * (cache.x1aug.transpose() * cache.x1aug);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(hess);
  cod.setThreshold(kRankThreshold);
  const Matrix hess_pinv = cod.pseudoInverse();

  const Matrix gate = relu_prime(cache.z1);  // n x h
  const Eigen::VectorXd res_col = residual.col(0);
  Matrix mixed = Matrix::Zero(h + 1, d1 * h);
  for (Index hp = 0; hp < h; ++hp) {
    const Eigen::VectorXd m = gate.col(hp);
    if (m.isZero(0.0)) continue;  // dead unit: no dependence on w1 column hp
    const Matrix gated_rows = m.asDiagonal() * x_aug;  // n x d1
    mixed.block(0, d1 * hp, h + 1, d1) =
        (inv_n * w2star(hp, 0)) * (cache.x1aug.transpose() * gated_rows);
    mixed.row(hp).segment(d1 * hp, d1) +=
        inv_n * (m.cwiseProduct(res_col).transpose() * x_aug);
  }

  Matrix jac = -(hess_pinv * mixed);
  require_finite(jac, "w2_jacobian");
  return jac;
}

double bilevel_cost(const Matrix& w1, const Subset& a, const Subset& b) {
  if (a.n() == 0 || b.n() == 0) {
    throw ConfigError("bilevel_cost: empty partition");
  }
  PartitionState sa = solve_partition(w1, a);
  PartitionState sb = solve_partition(w1, b);
  return mse_cost(sb.cache.x1aug * sa.w2star, b.y) +
         mse_cost(sa.cache.x1aug * sb.w2star, a.y);
}

Matrix w1_gradient(const Matrix& w1, const Subset& a, const Subset& b) {
  if (a.n() == 0 || b.n() == 0) {
    throw ConfigError("w1_gradient: empty partition");
  }
  PartitionState sa = solve_partition(w1, a);
  PartitionState sb = solve_partition(w1, b);
  return gradient_from_states(sa, a.y, sb, b.y);
}

TrainResult train(const TrainConfig& config, const Subset& train_a,
                  const Subset& train_b, const Subset& val) {
  if (val.n() == 0) throw ConfigError("train: empty validation set");
  return run_loop(config, train_a, train_b, &val, std::nullopt);
}

TrainResult retrain(const TrainConfig& config, const Subset& train_plus_val,
                    int best_epoch, const Subset* track) {
  if (best_epoch < 1) throw ConfigError("retrain: best_epoch must be >= 1");
  if (train_plus_val.n() < 2) {
    throw ConfigError("retrain: need at least 2 rows to split");
  }

  std::vector<Index> perm = iota_indices(train_plus_val.n());
  Rng rng(config.seed);
  rng.shuffle(perm);
  std::vector<Index> rows_a, rows_b;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    (i % 2 == 0 ? rows_a : rows_b).push_back(perm[i]);
  }

  return run_loop(config, take_rows(train_plus_val, rows_a),
                  take_rows(train_plus_val, rows_b), track, best_epoch);
}

}  // namespace sbnn
