#include "sbnn/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace sbnn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<Index> concat_rows(const std::vector<Index>& a,
                               const std::vector<Index>& b) {
  std::vector<Index> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Mean epoch wall time excluding the warm-up epoch.
double steady_epoch_time(const std::vector<EpochRecord>& history) {
  if (history.empty()) return 0.0;
  if (history.size() == 1) return history.front().wall_time_s;
  double sum = 0.0;
  for (std::size_t i = 1; i < history.size(); ++i) {
    sum += history[i].wall_time_s;
  }
  return sum / static_cast<double>(history.size() - 1);
}

double quantile(std::vector<double> v, double p) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= v.size()) return v.back();
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::vector<double> finite_only(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v) {
    if (std::isfinite(x)) out.push_back(x);
  }
  return out;
}

struct SeedOutcome {
  double sb_test_cost = kNaN, ff_test_cost = kNaN;
  int sb_best_epoch = 0, ff_best_epoch = 0;
  double sb_epoch_time_s = 0.0, ff_epoch_time_s = 0.0;
  bool diverged = false;
  std::string note;
};

SeedOutcome run_seed(std::uint64_t seed, TrainConfig sb, BaselineConfig ff,
                     const Dataset& raw) {
  sb.seed = seed;
  ff.seed = seed;

  const SplitIndices idx = split(raw.n, seed);
  const Scaler scaler = fit_scaler(raw, concat_rows(idx.train_a, idx.train_b));
  const Subset a = gather_scaled(raw, scaler, idx.train_a);
  const Subset b = gather_scaled(raw, scaler, idx.train_b);
  const Subset val = gather_scaled(raw, scaler, idx.val);
  const Subset test = gather_scaled(raw, scaler, idx.test);

  SeedOutcome out;
  try {
    const TrainResult r = train(sb, a, b, val);
    const TrainResult re = retrain(sb, concat(concat(a, b), val), r.best_epoch);
    out.sb_test_cost = mse_cost(forward(re.params, test.x).yhat, test.y);
    out.sb_best_epoch = r.best_epoch;
    out.sb_epoch_time_s = steady_epoch_time(r.history);
  } catch (const TrainingError& e) {
    out.diverged = true;
    out.note = std::string("split-boost arm: ") + e.what();
  }
  try {
    const Subset full_train = concat(a, b);
    const TrainResult r = train_baseline(ff, full_train, val);
    const TrainResult re =
        retrain_baseline(ff, concat(full_train, val), r.best_epoch);
    out.ff_test_cost = mse_cost(forward(re.params, test.x).yhat, test.y);
    out.ff_best_epoch = r.best_epoch;
    out.ff_epoch_time_s = steady_epoch_time(r.history);
  } catch (const TrainingError& e) {
    out.diverged = true;
    out.note += std::string(out.note.empty() ? "" : "; ") +
                "baseline arm: " + e.what();
  }
  return out;
}

}  // namespace

PipelineResult run_pipeline(TrainerKind kind, const TrainConfig& sb,
                            const BaselineConfig& ff, const Dataset& raw,
                            bool standardize) {
  PipelineResult out;
  const std::uint64_t seed = kind == TrainerKind::SplitBoost ? sb.seed : ff.seed;
  out.indices = split(raw.n, seed);
  out.scaler = standardize
                   ? fit_scaler(raw, concat_rows(out.indices.train_a,
                                                 out.indices.train_b))
                   : identity_scaler(raw.x.cols());

  const Subset a = gather_scaled(raw, out.scaler, out.indices.train_a);
  const Subset b = gather_scaled(raw, out.scaler, out.indices.train_b);
  const Subset val = gather_scaled(raw, out.scaler, out.indices.val);
  const Subset test = gather_scaled(raw, out.scaler, out.indices.test);

  if (kind == TrainerKind::SplitBoost) {
    out.initial = train(sb, a, b, val);
    out.retrained = retrain(sb, concat(concat(a, b), val),
                            out.initial.best_epoch, &test);
  } else {
    const Subset full_train = concat(a, b);
    out.initial = train_baseline(ff, full_train, val);
    out.retrained = retrain_baseline(ff, concat(full_train, val),
                                     out.initial.best_epoch, &test);
  }
  out.j_test = mse_cost(forward(out.retrained.params, test.x).yhat, test.y);
  return out;
}

SweepResult run_sweep(const SweepSpec& spec, const Dataset& raw) {
  if (spec.values.empty()) throw ConfigError("run_sweep: empty value grid");
  for (double v : spec.values) {
    if (!(v > 0.0)) throw ConfigError("run_sweep: values must be positive");
  }
  if (spec.parameter == SweepSpec::Param::Lambda &&
      spec.trainer == TrainerKind::SplitBoost) {
    throw ConfigError("run_sweep: split-boost has no lambda to sweep");
  }

  const std::uint64_t seed = spec.trainer == TrainerKind::SplitBoost
                                 ? spec.base_sb.seed
                                 : spec.base_ff.seed;
  const SplitIndices idx = split(raw.n, seed);
  const Scaler scaler =
      spec.standardize
          ? fit_scaler(raw, concat_rows(idx.train_a, idx.train_b))
          : identity_scaler(raw.x.cols());
  const Subset a = gather_scaled(raw, scaler, idx.train_a);
  const Subset b = gather_scaled(raw, scaler, idx.train_b);
  const Subset val = gather_scaled(raw, scaler, idx.val);

  SweepResult result;
  for (double value : spec.values) {
    double j_val = kNaN;
    try {
      TrainResult r;
      if (spec.trainer == TrainerKind::SplitBoost) {
        TrainConfig cfg = spec.base_sb;
        cfg.gamma_star = value;  // only gamma is sweepable here
        r = train(cfg, a, b, val);
      } else {
        BaselineConfig cfg = spec.base_ff;
        if (spec.parameter == SweepSpec::Param::Gamma) {
          cfg.gamma = value;
        } else {
          cfg.lambda = value;
        }
        r = train_baseline(cfg, concat(a, b), val);
      }
      j_val = r.history.back().j_val;
    } catch (const TrainingError&) {
      // recorded as non-finite below
    }
    result.rows.push_back({value, j_val});
  }

  bool found = false;
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& row = result.rows[i];
    if (!std::isfinite(row.final_j_val)) continue;
    const SweepRow& best = result.rows[result.argmin];
    if (!found || row.final_j_val < best.final_j_val ||
        (row.final_j_val == best.final_j_val && row.value < best.value)) {
      result.argmin = i;
      found = true;
    }
  }
  return result;
}

double compute_win_rate(const std::vector<double>& sb_costs,
                        const std::vector<double>& ff_costs) {
  if (sb_costs.size() != ff_costs.size()) {
    throw ShapeError("compute_win_rate: cost lists differ in length");
  }
  std::size_t wins = 0, valid = 0;
  for (std::size_t i = 0; i < sb_costs.size(); ++i) {
    if (!std::isfinite(sb_costs[i]) || !std::isfinite(ff_costs[i])) continue;
    ++valid;
    if (sb_costs[i] < ff_costs[i]) ++wins;
  }
  if (valid == 0) return 0.0;
  return static_cast<double>(wins) / static_cast<double>(valid);
}

BenchmarkReport run_monte_carlo(int n_seeds, const TrainConfig& sb,
                                const BaselineConfig& ff, const Dataset& raw,
                                int workers) {
  if (n_seeds < 1) throw ConfigError("run_monte_carlo: need n_seeds >= 1");
  if (workers < 1) throw ConfigError("run_monte_carlo: need workers >= 1");

  std::vector<SeedOutcome> outcomes(static_cast<std::size_t>(n_seeds));
  std::atomic<int> next{0};
  std::mutex io_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    try {
      for (int i = next.fetch_add(1); i < n_seeds; i = next.fetch_add(1)) {
        SeedOutcome o = run_seed(static_cast<std::uint64_t>(i), sb, ff, raw);
        if (o.diverged) {
          std::lock_guard<std::mutex> lock(io_mutex);
          std::cerr << "warning: seed " << i
                    << " diverged and is excluded from the win rate ("
                    << o.note << ")\n";
        }
        outcomes[static_cast<std::size_t>(i)] = std::move(o);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(io_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int count = std::min(workers, n_seeds);
    pool.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  BenchmarkReport report;
  std::vector<double> sb_times, ff_times;
  for (int i = 0; i < n_seeds; ++i) {
    const SeedOutcome& o = outcomes[static_cast<std::size_t>(i)];
    report.seeds.push_back(static_cast<std::uint64_t>(i));
    report.sb_test_costs.push_back(o.sb_test_cost);
    report.ff_test_costs.push_back(o.ff_test_cost);
    report.sb_best_epochs.push_back(o.sb_best_epoch);
    report.ff_best_epochs.push_back(o.ff_best_epoch);
    if (o.diverged) {
      report.diverged_seeds.push_back(static_cast<std::uint64_t>(i));
    } else {
      sb_times.push_back(o.sb_epoch_time_s);
      ff_times.push_back(o.ff_epoch_time_s);
    }
  }
  report.win_rate = compute_win_rate(report.sb_test_costs,
                                     report.ff_test_costs);
  report.sb_epoch_time_s = mean_of(sb_times);
  report.ff_epoch_time_s = mean_of(ff_times);
  return report;
}

std::pair<double, std::vector<double>> measure_epoch_time(TrainerKind kind,
                                                          const Dataset& raw,
                                                          int epochs) {
  if (epochs < 1) throw ConfigError("measure_epoch_time: need epochs >= 1");
  const SplitIndices idx = split(raw.n, 0);
  const Scaler scaler = fit_scaler(raw, concat_rows(idx.train_a, idx.train_b));
  const Subset a = gather_scaled(raw, scaler, idx.train_a);
  const Subset b = gather_scaled(raw, scaler, idx.train_b);

  TrainResult r;
  if (kind == TrainerKind::SplitBoost) {
    TrainConfig cfg;
    r = retrain(cfg, concat(a, b), epochs);
  } else {
    BaselineConfig cfg;
    r = retrain_baseline(cfg, concat(a, b), epochs);
  }
  std::vector<double> times;
  times.reserve(r.history.size());
  for (const EpochRecord& rec : r.history) times.push_back(rec.wall_time_s);
  return {steady_epoch_time(r.history), times};
}

void write_report_json(const std::string& path, const BenchmarkReport& r) {
  using nlohmann::json;
  const std::vector<double> sb = finite_only(r.sb_test_costs);
  const std::vector<double> ff = finite_only(r.ff_test_costs);

  auto arm = [](const std::vector<double>& costs,
                const std::vector<int>& epochs, double epoch_time) {
    double mean_best = 0.0;
    if (!epochs.empty()) {
      for (int e : epochs) mean_best += e;
      mean_best /= static_cast<double>(epochs.size());
    }
    return json{{"test_cost_median", quantile(costs, 0.5)},
                {"test_cost_q1", quantile(costs, 0.25)},
                {"test_cost_q3", quantile(costs, 0.75)},
                {"test_cost_mean", mean_of(costs)},
                {"mean_best_epoch", mean_best},
                {"mean_epoch_time_s", epoch_time},
                {"total_cost_s", mean_best * epoch_time}};
  };

  json j;
  j["n_seeds"] = r.seeds.size();
  j["win_rate"] = r.win_rate;
  j["diverged_seeds"] = r.diverged_seeds;
  j["splitboost"] = arm(sb, r.sb_best_epochs, r.sb_epoch_time_s);
  j["baseline"] = arm(ff, r.ff_best_epochs, r.ff_epoch_time_s);
  j["seeds"] = r.seeds;
  j["sb_test_costs"] = r.sb_test_costs;
  j["ff_test_costs"] = r.ff_test_costs;
  j["sb_best_epochs"] = r.sb_best_epochs;
  j["ff_best_epochs"] = r.ff_best_epochs;

  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing '" + path + "'");
}

void write_report_csv(const std::string& path, const BenchmarkReport& r) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "seed,sb_test_cost,ff_test_cost,sb_best_epoch,ff_best_epoch\n";
  for (std::size_t i = 0; i < r.seeds.size(); ++i) {
    out << r.seeds[i] << ',' << format_double(r.sb_test_costs[i]) << ','
        << format_double(r.ff_test_costs[i]) << ',' << r.sb_best_epochs[i]
        << ',' << r.ff_best_epochs[i] << '\n';
  }
  if (!out) throw Error("failed writing '" + path + "'");
}

void write_sweep_csv(const std::string& path, const SweepResult& r) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "value,final_j_val\n";
  for (const SweepRow& row : r.rows) {
    out << format_double(row.value) << ',' << format_double(row.final_j_val)
        << '\n';
  }
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace sbnn
