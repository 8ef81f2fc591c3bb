#pragma once

#include <string>
#include <vector>

#include "sbnn/baseline.hpp"
#include "sbnn/data.hpp"
#include "sbnn/splitboost.hpp"

namespace sbnn {

enum class TrainerKind { SplitBoost, Baseline };

// End-to-end run of one trainer on a raw dataset: seeded split, scaler
// fitted on the training rows only, train with early stopping, retrain
// on train+val for the best epoch, test cost of the retrained model.
struct PipelineResult {
  TrainResult initial;
  TrainResult retrained;
  double j_test = 0.0;
  Scaler scaler;
  SplitIndices indices;
};

PipelineResult run_pipeline(TrainerKind kind, const TrainConfig& sb,
                            const BaselineConfig& ff, const Dataset& raw,
                            bool standardize = true);

struct SweepSpec {
  enum class Param { Gamma, Lambda };
  Param parameter = Param::Gamma;
  std::vector<double> values;
  TrainerKind trainer = TrainerKind::SplitBoost;
  TrainConfig base_sb;
  BaselineConfig base_ff;
  bool standardize = true;
};

inline const std::vector<double> kDefaultGammaGrid = {0.001, 0.005, 0.01,
                                                      0.05,  0.1,   0.5};
inline const std::vector<double> kDefaultLambdaGrid = {0.0001, 0.001, 0.01,
                                                       0.1, 1.0};

struct SweepRow {
  double value = 0.0;
  double final_j_val = 0.0;  // NaN when the run diverged
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t argmin = 0;  // ties broken toward the smaller value
};

// One full train per candidate value on the base config's seed/split;
// a diverged run is recorded as non-finite, not fatal.
SweepResult run_sweep(const SweepSpec& spec, const Dataset& raw);

struct BenchmarkReport {
  std::vector<std::uint64_t> seeds;
  std::vector<double> sb_test_costs, ff_test_costs;  // NaN for diverged
  std::vector<int> sb_best_epochs, ff_best_epochs;
  std::vector<std::uint64_t> diverged_seeds;
  double win_rate = 0.0;  // strict split-boost wins over valid seeds
  double sb_epoch_time_s = 0.0, ff_epoch_time_s = 0.0;
};

// Fraction of positions where sb is strictly lower; non-finite pairs are
// skipped.
double compute_win_rate(const std::vector<double>& sb_costs,
                        const std::vector<double>& ff_costs);

// Seeds 0..n_seeds-1, each feeding the split and both initializations so
// the two arms see identical partitions. Seeds run on `workers` threads;
// results are byte-identical regardless of the worker count.
BenchmarkReport run_monte_carlo(int n_seeds, const TrainConfig& sb,
                                const BaselineConfig& ff, const Dataset& raw,
                                int workers = 1);

// Wall-clock seconds per epoch over a forced-length run on seed 0;
// steady-state mean excludes the first epoch when there is more than one.
std::pair<double, std::vector<double>> measure_epoch_time(TrainerKind kind,
                                                          const Dataset& raw,
                                                          int epochs);

void write_report_json(const std::string& path, const BenchmarkReport& r);
// Schema: seed,sb_test_cost,ff_test_cost,sb_best_epoch,ff_best_epoch
void write_report_csv(const std::string& path, const BenchmarkReport& r);
// Schema: value,final_j_val
void write_sweep_csv(const std::string& path, const SweepResult& r);

}  // namespace sbnn
