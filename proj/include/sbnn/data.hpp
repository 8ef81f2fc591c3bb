#pragma once

#include <string>
#include <vector>

#include "sbnn/types.hpp"

namespace sbnn {

struct Dataset {
  Matrix x;  // n x d raw-encoded features
  Matrix y;  // n x 1 target
  std::vector<std::string> feature_names;
  Index n = 0;
};

struct LoadOptions {
  std::string target_column = "charges";
  // Canonical schema only: expand region into four indicator columns
  // (d = 9) instead of one ordinal column (d = 6).
  bool one_hot_region = false;
};

// Loads a comma-separated UTF-8 file with one header row. The canonical
// insurance header `age,sex,bmi,children,smoker,region,charges` gets the
// fixed categorical encoding (sex: female=0, male=1; smoker: no=0,
// yes=1; region: northeast=0, northwest=1, southeast=2, southwest=3).
// Any other header must be all-numeric with `target_column` naming the
// target; remaining columns become features in file order.
Dataset load_csv(const std::string& path, const LoadOptions& opts = {});

// Disjoint, exhaustive index partition drawn from a seeded permutation.
struct SplitIndices {
  std::vector<Index> train_a, train_b, val, test;
  std::uint64_t seed = 0;
};

// Assigns a seeded uniform permutation of 0..n-1 in order: test
// (round(0.20 n)), validation (round(0.16 n)), then the remainder
// alternately into A and B, A first.
SplitIndices split(Index n, std::uint64_t seed);

// Per-column z-score statistics, fitted on training rows only.
struct Scaler {
  Eigen::VectorXd feature_means, feature_stds;
  double target_mean = 0.0;
  double target_std = 1.0;
  std::uint64_t fitted_on = 0;  // fingerprint of the sorted training rows
  std::vector<Index> constant_columns;  // stds forced to 1
};

// FNV-1a over the sorted row indices; identifies what a scaler saw.
std::uint64_t row_fingerprint(std::vector<Index> rows);

Scaler fit_scaler(const Dataset& ds, const std::vector<Index>& train_rows);

// No-op statistics (means 0, stds 1) for unstandardized pipelines.
Scaler identity_scaler(Index d);

Matrix transform_features(const Scaler& s, const Matrix& x);
Matrix transform_target(const Scaler& s, const Matrix& y);
Matrix invert_target(const Scaler& s, const Matrix& y_std);

// Row selections, raw and standardized.
Subset gather(const Dataset& ds, const std::vector<Index>& rows);
Subset gather_scaled(const Dataset& ds, const Scaler& s,
                     const std::vector<Index>& rows);

Subset concat(const Subset& a, const Subset& b);

}  // namespace sbnn
