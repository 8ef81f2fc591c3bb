#include "sbnn/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace sbnn {

namespace {

const std::vector<std::string> kCanonicalHeader = {
    "age", "sex", "bmi", "children", "smoker", "region", "charges"};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i];
  }
  return out;
}

double parse_real(const std::string& token, int line_no,
                  const std::string& column) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || token.empty()) {
    throw IngestError("line " + std::to_string(line_no) + ", column '" +
                      column + "': non-numeric value '" + token + "'");
  }
  if (!std::isfinite(value)) {
    throw IngestError("line " + std::to_string(line_no) + ", column '" +
                      column + "': non-finite value '" + token + "'");
  }
  return value;
}

double parse_category(const std::string& token, int line_no,
                      const std::string& column,
                      const std::vector<std::string>& levels) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (token == levels[i]) return static_cast<double>(i);
  }
  throw IngestError("line " + std::to_string(line_no) + ", column '" + column +
                    "': unknown category '" + token + "'");
}

}  // namespace

Dataset load_csv(const std::string& path, const LoadOptions& opts) {
  std::ifstream file(path);
  if (!file) throw IngestError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(file, line)) throw IngestError(path + ": no data rows");
  const std::vector<std::string> header = split_line(line);

  const bool canonical = header == kCanonicalHeader;
  std::size_t target_idx = 0;
  if (canonical) {
    target_idx = 6;
  } else {
    auto it = std::find(header.begin(), header.end(), opts.target_column);
    if (it == header.end()) {
      throw IngestError(path + ": header mismatch: expected '" +
                        join(kCanonicalHeader) + "' or a numeric table with a '" +
                        opts.target_column + "' column, found '" + join(header) +
                        "'");
    }
    target_idx = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<std::vector<double>> feature_rows;
  std::vector<double> targets;
  int line_no = 1;
  while (std::getline(file, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_line(line);
    if (fields.size() != header.size()) {
      throw IngestError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, got " +
                        std::to_string(fields.size()));
    }
    std::vector<double> row;
    if (canonical) {
      row.push_back(parse_real(fields[0], line_no, "age"));
      row.push_back(parse_category(fields[1], line_no, "sex",
                                   {"female", "male"}));
      row.push_back(parse_real(fields[2], line_no, "bmi"));
      row.push_back(parse_real(fields[3], line_no, "children"));
      row.push_back(parse_category(fields[4], line_no, "smoker",
                                   {"no", "yes"}));
      const double region = parse_category(
          fields[5], line_no, "region",
          {"northeast", "northwest", "southeast", "southwest"});
      if (opts.one_hot_region) {
        for (int r = 0; r < 4; ++r) {
          row.push_back(region == r ? 1.0 : 0.0);
        }
      } else {
        row.push_back(region);
      }
      targets.push_back(parse_real(fields[6], line_no, "charges"));
    } else {
      for (std::size_t c = 0; c < fields.size(); ++c) {
        const double v = parse_real(fields[c], line_no, header[c]);
        if (c == target_idx) {
          targets.push_back(v);
        } else {
          row.push_back(v);
        }
      }
    }
    feature_rows.push_back(std::move(row));
  }

  if (feature_rows.empty()) throw IngestError(path + ": no data rows");
  if (feature_rows.size() < 4) {
    throw IngestError(path + ": need at least 4 data rows, got " +
                      std::to_string(feature_rows.size()));
  }

  Dataset ds;
  ds.n = static_cast<Index>(feature_rows.size());
  const Index d = static_cast<Index>(feature_rows.front().size());
  ds.x.resize(ds.n, d);
  ds.y.resize(ds.n, 1);
  for (Index i = 0; i < ds.n; ++i) {
    for (Index j = 0; j < d; ++j) {
      ds.x(i, j) = feature_rows[static_cast<std::size_t>(i)]
                               [static_cast<std::size_t>(j)];
    }
    ds.y(i, 0) = targets[static_cast<std::size_t>(i)];
  }
  if (canonical) {
    if (opts.one_hot_region) {
      ds.feature_names = {"age",
                          "sex",
                          "bmi",
                          "children",
                          "smoker",
                          "region_northeast",
                          "region_northwest",
                          "region_southeast",
                          "region_southwest"};
    } else {
      ds.feature_names = {"age", "sex", "bmi", "children", "smoker", "region"};
    }
  } else {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c != target_idx) ds.feature_names.push_back(header[c]);
    }
  }
  return ds;
}

SplitIndices split(Index n, std::uint64_t seed) {
  if (n < 4) {
    throw ConfigError("split: need at least 4 samples, got " +
                      std::to_string(n));
  }
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  Rng rng(seed);
  rng.shuffle(perm);

  const auto n_test = static_cast<std::size_t>(
      std::lround(0.20 * static_cast<double>(n)));
  const auto n_val = static_cast<std::size_t>(
      std::lround(0.16 * static_cast<double>(n)));

  SplitIndices out;
  out.seed = seed;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n_test; ++i) out.test.push_back(perm[pos++]);
  for (std::size_t i = 0; i < n_val; ++i) out.val.push_back(perm[pos++]);
  bool to_a = true;  // A takes the extra element when the count is odd
  while (pos < perm.size()) {
    (to_a ? out.train_a : out.train_b).push_back(perm[pos++]);
    to_a = !to_a;
  }
  return out;
}

std::uint64_t row_fingerprint(std::vector<Index> rows) {
  std::sort(rows.begin(), rows.end());
  std::uint64_t hash = 1469598103934665603ull;  // FNV-1a 64
  for (Index r : rows) {
    auto v = static_cast<std::uint64_t>(r);
    for (int byte = 0; byte < 8; ++byte) {
      hash ^= (v >> (8 * byte)) & 0xffu;
      hash *= 1099511628211ull;
    }
  }
  return hash;
}

Scaler fit_scaler(const Dataset& ds, const std::vector<Index>& train_rows) {
  if (train_rows.empty()) throw ConfigError("fit_scaler: no training rows");
  const Index d = ds.x.cols();
  const auto m = static_cast<double>(train_rows.size());

  Scaler s;
  s.feature_means = Eigen::VectorXd::Zero(d);
  s.feature_stds = Eigen::VectorXd::Ones(d);
  s.fitted_on = row_fingerprint(train_rows);

  for (Index j = 0; j < d; ++j) {
    double mean = 0.0;
    for (Index r : train_rows) mean += ds.x(r, j);
    mean /= m;
    double var = 0.0;
    for (Index r : train_rows) var += (ds.x(r, j) - mean) * (ds.x(r, j) - mean);
    var /= m;
    s.feature_means(j) = mean;
    const double sd = std::sqrt(var);
    if (sd > 0.0) {
      s.feature_stds(j) = sd;
    } else {
      s.constant_columns.push_back(j);  // std forced to 1
    }
  }

  double mean = 0.0;
  for (Index r : train_rows) mean += ds.y(r, 0);
  mean /= m;
  double var = 0.0;
  for (Index r : train_rows) var += (ds.y(r, 0) - mean) * (ds.y(r, 0) - mean);
  var /= m;
  s.target_mean = mean;
  const double sd = std::sqrt(var);
  if (sd > 0.0) {
    s.target_std = sd;
  } else {
    s.constant_columns.push_back(d);  // target position
  }
  return s;
}

Scaler identity_scaler(Index d) {
  Scaler s;
  s.feature_means = Eigen::VectorXd::Zero(d);
  s.feature_stds = Eigen::VectorXd::Ones(d);
  return s;
}

Matrix transform_features(const Scaler& s, const Matrix& x) {
  if (x.cols() != s.feature_means.size()) {
    throw ShapeError("transform_features: expected " +
                     std::to_string(s.feature_means.size()) +
                     " columns, got " + shape_of(x));
  }
  Matrix out = x;
  out.rowwise() -= s.feature_means.transpose();
  out.array().rowwise() /= s.feature_stds.transpose().array();
  return out;
}

Matrix transform_target(const Scaler& s, const Matrix& y) {
  return ((y.array() - s.target_mean) / s.target_std).matrix();
}

Matrix invert_target(const Scaler& s, const Matrix& y_std) {
  return (y_std.array() * s.target_std + s.target_mean).matrix();
}

Subset gather(const Dataset& ds, const std::vector<Index>& rows) {
  Subset out;
  out.x.resize(static_cast<Index>(rows.size()), ds.x.cols());
  out.y.resize(static_cast<Index>(rows.size()), 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.x.row(static_cast<Index>(i)) = ds.x.row(rows[i]);
    out.y(static_cast<Index>(i), 0) = ds.y(rows[i], 0);
  }
  return out;
}

Subset gather_scaled(const Dataset& ds, const Scaler& s,
                     const std::vector<Index>& rows) {
  Subset raw = gather(ds, rows);
  return {transform_features(s, raw.x), transform_target(s, raw.y)};
}

Subset concat(const Subset& a, const Subset& b) {
  if (a.x.cols() != b.x.cols()) {
    throw ShapeError("concat: feature mismatch " + shape_of(a.x) + " vs " +
                     shape_of(b.x));
  }
  Subset out;
  out.x.resize(a.n() + b.n(), a.x.cols());
  out.x.topRows(a.n()) = a.x;
  out.x.bottomRows(b.n()) = b.x;
  out.y.resize(a.n() + b.n(), 1);
  out.y.topRows(a.n()) = a.y;
  out.y.bottomRows(b.n()) = b.y;
  return out;
}

}  // namespace sbnn
