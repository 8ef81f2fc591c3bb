#include "sbnn/model_io.hpp"

#include <fstream>

#include <json.hpp>

namespace sbnn {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  // Row-major storage makes the flat view the row-major serialization.
  return std::vector<double>(m.data(), m.data() + m.size());
}

Matrix matrix_from_json(const json& j, Index rows, Index cols,
                        const char* name) {
  const auto values = j.get<std::vector<double>>();
  if (static_cast<Index>(values.size()) != rows * cols) {
    throw IngestError(std::string("model file: '") + name + "' has " +
                      std::to_string(values.size()) + " entries, expected " +
                      std::to_string(rows * cols));
  }
  Matrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

}  // namespace

void save_model(const ModelFile& model, const std::string& path) {
  require_finite(model.params.w1, "save_model (w1)");
  require_finite(model.params.w2, "save_model (w2)");
  json j;
  j["d"] = model.params.d;
  j["h"] = model.params.h;
  j["w1"] = matrix_to_json(model.params.w1);
  j["w2"] = matrix_to_json(model.params.w2);
  j["scaler"] = {
      {"feature_means", std::vector<double>(model.scaler.feature_means.begin(),
                                            model.scaler.feature_means.end())},
      {"feature_stds", std::vector<double>(model.scaler.feature_stds.begin(),
                                           model.scaler.feature_stds.end())},
      {"target_mean", model.scaler.target_mean},
      {"target_std", model.scaler.target_std},
      {"fitted_on", std::to_string(model.scaler.fitted_on)},
      {"constant_columns", model.scaler.constant_columns},
  };
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing '" + path + "'");
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IngestError("model file '" + path + "': " + e.what());
  }
  try {
    ModelFile model;
    model.params.d = j.at("d").get<Index>();
    model.params.h = j.at("h").get<Index>();
    model.params.w1 = matrix_from_json(j.at("w1"), model.params.d + 1,
                                       model.params.h, "w1");
    model.params.w2 =
        matrix_from_json(j.at("w2"), model.params.h + 1, 1, "w2");
    const json& s = j.at("scaler");
    const auto means = s.at("feature_means").get<std::vector<double>>();
    const auto stds = s.at("feature_stds").get<std::vector<double>>();
    model.scaler.feature_means =
        Eigen::Map<const Eigen::VectorXd>(means.data(), means.size());
    model.scaler.feature_stds =
        Eigen::Map<const Eigen::VectorXd>(stds.data(), stds.size());
    model.scaler.target_mean = s.at("target_mean").get<double>();
    model.scaler.target_std = s.at("target_std").get<double>();
    model.scaler.fitted_on =
        std::stoull(s.at("fitted_on").get<std::string>());
    model.scaler.constant_columns =
        s.at("constant_columns").get<std::vector<Index>>();
    return model;
  } catch (const json::exception& e) {
    throw IngestError("model file '" + path + "': " + e.what());
  }
}

Matrix predict(const ModelFile& model, const Matrix& x_raw) {
  const Matrix x = transform_features(model.scaler, x_raw);
  return invert_target(model.scaler, forward(model.params, x).yhat);
}

}  // namespace sbnn
