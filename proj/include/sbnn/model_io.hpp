#pragma once

#include <string>

#include "sbnn/data.hpp"
#include "sbnn/model.hpp"

namespace sbnn {

// Deployable artifact: weights plus the scaler they were trained under.
struct ModelFile {
  NetworkParams params;
  Scaler scaler;
};

// Single JSON document {d, h, w1 (row-major), w2, scaler}. The save/load
// round trip reproduces every double bit-exactly.
void save_model(const ModelFile& model, const std::string& path);
ModelFile load_model(const std::string& path);

// Standardize, forward, and map predictions back to target units.
Matrix predict(const ModelFile& model, const Matrix& x_raw);

}  // namespace sbnn
