#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace sbnn {

// Dense row-major carrier for every 2-D quantity in the library: inputs,
// targets, weights, activations, gradients, Jacobians.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeError : Error {
  using Error::Error;
};
struct NumericError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct IngestError : Error {
  using Error::Error;
};
struct ContractError : Error {
  using Error::Error;
};

inline std::string shape_of(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_finite(const Matrix& m, const char* context);

// One feature block with its targets (x: n x d, y: n x 1).
struct Subset {
  Matrix x;
  Matrix y;
  Index n() const { return x.rows(); }
};

// vec(W) stacks columns: vec(W)[r + rows*c] == W(r, c). The hidden-layer
// Jacobian indexes its columns with this convention.
inline Index vec_index(Index r, Index c, Index rows) { return r + rows * c; }

// Seeded generator with pinned sampling semantics. Only raw
// std::mt19937_64 output is consumed; the mappings to uniforms and
// bounded integers are spelled out here so results do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double canonical() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * canonical();
  }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n);

  // Fisher-Yates using below(); last position first.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace sbnn
