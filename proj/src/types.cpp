#include "sbnn/types.hpp"

#include <cmath>
#include <limits>

namespace sbnn {

void require_finite(const Matrix& m, const char* context) {
  if (m.allFinite()) return;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j))) {
        throw NumericError(std::string(context) + ": non-finite entry at (" +
                           std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ConfigError("Rng::below: n must be positive");
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return x % n;
}

}  // namespace sbnn
