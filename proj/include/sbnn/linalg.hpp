#pragma once

#include <functional>

#include "sbnn/types.hpp"

namespace sbnn {

// Relative pivot threshold used everywhere a numerical rank is decided.
inline constexpr double kRankThreshold = 1e-12;

// Shape-checked product a * b.
Matrix matmul(const Matrix& a, const Matrix& b);

// Minimizer of ||y - a*w||_2 for a single-column y. Computed through a
// rank-revealing complete orthogonal decomposition, never through the
// normal equations: rank-deficient systems (dead activation columns)
// get the minimum-norm solution, with rank decided by a pivot threshold
// of kRankThreshold times the largest pivot.
Matrix least_squares(const Matrix& a, const Matrix& y);

// Entrywise central differences (f(x + h*e) - f(x - h*e)) / (2h).
// A non-finite evaluation of f raises NumericError naming the perturbed
// entry.
Matrix finite_diff_gradient(const std::function<double(const Matrix&)>& f,
                            const Matrix& at, double step);

}  // namespace sbnn
