#pragma once

#include "sbnn/baseline.hpp"
#include "sbnn/splitboost.hpp"

namespace sbnn {

// Random two-partition instance for derivative verification. Resampled
// until every pre-activation sits at least `margin` away from the relu
// kink on both partitions and both activation matrices have full column
// rank, so a finite-difference step cannot flip the activation pattern.
struct CheckInstance {
  Subset a, b;
  Matrix w1;  // (d+1) x h
  Index d = 0, h = 0;
  std::uint64_t seed = 0;
};

CheckInstance make_check_instance(std::uint64_t seed, Index na = 8,
                                  Index nb = 8, Index d = 3, Index h = 4,
                                  double margin = 1e-2);

// inf-norm relative discrepancy between two same-shape matrices.
double rel_err_inf(const Matrix& lhs, const Matrix& rhs);

// w1_gradient vs central differences of bilevel_cost (inner solves
// recomputed per perturbation).
double check_w1_gradient(const CheckInstance& inst, double step = 1e-5);

// Finite differences of the inner solve w2*(w1) for one partition.
Matrix fd_w2_jacobian(const Matrix& w1, const Subset& part, double step);

// Analytic Jacobian vs finite differences, both partitions; returns the
// max entrywise error scaled by (1 + |entry|).
double check_w2_jacobian(const CheckInstance& inst, double step = 1e-6);

// baseline_gradients vs central differences of baseline_cost; max of the
// w1 and w2 relative errors.
double check_baseline_gradients(const CheckInstance& inst, double lambda,
                                double step = 1e-5);

struct GradCheckReport {
  double w1_gradient_max_rel_err = 0.0;
  double w2_jacobian_max_scaled_err = 0.0;
  double baseline_max_rel_err = 0.0;
  int instances = 0;
};

// Worst case over `instances` seeded instances (seed, seed+1, ...).
GradCheckReport run_gradcheck(std::uint64_t seed, int instances = 10);

inline constexpr double kW1GradientTol = 1e-4;
inline constexpr double kW2JacobianTol = 1e-5;
inline constexpr double kBaselineGradientTol = 1e-6;

}  // namespace sbnn
