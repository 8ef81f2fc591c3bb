#include "sbnn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "sbnn/linalg.hpp"

namespace sbnn {

namespace {

Matrix random_matrix(Rng& rng, Index rows, Index cols, double lo, double hi) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      m(i, j) = rng.uniform(lo, hi);
    }
  }
  return m;
}

bool acceptable(const Matrix& w1, const Subset& part, Index h, double margin) {
  const auto [z1, x1aug] = hidden_pass(w1, augmented(part.x));
  if (z1.cwiseAbs().minCoeff() < margin) return false;
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(x1aug);
  cod.setThreshold(kRankThreshold);
  return cod.rank() == h + 1;
}

}  // namespace

CheckInstance make_check_instance(std::uint64_t seed, Index na, Index nb,
                                  Index d, Index h, double margin) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    CheckInstance inst;
    inst.seed = seed;
    inst.d = d;
    inst.h = h;
    inst.a.x = random_matrix(rng, na, d, -1.0, 1.0);
    inst.a.y = random_matrix(rng, na, 1, -1.0, 1.0);
    inst.b.x = random_matrix(rng, nb, d, -1.0, 1.0);
    inst.b.y = random_matrix(rng, nb, 1, -1.0, 1.0);
    inst.w1 = random_matrix(rng, d + 1, h, -1.0, 1.0);
    if (acceptable(inst.w1, inst.a, h, margin) &&
        acceptable(inst.w1, inst.b, h, margin)) {
      return inst;
    }
  }
  throw Error("make_check_instance: no margin-respecting instance found");
}

double rel_err_inf(const Matrix& lhs, const Matrix& rhs) {
  const double scale =
      std::max({lhs.lpNorm<Eigen::Infinity>(), rhs.lpNorm<Eigen::Infinity>(),
                1e-300});
  return (lhs - rhs).lpNorm<Eigen::Infinity>() / scale;
}

double check_w1_gradient(const CheckInstance& inst, double step) {
  const Matrix analytic = w1_gradient(inst.w1, inst.a, inst.b);
  const Matrix numeric = finite_diff_gradient(
      [&](const Matrix& w1) { return bilevel_cost(w1, inst.a, inst.b); },
      inst.w1, step);
  return rel_err_inf(analytic, numeric);
}

Matrix fd_w2_jacobian(const Matrix& w1, const Subset& part, double step) {
  const Index d1 = w1.rows();
  const Index h = w1.cols();
  Matrix jac(h + 1, d1 * h);
  Matrix perturbed = w1;
  for (Index c = 0; c < h; ++c) {
    for (Index r = 0; r < d1; ++r) {
      const double saved = perturbed(r, c);
      perturbed(r, c) = saved + step;
      const auto [zp, xp] = hidden_pass(perturbed, augmented(part.x));
      const Matrix wp = fit_w2(xp, part.y);
      perturbed(r, c) = saved - step;
      const auto [zm, xm] = hidden_pass(perturbed, augmented(part.x));
      const Matrix wm = fit_w2(xm, part.y);
      perturbed(r, c) = saved;
      jac.col(vec_index(r, c, d1)) = (wp - wm) / (2.0 * step);
    }
  }
  return jac;
}

double check_w2_jacobian(const CheckInstance& inst, double step) {
  double worst = 0.0;
  for (const Subset* part : {&inst.a, &inst.b}) {
    ForwardCache cache;
    auto hidden = hidden_pass(inst.w1, augmented(part->x));
    cache.z1 = hidden.first;
    cache.x1aug = hidden.second;
    const Matrix w2star = fit_w2(cache.x1aug, part->y);
    cache.yhat = cache.x1aug * w2star;

    const Matrix analytic =
        w2_jacobian(augmented(part->x), cache, w2star, part->y);
    const Matrix numeric = fd_w2_jacobian(inst.w1, *part, step);
    const Matrix denom = (analytic.cwiseAbs().array() + 1.0).matrix();
    worst = std::max(
        worst, (analytic - numeric).cwiseAbs().cwiseQuotient(denom).maxCoeff());
  }
  return worst;
}

double check_baseline_gradients(const CheckInstance& inst, double lambda,
                                double step) {
  NetworkParams params;
  params.d = inst.d;
  params.h = inst.h;
  params.w1 = inst.w1;
  Rng rng(inst.seed ^ 0x9e3779b97f4a7c15ull);
  params.w2 = random_matrix(rng, inst.h + 1, 1, -1.0, 1.0);

  const auto [g1, g2] =
      baseline_gradients(params, inst.a.x, inst.a.y, lambda);

  NetworkParams probe = params;
  const Matrix fd1 = finite_diff_gradient(
      [&](const Matrix& w1) {
        probe.w1 = w1;
        return baseline_cost(probe, inst.a.x, inst.a.y, lambda);
      },
      params.w1, step);
  probe.w1 = params.w1;
  const Matrix fd2 = finite_diff_gradient(
      [&](const Matrix& w2) {
        probe.w2 = w2;
        return baseline_cost(probe, inst.a.x, inst.a.y, lambda);
      },
      params.w2, step);

  return std::max(rel_err_inf(g1, fd1), rel_err_inf(g2, fd2));
}

GradCheckReport run_gradcheck(std::uint64_t seed, int instances) {
  GradCheckReport report;
  report.instances = instances;
  for (int i = 0; i < instances; ++i) {
    const CheckInstance inst = make_check_instance(seed + i);
    report.w1_gradient_max_rel_err =
        std::max(report.w1_gradient_max_rel_err, check_w1_gradient(inst));
    report.w2_jacobian_max_scaled_err =
        std::max(report.w2_jacobian_max_scaled_err, check_w2_jacobian(inst));
    report.baseline_max_rel_err = std::max(
        report.baseline_max_rel_err, check_baseline_gradients(inst, 0.01));
  }
  return report;
}

}  // namespace sbnn
