#include "pivotal/refit.hpp"

#include <Eigen/QR>
#include <cmath>
#include <limits>

namespace pivotal {

FitResult gauss_lasso_refit(const Dataset& data, const Support& support,
                            double rank_tol) {
  if (support.size() > data.n()) {
    throw DomainError("gauss_lasso_refit: support larger than sample size");
  }
  Vector beta = Vector::Zero(data.p());
  bool rank_deficient = false;
  if (!support.empty()) {
    Matrix S(data.n(), support.size());
    for (int j = 0; j < support.size(); ++j) {
      S.col(j) = data.X.col(support.indices()[j]);
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(S);
    cod.setThreshold(rank_tol);
    Vector b = cod.solve(data.y);
    rank_deficient = cod.rank() < support.size();
    for (int j = 0; j < support.size(); ++j) beta[support.indices()[j]] = b[j];
  }
  FitResult fit = make_fit(std::move(beta), {}, data.X, data.y);
  fit.rank_deficient = rank_deficient;
  return fit;
}

namespace {

double scad_minimizer(double y, double lambda, double a) {
  double ay = std::fabs(y);
  double sgn = y >= 0.0 ? 1.0 : -1.0;
  // p(x) on [0, inf): lambda x on [0,l]; (2 a l x - x^2 - l^2)/(2(a-1)) on
  // (l, a l]; l^2 (a+1)/2 beyond.
  auto pen = [&](double x) {
    if (x <= lambda) return lambda * x;
    if (x <= a * lambda) {
      return (2.0 * a * lambda * x - x * x - lambda * lambda) / (2.0 * (a - 1.0));
    }
    return lambda * lambda * (a + 1.0) / 2.0;
  };
  auto crit = [&](double x) { return (ay - x) * (ay - x) + pen(x); };

  double best_x = 0.0;
  double best = crit(0.0);
  auto consider = [&](double x, double lo, double hi) {
    if (x < lo || x > hi) return;
    double c = crit(x);
    if (c < best) {
      best = c;
      best_x = x;
    }
  };
  // Stationary points per region plus the boundaries.
  consider(ay - 0.5 * lambda, 0.0, lambda);
  consider((2.0 * ay * (a - 1.0) - a * lambda) / (2.0 * a - 3.0), lambda, a * lambda);
  consider(ay, a * lambda, std::numeric_limits<double>::infinity());
  consider(lambda, 0.0, a * lambda);
  consider(a * lambda, lambda, std::numeric_limits<double>::infinity());
  return sgn * best_x;
}

}  // namespace

double scalar_threshold(ThresholdKind kind, double y, double lambda, double a) {
  if (lambda < 0.0) throw DomainError("scalar_threshold: lambda must be nonnegative");
  switch (kind) {
    case ThresholdKind::hard:
      return std::fabs(y) >= lambda ? y : 0.0;
    case ThresholdKind::scad:
      if (!(a > 2.0)) throw DomainError("scalar_threshold: scad needs a > 2");
      return scad_minimizer(y, lambda, a);
  }
  throw DomainError("scalar_threshold: unknown kind");
}

ThresholdKind threshold_kind_from_name(const std::string& name) {
  if (name == "hard") return ThresholdKind::hard;
  if (name == "scad") return ThresholdKind::scad;
  throw UsageError("unknown threshold kind: " + name);
}

}  // namespace pivotal
