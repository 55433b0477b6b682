#pragma once

#include "pivotal/types.hpp"

namespace pivotal {

// Criterion convention, used everywhere: ||Y - X beta||^2 + lambda ||beta||_1.
// Stationarity: active j has 2 X_j'(Y - X beta) = lambda sign(beta_j),
// inactive j has |2 X_j'(Y - X beta)| <= lambda. The null threshold is
// lambda >= 2 ||X'Y||_inf and orthonormal designs soft-threshold at lambda/2.

struct LassoOptions {
  double tol_coef = 1e-10;
  double tol_kkt = 1e-9;
  int max_sweeps = 100000;
};

FitResult lasso_fit(const Dataset& data, double lambda,
                    const Vector* warm_start = nullptr,
                    const LassoOptions& opts = {});

/// 100 log-spaced points from 2||X'Y||_inf down to min_ratio of it.
std::vector<double> default_lambda_grid(const Dataset& data, int size = 100,
                                        double min_ratio = 1e-3);

/// Warm-started fits along a strictly decreasing grid (auto-generated when
/// empty).
EstimatorPath lasso_path(const Dataset& data, std::vector<double> grid = {},
                         const LassoOptions& opts = {});

double lasso_objective(const Dataset& data, double lambda, const Vector& beta);

/// Stationarity residual, recomputed from a fresh residual vector.
double lasso_kkt_violation(const Dataset& data, double lambda,
                           const Vector& beta, double support_tol = 1e-12);

}  // namespace pivotal
