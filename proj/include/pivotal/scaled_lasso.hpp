#pragma once

#include "pivotal/lasso.hpp"
#include "pivotal/types.hpp"

namespace pivotal {

struct ScaledLassoOptions {
  double tol = 1e-9;
  int max_alternations = 500;
  // The joint certificate needs headroom below the alternation tolerance.
  LassoOptions lasso{1e-12, 1e-11, 100000};
};

/// Square-root / scaled Lasso: joint minimizer of
///   n s / 2 + ||Y - X b||^2 / (2 s) + lambda ||b||_1  over (b, s > 0),
/// by alternating the closed-form scale update s = ||Y - X b|| / sqrt(n)
/// with a Lasso step at effective penalty 2 s lambda. Profiling out s gives
/// the equivalent criterion sqrt(||Y - X b||^2) + lambda/sqrt(n) ||b||_1.
/// sigma_hat carries s; a collapsing scale is flagged degenerate.
FitResult sqrt_lasso_fit(const Dataset& data, double lambda,
                         const ScaledLassoOptions& opts = {});

/// l1-penalized negative log-likelihood
///   n log(s) + ||Y - X b||^2 / (2 s^2) + lambda ||b||_1 / s,
/// minimized in the convex reparametrization (phi, rho) = (b/s, 1/s).
FitResult penalized_loglik_fit(const Dataset& data, double lambda,
                               const ScaledLassoOptions& opts = {});

double sqrt_lasso_objective(const Dataset& data, double lambda,
                            const Vector& beta);
double huber_form_objective(const Dataset& data, double lambda,
                            const Vector& beta, double scale);
double loglik_objective(const Dataset& data, double lambda, const Vector& beta,
                        double scale);

/// Max stationarity residual of the (phi, rho) parametrization.
double loglik_stationarity_violation(const Dataset& data, double lambda,
                                     const Vector& beta, double scale);

}  // namespace pivotal
