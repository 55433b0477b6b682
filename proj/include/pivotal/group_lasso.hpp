#pragma once

#include "pivotal/types.hpp"

namespace pivotal {

// Criterion: ||Y - X beta||^2 + sum_k lambda_k ||beta^{G_k}||_2.
// Block stationarity: active k has 2 X_Gk'(Y - X beta) = lambda_k b_k/||b_k||,
// inactive k has ||2 X_Gk'(Y - X beta)|| <= lambda_k.

struct GroupLassoOptions {
  double tol_coef = 1e-10;
  double tol_kkt = 1e-9;
  int max_sweeps = 100000;
};

FitResult group_lasso_fit(const Dataset& data, const GroupStructure& groups,
                          const std::vector<double>& lambdas,
                          const GroupLassoOptions& opts = {});

double group_lasso_objective(const Dataset& data, const GroupStructure& groups,
                             const std::vector<double>& lambdas,
                             const Vector& beta);

double group_lasso_kkt_violation(const Dataset& data,
                                 const GroupStructure& groups,
                                 const std::vector<double>& lambdas,
                                 const Vector& beta, double support_tol = 1e-12);

}  // namespace pivotal
