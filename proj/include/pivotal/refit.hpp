#pragma once

#include <string>

#include "pivotal/types.hpp"

namespace pivotal {

/// Least squares restricted to the support columns (minimum-norm solution,
/// rank-deficient submatrices flagged). Empty support gives the zero fit.
FitResult gauss_lasso_refit(const Dataset& data, const Support& support,
                            double rank_tol = 1e-10);

enum class ThresholdKind { hard, scad };

/// Per-coordinate rule for identity designs. hard: y 1{|y| >= lambda}.
/// scad: exact minimizer of (y - b)^2 + p_lambda(|b|) with the scad penalty
/// derivative p'(x) = lambda 1{x<=lambda} + (a lambda - x)_+ 1{x>lambda}/(a-1),
/// found over the finite set of per-region stationary points and boundaries.
double scalar_threshold(ThresholdKind kind, double y, double lambda,
                        double a = 3.0);

ThresholdKind threshold_kind_from_name(const std::string& name);

}  // namespace pivotal
