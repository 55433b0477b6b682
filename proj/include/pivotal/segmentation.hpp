#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pivotal/types.hpp"

namespace pivotal {

// Breakpoint convention: position b in {1..n-1} splits between y[b-1] and
// y[b] (0-based), so (0,0,0,5,5,5) with one break has breakpoint 3.

/// Exact least-squares partitions for every breakpoint count q = 0..q_max.
struct SegmentationFamily {
  std::vector<std::vector<int>> breakpoints_by_q;
  std::vector<double> rss_by_q;

  Vector fitted_for(int q, const Vector& y) const;
};

SegmentationFamily dp_best_partitions(const Vector& y, int q_max);

struct Segmentation {
  std::vector<int> breakpoints;
  Vector fitted;
  int q = 0;
  double rss = 0.0;
  double sigma2 = 0.0;  // plug-in estimate, when one was used
  std::vector<std::pair<double, double>> criterion;  // (q or lambda, value)
  bool flagged = false;
  std::string flag_reason;
};

/// argmin over q of rss(q) * (1 + K pen(q)) with pen from seg_pen_solve,
/// K = 1.1. Zero-rss candidates win immediately and are flagged.
Segmentation segment_select_bgh(const Vector& y, int q_max = -1);

/// argmin of rss(q) + (q+1)(2 log(n/(q+1)) + 5) sigma2.
Segmentation segment_select_lebarbier(const Vector& y, int q_max, double sigma2);

/// Difference-based variance estimate sum (Y_2i - Y_2i-1)^2 / n; odd n drops
/// the last observation and reports it through odd_flagged.
double variance_plugin(const Vector& y, bool* odd_flagged = nullptr);

/// Dimension-jump calibration applied to the partition family.
Segmentation segment_select_slope(const Vector& y, int q_max);

/// Fused-lasso path tuned by the projection criterion over the implied
/// segment spaces (variation supports weighted coordinate-style).
Segmentation segment_select_tv_linselect(const Vector& y,
                                         std::vector<double> grid = {});

/// Exact minimizer of ||y - b||^2 + lambda sum |b_{t+1} - b_t|.
Vector fused_lasso_1d(const Vector& y, double lambda);

/// Running-sum subgradient residual; zero at the exact solution.
double tv_kkt_violation(const Vector& y, double lambda, const Vector& beta);

/// Smallest lambda whose solution is constant.
double tv_lambda_max(const Vector& y);

double tv_objective(const Vector& y, double lambda, const Vector& beta);

/// Certified solutions on a decreasing grid (default: 50 log-spaced points
/// from lambda_max down to 1e-3 of it).
EstimatorPath tv_path(const Vector& y, std::vector<double> grid = {});

std::vector<int> tv_breakpoints(const Vector& beta, double tol = 1e-9);

}  // namespace pivotal
