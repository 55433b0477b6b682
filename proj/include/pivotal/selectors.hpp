#pragma once

#include <functional>

#include "pivotal/penalties.hpp"
#include "pivotal/types.hpp"

namespace pivotal {

/// Fits a path on the given rows of the full data; every invocation must
/// return fits aligned on one shared grid.
using PathFactory = std::function<EstimatorPath(const Dataset&)>;

SelectionReport vfold_cv_select(const PathFactory& factory, const Dataset& data,
                                int v, std::uint64_t seed);

/// Same with caller-provided folds (a partition of {0..n-1}).
SelectionReport vfold_cv_select_folds(const PathFactory& factory,
                                      const Dataset& data,
                                      const std::vector<std::vector<int>>& folds);

SelectionReport holdout_select(const PathFactory& factory, const Dataset& data,
                               double split_ratio, std::uint64_t seed);

SelectionReport holdout_select_split(const PathFactory& factory,
                                     const Dataset& data,
                                     const std::vector<int>& train_rows,
                                     const std::vector<int>& val_rows);

/// n log(rss/n) + log(n) ||beta||_0 over candidates with ||beta||_0 <= n/2;
/// additive likelihood constants dropped. Zero-rss candidates are excluded
/// and flagged.
SelectionReport modified_bic_select(const EstimatorPath& path,
                                    const Dataset& data);

double modified_bic_criterion(int n, double rss, int support_size);

/// rss + pen(kind) with sigma2 estimated once from the full-design residual.
SelectionReport plugin_penalty_select(const EstimatorPath& path,
                                      const Dataset& data, PenaltyKind kind);

struct SlopePoint {
  int dim = 0;
  double rss = 0.0;
  double shape = 0.0;  // penalty shape value at this dimension
};

struct SlopeOptions {
  int grid_size = 60;
  double span_low = 1e-3;
  double span_high = 1e3;
};

/// Dimension-jump calibration: scan multipliers, locate the largest jump in
/// the selected dimension, select with twice that multiplier.
SelectionReport slope_heuristic_select(std::vector<SlopePoint> points,
                                       const SlopeOptions& opts = {});

/// Exhaustive penalized least squares over column subsets with
/// 2|J|(1 + log(p/|J|)) <= n plus the full-range model (p <= 12).
SelectionReport bm_select_exhaustive(const Dataset& data, double sigma2);

/// Exponentially weighted mixture of projections over the same collection;
/// returns the aggregated fitted vector.
Vector lb_aggregate_exhaustive(const Dataset& data, double sigma2,
                               std::vector<double>* weights_out = nullptr,
                               std::vector<Support>* models_out = nullptr);

/// Variance-free exhaustive selector: argmin of
/// ||Y - P_S Y||^2 (1 + pen(S)/(n - dim S)) over |J| <= (n-1)/4 (p <= 12).
SelectionReport bgh_select_exhaustive(const Dataset& data);

}  // namespace pivotal
