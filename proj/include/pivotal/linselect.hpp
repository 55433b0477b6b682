#pragma once

#include "pivotal/model_core.hpp"
#include "pivotal/types.hpp"

namespace pivotal {

/// A candidate approximation space S = range(X_J) with its complexity weight,
/// calibrated penalty and implied variance estimate.
struct ModelSpace {
  Support columns;          // J (coordinate) or union of the active groups
  std::vector<int> groups;  // active group ids, for group collections
  int dim = 0;              // rank of the submatrix
  double delta = 0.0;
  double pen = 0.0;     // 1.1 x pen_delta
  double sigma2 = 0.0;  // ||Y - P_S Y||^2 / (n - dim)
  Projector projector;
};

struct Collection {
  std::vector<ModelSpace> spaces;
  bool empty_flagged = false;
};

/// One ModelSpace per distinct nonempty support along the path with
/// |J| <= n / (3 log p); inadmissible spaces are dropped.
Collection build_collection_coordinate(const EstimatorPath& path,
                                       const Dataset& data);

/// Group version: active-group sets with |K| <= n / (3 log M) and total
/// covariate count <= n/2 - 1, weighted by delta_group.
Collection build_collection_group(const EstimatorPath& path,
                                  const GroupStructure& groups,
                                  const Dataset& data);

/// Every nonempty column subset up to max_card (exhaustive; p <= 12 only).
Collection build_collection_full(const Dataset& data, int max_card);

/// A model space over an explicit support, admissibility-checked; used by the
/// exhaustive benchmarks and the segmentation mapping.
ModelSpace make_model_space(const Dataset& data, const Support& J,
                            double delta, bool* admissible = nullptr);

struct CritParts {
  double fit = 0.0;      // ||Y - P_S X b||^2
  double approx = 0.0;   // (1/2) ||X b - P_S X b||^2
  double penalty = 0.0;  // pen(S) sigma2_S
  double total() const { return fit + approx + penalty; }
};

CritParts linselect_criterion(const FitResult& fit, const ModelSpace& space,
                              const Dataset& data);

/// Minimize over (lambda, S); ties go to the sparser fit, then the larger
/// lambda. An empty collection falls back to the zero space and flags the
/// report.
SelectionReport linselect_select(const EstimatorPath& path,
                                 const Collection& collection,
                                 const Dataset& data);

}  // namespace pivotal
