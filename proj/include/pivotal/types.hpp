#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "pivotal/errors.hpp"

namespace pivotal {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Sorted set of column indices in [0, p).
class Support {
 public:
  Support() = default;
  explicit Support(std::vector<int> indices);
  static Support from_beta(const Vector& beta, double tol = 1e-12);

  const std::vector<int>& indices() const noexcept { return indices_; }
  int size() const noexcept { return static_cast<int>(indices_.size()); }
  bool empty() const noexcept { return indices_.empty(); }
  bool contains(int j) const;
  bool operator==(const Support& o) const { return indices_ == o.indices_; }
  bool operator<(const Support& o) const { return indices_ < o.indices_; }

 private:
  std::vector<int> indices_;
};

int intersection_size(const Support& a, const Support& b);

/// A fixed-design regression instance.
struct Dataset {
  Matrix X;
  Vector y;
  Vector column_norms;

  Dataset(Matrix X_, Vector y_);

  int n() const { return static_cast<int>(X.rows()); }
  int p() const { return static_cast<int>(X.cols()); }
};

/// Copy with unit-norm columns; zero columns are left untouched.
/// scales[j] is the factor the original column j was divided by, so a
/// coefficient beta on the normalized design maps back as beta_j / scales[j].
Dataset normalized_columns(const Dataset& data, Vector* scales = nullptr);

struct FitResult {
  Vector beta;
  Support support;
  std::vector<double> lambda;  // tuning value(s) used
  double rss = 0.0;
  std::optional<double> sigma_hat;
  double kkt_violation = 0.0;
  int sweeps = 0;
  bool degenerate = false;
  bool rank_deficient = false;
};

FitResult make_fit(Vector beta, std::vector<double> lambda, const Matrix& X,
                   const Vector& y);

struct EstimatorPath {
  std::vector<double> grid;  // strictly decreasing
  std::vector<FitResult> fits;

  void validate() const;
  int size() const { return static_cast<int>(grid.size()); }
};

/// Partition of {0..p-1} into nonempty groups.
struct GroupStructure {
  std::vector<std::vector<int>> groups;

  static GroupStructure from_labels(const std::vector<int>& labels);
  void validate(int p) const;
  int num_groups() const { return static_cast<int>(groups.size()); }
};

/// Criterion values per candidate plus the winner; shared by all selectors.
struct ReportRow {
  double lambda = 0.0;
  double crit = 0.0;
  std::vector<std::pair<std::string, double>> components;
  Support best_model;  // approximating space, when the selector uses one
  int support_size = 0;
};

struct SelectionReport {
  std::string method;
  std::vector<ReportRow> rows;
  int chosen_index = -1;
  double chosen_lambda = 0.0;
  Support chosen_support;  // support of the selected fit
  Support chosen_model;    // selected approximating space, when applicable
  double sigma2 = std::numeric_limits<double>::quiet_NaN();
  bool flagged = false;
  std::string flag_reason;
  std::vector<std::pair<std::string, double>> info;
};

}  // namespace pivotal
