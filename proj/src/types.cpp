#include "pivotal/types.hpp"

#include <algorithm>
#include <cmath>

#include "pivotal/kernels.hpp"

namespace pivotal {

Support::Support(std::vector<int> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  if (!indices_.empty() && indices_.front() < 0) {
    throw DomainError("support indices must be nonnegative");
  }
}

Support Support::from_beta(const Vector& beta, double tol) {
  std::vector<int> idx;
  for (int j = 0; j < beta.size(); ++j) {
    if (std::fabs(beta[j]) > tol) idx.push_back(j);
  }
  return Support(std::move(idx));
}

bool Support::contains(int j) const {
  return std::binary_search(indices_.begin(), indices_.end(), j);
}

int intersection_size(const Support& a, const Support& b) {
  int count = 0;
  auto it = a.indices().begin();
  auto jt = b.indices().begin();
  while (it != a.indices().end() && jt != b.indices().end()) {
    if (*it < *jt) {
      ++it;
    } else if (*jt < *it) {
      ++jt;
    } else {
      ++count;
      ++it;
      ++jt;
    }
  }
  return count;
}

Dataset::Dataset(Matrix X_, Vector y_) : X(std::move(X_)), y(std::move(y_)) {
  if (X.rows() < 2) throw DataError("need at least 2 observations");
  if (X.cols() < 1) throw DataError("need at least 1 covariate");
  if (y.size() != X.rows()) {
    throw DataError("response length does not match design rows");
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw DataError("non-finite entries in data");
  }
  column_norms.resize(X.cols());
  for (int j = 0; j < X.cols(); ++j) column_norms[j] = X.col(j).norm();
}

Dataset normalized_columns(const Dataset& data, Vector* scales) {
  Matrix X = data.X;
  Vector s = Vector::Ones(data.p());
  for (int j = 0; j < data.p(); ++j) {
    double nj = data.column_norms[j];
    if (nj > 0.0) {
      X.col(j) /= nj;
      s[j] = nj;
    }
  }
  if (scales) *scales = s;
  return Dataset(std::move(X), data.y);
}

FitResult make_fit(Vector beta, std::vector<double> lambda, const Matrix& X,
                   const Vector& y) {
  FitResult fit;
  fit.support = Support::from_beta(beta);
  fit.beta = std::move(beta);
  fit.lambda = std::move(lambda);
  Vector r = y - X * fit.beta;
  fit.rss = kernels::nrm2sq(r.data(), static_cast<std::size_t>(r.size()));
  return fit;
}

void EstimatorPath::validate() const {
  if (grid.size() != fits.size()) {
    throw DataError("path grid and fits have different lengths");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] < grid[i - 1])) {
      throw DataError("path grid must be strictly decreasing");
    }
  }
}

GroupStructure GroupStructure::from_labels(const std::vector<int>& labels) {
  int m = 0;
  for (int l : labels) {
    if (l < 0) throw DataError("group labels must be nonnegative");
    m = std::max(m, l + 1);
  }
  GroupStructure gs;
  gs.groups.resize(m);
  for (std::size_t j = 0; j < labels.size(); ++j) {
    gs.groups[labels[j]].push_back(static_cast<int>(j));
  }
  gs.validate(static_cast<int>(labels.size()));
  return gs;
}

void GroupStructure::validate(int p) const {
  std::vector<char> seen(p, 0);
  for (const auto& g : groups) {
    if (g.empty()) throw DataError("empty group in partition");
    for (int j : g) {
      if (j < 0 || j >= p) throw DataError("group index out of range");
      if (seen[j]) throw DataError("group blocks must be disjoint");
      seen[j] = 1;
    }
  }
  for (int j = 0; j < p; ++j) {
    if (!seen[j]) throw DataError("groups must cover all columns");
  }
}

}  // namespace pivotal
