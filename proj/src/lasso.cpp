#include "pivotal/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pivotal/kernels.hpp"

namespace pivotal {

namespace {

inline double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

// Coordinate descent with covariance updates: g = X'Y and q = X'X beta are
// maintained, Gram columns are materialized lazily for touched coordinates.
class CdState {
 public:
  CdState(const Matrix& X, const Vector& y)
      : X_(X), n_(static_cast<std::size_t>(X.rows())), p_(static_cast<int>(X.cols())) {
    g_ = X.transpose() * y;
    diag_.resize(p_);
    for (int j = 0; j < p_; ++j) {
      diag_[j] = kernels::nrm2sq(X.col(j).data(), n_);
    }
    q_ = Vector::Zero(p_);
    gram_.resize(p_);
    beta_ = Vector::Zero(p_);
  }

  void set_beta(const Vector& beta) {
    beta_ = beta;
    q_.setZero();
    for (int j = 0; j < p_; ++j) {
      if (beta_[j] != 0.0) {
        const Vector& col = gram_col(j);
        kernels::axpy(beta_[j], col.data(), q_.data(), static_cast<std::size_t>(p_));
      }
    }
  }

  // One pass over the given coordinates; returns the max coefficient change.
  template <class It>
  double sweep(It first, It last, double lambda) {
    double max_change = 0.0;
    for (It it = first; it != last; ++it) {
      int j = *it;
      if (diag_[j] <= 0.0) continue;
      double c = g_[j] - q_[j] + diag_[j] * beta_[j];
      double next = soft_threshold(c, 0.5 * lambda) / diag_[j];
      double change = next - beta_[j];
      if (change != 0.0) {
        const Vector& col = gram_col(j);
        kernels::axpy(change, col.data(), q_.data(), static_cast<std::size_t>(p_));
        beta_[j] = next;
        max_change = std::max(max_change, std::fabs(change));
      }
    }
    return max_change;
  }

  // Max stationarity residual using the maintained correlations.
  double kkt_violation(double lambda) const {
    double viol = 0.0;
    for (int j = 0; j < p_; ++j) {
      double corr = 2.0 * (g_[j] - q_[j]);
      if (beta_[j] != 0.0) {
        viol = std::max(viol, std::fabs(corr - lambda * (beta_[j] > 0 ? 1.0 : -1.0)));
      } else {
        viol = std::max(viol, std::fabs(corr) - lambda);
      }
    }
    return viol;
  }

  const Vector& beta() const { return beta_; }
  int p() const { return p_; }
  const Vector& g() const { return g_; }

 private:
  const Vector& gram_col(int j) {
    if (gram_[j].size() == 0) {
      gram_[j] = X_.transpose() * X_.col(j);
    }
    return gram_[j];
  }

  const Matrix& X_;
  std::size_t n_;
  int p_;
  Vector g_;
  Vector diag_;
  Vector q_;
  Vector beta_;
  std::vector<Vector> gram_;
};

// Descend to stationarity at one penalty level; returns the sweep count.
int solve_at(CdState& state, double lambda, const LassoOptions& opts) {
  const int p = state.p();
  std::vector<int> all(p);
  for (int j = 0; j < p; ++j) all[j] = j;

  int sweeps = 0;
  double viol = std::numeric_limits<double>::infinity();
  while (sweeps < opts.max_sweeps) {
    double change = state.sweep(all.begin(), all.end(), lambda);
    ++sweeps;
    // Inner active-set passes until the coefficients settle.
    std::vector<int> active;
    for (int j = 0; j < p; ++j) {
      if (state.beta()[j] != 0.0) active.push_back(j);
    }
    while (!active.empty() && sweeps < opts.max_sweeps) {
      double ch = state.sweep(active.begin(), active.end(), lambda);
      ++sweeps;
      if (ch < opts.tol_coef) break;
    }
    viol = state.kkt_violation(lambda);
    if (change < opts.tol_coef && viol < opts.tol_kkt) break;
  }
  if (viol >= opts.tol_kkt && sweeps >= opts.max_sweeps) {
    throw SolverError("lasso solver did not converge", viol);
  }
  return sweeps;
}

}  // namespace

FitResult lasso_fit(const Dataset& data, double lambda, const Vector* warm_start,
                    const LassoOptions& opts) {
  if (lambda < 0.0) throw DomainError("lasso_fit: lambda must be nonnegative");
  CdState state(data.X, data.y);
  if (warm_start) {
    if (warm_start->size() != data.p()) {
      throw DataError("warm start has wrong length");
    }
    state.set_beta(*warm_start);
  }
  int sweeps = solve_at(state, lambda, opts);

  FitResult fit = make_fit(state.beta(), {lambda}, data.X, data.y);
  fit.sweeps = sweeps;
  fit.kkt_violation = lasso_kkt_violation(data, lambda, fit.beta);
  return fit;
}

std::vector<double> default_lambda_grid(const Dataset& data, int size,
                                        double min_ratio) {
  if (size < 1) throw ConfigError("grid size must be positive");
  Vector g = data.X.transpose() * data.y;
  double lmax = 2.0 * kernels::max_abs(g.data(), static_cast<std::size_t>(g.size()));
  if (lmax <= 0.0) return {0.0};
  if (size == 1) return {lmax};
  std::vector<double> grid(size);
  double log_max = std::log(lmax);
  double log_min = std::log(lmax * min_ratio);
  for (int i = 0; i < size; ++i) {
    grid[i] = std::exp(log_max + (log_min - log_max) * i / (size - 1));
  }
  return grid;
}

EstimatorPath lasso_path(const Dataset& data, std::vector<double> grid,
                         const LassoOptions& opts) {
  if (grid.empty()) grid = default_lambda_grid(data);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] < grid[i - 1])) {
      throw ConfigError("lambda grid must be strictly decreasing");
    }
  }
  // One descent state across the whole grid: warm starts plus the cached
  // Gram columns carry over between penalty levels.
  EstimatorPath path;
  path.grid = grid;
  path.fits.reserve(grid.size());
  CdState state(data.X, data.y);
  for (double lambda : grid) {
    int sweeps = solve_at(state, lambda, opts);
    FitResult fit = make_fit(state.beta(), {lambda}, data.X, data.y);
    fit.sweeps = sweeps;
    fit.kkt_violation = lasso_kkt_violation(data, lambda, fit.beta);
    path.fits.push_back(std::move(fit));
  }
  return path;
}

double lasso_objective(const Dataset& data, double lambda, const Vector& beta) {
  Vector r = data.y - data.X * beta;
  return kernels::nrm2sq(r.data(), static_cast<std::size_t>(r.size())) +
         lambda * beta.lpNorm<1>();
}

double lasso_kkt_violation(const Dataset& data, double lambda,
                           const Vector& beta, double support_tol) {
  Vector r = data.y - data.X * beta;
  double viol = 0.0;
  for (int j = 0; j < data.p(); ++j) {
    double corr = 2.0 * kernels::dot(data.X.col(j).data(), r.data(),
                                     static_cast<std::size_t>(data.n()));
    if (std::fabs(beta[j]) > support_tol) {
      viol = std::max(viol, std::fabs(corr - lambda * (beta[j] > 0 ? 1.0 : -1.0)));
    } else {
      viol = std::max(viol, std::fabs(corr) - lambda);
    }
  }
  return std::max(viol, 0.0);
}

}  // namespace pivotal
