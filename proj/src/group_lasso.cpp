#include "pivotal/group_lasso.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "pivotal/kernels.hpp"

namespace pivotal {

namespace {

struct Block {
  std::vector<int> cols;
  Matrix Xk;      // n x |G_k|
  Matrix evec;    // eigenvectors of Xk'Xk
  Vector eval;    // eigenvalues, ascending
};

// Solve min_b ||v - Xk b||^2 + lam ||b|| given c = 2 Xk'v in the block's
// eigenbasis: (2 L + lam/t) z = c_hat with t = ||z||, unique positive root.
Vector block_solve(const Block& blk, const Vector& c, double lam) {
  Vector c_hat = blk.evec.transpose() * c;
  auto psi = [&](double t) {
    double s = 0.0;
    for (int i = 0; i < c_hat.size(); ++i) {
      double denom = 2.0 * blk.eval[i] * t + lam;
      if (denom <= 0.0) continue;  // zero eigenvalue with zero coefficient
      double z = c_hat[i] * t / denom;
      s += z * z;
    }
    return std::sqrt(s);
  };
  double hi = 1.0;
  int guard = 0;
  while (psi(hi) > hi) {
    hi *= 2.0;
    if (++guard > 200) throw SolverError("group block root expansion failed", hi);
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (psi(mid) > mid) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double t = 0.5 * (lo + hi);
  Vector z(c_hat.size());
  for (int i = 0; i < c_hat.size(); ++i) {
    double denom = 2.0 * blk.eval[i] * t + lam;
    z[i] = denom > 0.0 ? c_hat[i] * t / denom : 0.0;
  }
  return blk.evec * z;
}

}  // namespace

FitResult group_lasso_fit(const Dataset& data, const GroupStructure& groups,
                          const std::vector<double>& lambdas,
                          const GroupLassoOptions& opts) {
  groups.validate(data.p());
  const int M = groups.num_groups();
  if (static_cast<int>(lambdas.size()) != M) {
    throw ConfigError("group_lasso_fit: one lambda per group required");
  }
  for (double l : lambdas) {
    if (l < 0.0) throw DomainError("group_lasso_fit: lambdas must be nonnegative");
  }

  std::vector<Block> blocks(M);
  for (int k = 0; k < M; ++k) {
    Block& blk = blocks[k];
    blk.cols = groups.groups[k];
    blk.Xk.resize(data.n(), static_cast<int>(blk.cols.size()));
    for (std::size_t j = 0; j < blk.cols.size(); ++j) {
      blk.Xk.col(static_cast<int>(j)) = data.X.col(blk.cols[j]);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(blk.Xk.transpose() * blk.Xk);
    blk.evec = es.eigenvectors();
    blk.eval = es.eigenvalues();
  }

  Vector beta = Vector::Zero(data.p());
  Vector r = data.y;  // residual Y - X beta
  int sweeps = 0;
  double viol = std::numeric_limits<double>::infinity();
  while (sweeps < opts.max_sweeps) {
    double max_change = 0.0;
    for (int k = 0; k < M; ++k) {
      Block& blk = blocks[k];
      const int gsize = static_cast<int>(blk.cols.size());
      Vector bk(gsize);
      for (int j = 0; j < gsize; ++j) bk[j] = beta[blk.cols[j]];
      Vector rk = r + blk.Xk * bk;  // residual with this block removed
      Vector c = 2.0 * (blk.Xk.transpose() * rk);
      Vector bk_next;
      if (c.norm() <= lambdas[k] || blk.eval.maxCoeff() <= 0.0) {
        bk_next = Vector::Zero(gsize);
      } else {
        bk_next = block_solve(blk, c, lambdas[k]);
      }
      Vector diff = bk_next - bk;
      double ch = diff.lpNorm<Eigen::Infinity>();
      if (ch > 0.0) {
        r = rk - blk.Xk * bk_next;
        for (int j = 0; j < gsize; ++j) beta[blk.cols[j]] = bk_next[j];
        max_change = std::max(max_change, ch);
      }
    }
    ++sweeps;
    if (max_change < opts.tol_coef) {
      viol = group_lasso_kkt_violation(data, groups, lambdas, beta);
      if (viol < opts.tol_kkt) break;
    }
  }
  if (!(viol < opts.tol_kkt)) {
    viol = group_lasso_kkt_violation(data, groups, lambdas, beta);
    if (viol >= opts.tol_kkt) {
      throw SolverError("group_lasso_fit did not converge", viol);
    }
  }

  FitResult fit = make_fit(beta, lambdas, data.X, data.y);
  fit.sweeps = sweeps;
  fit.kkt_violation = viol;
  return fit;
}

double group_lasso_objective(const Dataset& data, const GroupStructure& groups,
                             const std::vector<double>& lambdas,
                             const Vector& beta) {
  Vector r = data.y - data.X * beta;
  double obj = kernels::nrm2sq(r.data(), static_cast<std::size_t>(r.size()));
  for (int k = 0; k < groups.num_groups(); ++k) {
    double nn = 0.0;
    for (int j : groups.groups[k]) nn += beta[j] * beta[j];
    obj += lambdas[k] * std::sqrt(nn);
  }
  return obj;
}

double group_lasso_kkt_violation(const Dataset& data,
                                 const GroupStructure& groups,
                                 const std::vector<double>& lambdas,
                                 const Vector& beta, double support_tol) {
  Vector r = data.y - data.X * beta;
  double viol = 0.0;
  for (int k = 0; k < groups.num_groups(); ++k) {
    const auto& g = groups.groups[k];
    Vector corr(static_cast<int>(g.size()));
    Vector bk(static_cast<int>(g.size()));
    for (std::size_t j = 0; j < g.size(); ++j) {
      corr[static_cast<int>(j)] =
          2.0 * kernels::dot(data.X.col(g[j]).data(), r.data(),
                             static_cast<std::size_t>(data.n()));
      bk[static_cast<int>(j)] = beta[g[j]];
    }
    double bnorm = bk.norm();
    if (bnorm > support_tol) {
      viol = std::max(viol, (corr - lambdas[k] * bk / bnorm).norm());
    } else {
      viol = std::max(viol, corr.norm() - lambdas[k]);
    }
  }
  return std::max(viol, 0.0);
}

}  // namespace pivotal
