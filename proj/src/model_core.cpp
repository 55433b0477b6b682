#include "pivotal/model_core.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "pivotal/rng.hpp"

namespace pivotal {

namespace {

Matrix submatrix(const Matrix& X, const std::vector<int>& cols) {
  Matrix S(X.rows(), static_cast<int>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) S.col(j) = X.col(cols[j]);
  return S;
}

// Visit all size-k subsets of {0..p-1} in lexicographic order.
template <class F>
void for_each_subset(int p, int k, F&& visit) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == p - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

Projector::Projector(const Matrix& X, const Support& J, double rank_tol) {
  if (J.empty()) return;  // zero projector
  Matrix S = submatrix(X, J.indices());
  Eigen::JacobiSVD<Matrix> svd(S, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  double cutoff = rank_tol * (sv.size() > 0 ? sv[0] : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff) ++rank;
  }
  basis_ = svd.matrixU().leftCols(rank);
}

Projector::Projector(Matrix orthonormal_basis) : basis_(std::move(orthonormal_basis)) {}

Vector Projector::apply(const Vector& v) const {
  if (basis_.cols() == 0) return Vector::Zero(v.size());
  return basis_ * (basis_.transpose() * v);
}

Vector project_onto(const Matrix& X, const Support& J, const Vector& v,
                    double rank_tol) {
  return Projector(X, J, rank_tol).apply(v);
}

double prediction_loss(const Matrix& X, const Vector& beta_hat,
                       const Vector& beta0) {
  if (beta_hat.size() != X.cols() || beta0.size() != X.cols()) {
    throw DataError("prediction_loss: dimension mismatch");
  }
  return (X * (beta_hat - beta0)).squaredNorm();
}

SparseEigs sparse_eigenvalues(const Matrix& X, int k, int cap) {
  const int p = static_cast<int>(X.cols());
  if (k < 1 || k > p) throw DomainError("sparse_eigenvalues: need 1 <= k <= p");
  if (k > cap) {
    throw UnsupportedSizeError("sparse_eigenvalues: k exceeds the enumeration cap");
  }
  SparseEigs out;
  out.plus = 0.0;
  out.minus = std::numeric_limits<double>::infinity();
  for_each_subset(p, k, [&](const std::vector<int>& idx) {
    Matrix S = submatrix(X, idx);
    Eigen::SelfAdjointEigenSolver<Matrix> es(S.transpose() * S);
    out.plus = std::max(out.plus, es.eigenvalues().maxCoeff());
    out.minus = std::min(out.minus, es.eigenvalues().minCoeff());
  });
  return out;
}

namespace {

// Project v onto the l1 ball of radius r (Duchi et al. style).
void project_l1_ball(Vector& v, double r) {
  double norm1 = v.lpNorm<1>();
  if (norm1 <= r) return;
  std::vector<double> mags(v.size());
  for (int i = 0; i < v.size(); ++i) mags[i] = std::fabs(v[i]);
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < mags.size(); ++i) {
    cum += mags[i];
    double t = (cum - r) / static_cast<double>(i + 1);
    if (t >= (i + 1 < mags.size() ? mags[i + 1] : 0.0)) {
      theta = t;
      break;
    }
  }
  for (int i = 0; i < v.size(); ++i) {
    double m = std::fabs(v[i]) - theta;
    v[i] = m > 0.0 ? (v[i] > 0.0 ? m : -m) : 0.0;
  }
}

struct ConeProblem {
  const Matrix& X;
  std::vector<int> t_idx;
  std::vector<int> tc_idx;
  double xi;
  double sqrt_card;

  double objective(const Vector& u) const {
    return sqrt_card * (X * u).norm();
  }

  // Rescale so the T-part has unit l1 norm, then pull the complement back
  // into the cone. Returns false when the T-part degenerated to zero.
  bool feasible(Vector& u) const {
    double nt = 0.0;
    for (int j : t_idx) nt += std::fabs(u[j]);
    if (nt < 1e-14) return false;
    u /= nt;
    Vector comp(static_cast<int>(tc_idx.size()));
    for (std::size_t i = 0; i < tc_idx.size(); ++i) comp[i] = u[tc_idx[i]];
    project_l1_ball(comp, xi);
    for (std::size_t i = 0; i < tc_idx.size(); ++i) u[tc_idx[i]] = comp[i];
    return true;
  }
};

CompatibilityResult minimize_on_cone(const ConeProblem& prob, int p,
                                     const CompatibilityOptions& opts) {
  Rng rng(opts.seed);
  double best = std::numeric_limits<double>::infinity();
  bool any_converged = false;
  for (int restart = 0; restart < opts.restarts; ++restart) {
    Vector u(p);
    if (restart < static_cast<int>(prob.t_idx.size())) {
      u.setZero();
      u[prob.t_idx[restart]] = 1.0;
    } else {
      for (int i = 0; i < p; ++i) u[i] = rng.normal();
    }
    if (!prob.feasible(u)) continue;
    double step = 0.5;
    double fu = prob.objective(u);
    int stale = 0;
    for (int it = 0; it < opts.iterations; ++it) {
      Vector xu = prob.X * u;
      double nrm = xu.norm();
      Vector grad = nrm > 1e-14 ? Vector(prob.X.transpose() * (xu / nrm))
                                : Vector(Vector::Zero(p));
      Vector cand = u - step * grad;
      if (!prob.feasible(cand)) {
        step *= 0.5;
        continue;
      }
      double fc = prob.objective(cand);
      if (fc < fu) {
        u = cand;
        fu = fc;
        stale = 0;
      } else {
        step *= 0.7;
        if (++stale > 40) break;
      }
      if (step < 1e-12) break;
    }
    if (fu < best) best = fu;
    if (stale <= 40) any_converged = true;
  }
  return {best, any_converged};
}

}  // namespace

CompatibilityResult compatibility_constant(const Matrix& X, const Support& T,
                                           const CompatibilityOptions& opts) {
  const int p = static_cast<int>(X.cols());
  if (T.empty()) throw DomainError("compatibility_constant: empty T");
  if (T.indices().back() >= p) {
    throw DomainError("compatibility_constant: T out of range");
  }
  // Normalizing by the largest column norm makes the heuristic exactly
  // homogeneous in X; the factor scales back the result.
  double scale = 0.0;
  for (int j = 0; j < p; ++j) scale = std::max(scale, X.col(j).norm());
  if (scale == 0.0) return {0.0, true};
  Matrix Xn = X / scale;

  ConeProblem prob{Xn, T.indices(), {}, opts.xi,
                   std::sqrt(static_cast<double>(T.size()))};
  for (int j = 0; j < p; ++j) {
    if (!T.contains(j)) prob.tc_idx.push_back(j);
  }
  CompatibilityResult res = minimize_on_cone(prob, p, opts);
  res.value *= scale;
  return res;
}

CompatibilityResult group_compatibility_constant(const Matrix& X,
                                                 const GroupStructure& groups,
                                                 double xi, int s,
                                                 const CompatibilityOptions& opts) {
  const int p = static_cast<int>(X.cols());
  groups.validate(p);
  const int M = groups.num_groups();
  if (s < 1 || s > M) throw DomainError("group_compatibility: need 1 <= s <= M");
  if (s > 3) throw UnsupportedSizeError("group_compatibility: s exceeds the enumeration cap");

  double scale = 0.0;
  for (int j = 0; j < p; ++j) scale = std::max(scale, X.col(j).norm());
  if (scale == 0.0) return {0.0, true};
  Matrix Xn = X / scale;

  Rng rng(opts.seed);
  double best = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int card = 1; card <= s; ++card) {
    for_each_subset(M, card, [&](const std::vector<int>& kset) {
      // Projected gradient on ||X u|| over the slice ||u_(K)|| = 1 of the
      // group cone sum_{k notin K} ||u^{G_k}|| <= xi sum_{k in K} ||u^{G_k}||.
      // Only the K block is renormalized; the complement is shrunk back
      // into the cone when it overshoots.
      auto feas = [&](Vector& w) -> bool {
        double nk = 0.0;
        for (int k : kset)
          for (int j : groups.groups[k]) nk += w[j] * w[j];
        nk = std::sqrt(nk);
        if (nk < 1e-14) return false;
        for (int k : kset)
          for (int j : groups.groups[k]) w[j] /= nk;
        double in_sum = 0.0;
        for (int k : kset) {
          double nn = 0.0;
          for (int j : groups.groups[k]) nn += w[j] * w[j];
          in_sum += std::sqrt(nn);
        }
        double out = 0.0;
        std::vector<double> gn(M, 0.0);
        for (int k = 0; k < M; ++k) {
          if (std::find(kset.begin(), kset.end(), k) != kset.end()) continue;
          double nn = 0.0;
          for (int j : groups.groups[k]) nn += w[j] * w[j];
          gn[k] = std::sqrt(nn);
          out += gn[k];
        }
        double budget = xi * in_sum;
        if (out > budget && out > 0.0) {
          double shrink = budget / out;
          for (int k = 0; k < M; ++k) {
            if (gn[k] == 0.0) continue;
            for (int j : groups.groups[k]) w[j] *= shrink;
          }
        }
        return true;
      };
      const int n_restarts = std::max(4, opts.restarts / 4) + card;
      for (int restart = 0; restart < n_restarts; ++restart) {
        Vector u(p);
        if (restart < card) {
          u.setZero();
          u[groups.groups[kset[restart]].front()] = 1.0;
        } else {
          for (int i = 0; i < p; ++i) u[i] = rng.normal();
        }
        if (!feas(u)) continue;
        double fu = (Xn * u).norm();
        double step = 0.5;
        for (int it = 0; it < opts.iterations; ++it) {
          Vector xu = Xn * u;
          double nrm = xu.norm();
          Vector grad = nrm > 1e-14 ? Vector(Xn.transpose() * (xu / nrm))
                                    : Vector(Vector::Zero(p));
          Vector cand = u - step * grad;
          if (!feas(cand)) {
            step *= 0.5;
            continue;
          }
          double fc = (Xn * cand).norm();
          if (fc < fu) {
            u = cand;
            fu = fc;
          } else {
            step *= 0.7;
          }
          if (step < 1e-12) break;
        }
        if (fu < best) {
          best = fu;
          converged = true;
        }
      }
    });
  }
  return {best * scale, converged};
}

int compute_kstar(long long n, long long p) {
  if (n < 1 || p < 2) throw DomainError("compute_kstar: need n >= 1, p >= 2");
  // 2k log(p/k) is increasing on k <= p/e; the cap avoids the spurious
  // large-k region where it decreases back below n.
  long long kmax = static_cast<long long>(std::floor(static_cast<double>(p) / std::exp(1.0)));
  int best = 0;
  for (long long k = 1; k <= kmax; ++k) {
    double lhs = 2.0 * static_cast<double>(k) *
                 std::log(static_cast<double>(p) / static_cast<double>(k));
    if (lhs <= static_cast<double>(n)) {
      best = static_cast<int>(k);
    } else {
      break;
    }
  }
  return best;
}

bool ultra_high_dimensional(long long n, long long p, long long k) {
  if (k < 1) return false;
  double lhs = 2.0 * static_cast<double>(k) *
               std::log(static_cast<double>(p) / static_cast<double>(k));
  return lhs >= static_cast<double>(n);
}

double submatrix_largest_eigenvalue(const Matrix& X, const Support& J) {
  if (J.empty()) return 0.0;
  Matrix S = submatrix(X, J.indices());
  Eigen::SelfAdjointEigenSolver<Matrix> es(S.transpose() * S);
  return es.eigenvalues().maxCoeff();
}

double restricted_largest_eigenvalue(const Matrix& X, int k, int cap) {
  return sparse_eigenvalues(X, k, cap).plus;
}

}  // namespace pivotal
