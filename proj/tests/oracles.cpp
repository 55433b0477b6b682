#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace oracles {

double gamma_draw(Rng& rng, double alpha) {
  if (alpha < 1.0) throw std::invalid_argument("gamma_draw: alpha < 1");
  double d = alpha - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = rng.uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double chi2_draw(Rng& rng, int dof) {
  if (dof < 2) throw std::invalid_argument("chi2_draw: dof < 2");
  return 2.0 * gamma_draw(rng, 0.5 * dof);
}

MonteCarlo mc_chi2_gap_mean(int du, int dv, double c, int draws, Rng& rng) {
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < draws; ++i) {
    double u = chi2_draw(rng, du);
    double v = chi2_draw(rng, dv);
    double z = u - c * v;
    if (z < 0.0) z = 0.0;
    sum += z;
    sumsq += z * z;
  }
  MonteCarlo out;
  out.mean = sum / draws;
  double var = (sumsq - sum * sum / draws) / (draws - 1);
  out.se = std::sqrt(std::max(0.0, var) / draws);
  return out;
}

MonteCarlo mc_fisher_survival(int d1, int d2, double x, int draws, Rng& rng) {
  int hits = 0;
  for (int i = 0; i < draws; ++i) {
    double u = chi2_draw(rng, d1) / d1;
    double v = chi2_draw(rng, d2) / d2;
    if (u / v >= x) ++hits;
  }
  MonteCarlo out;
  double phat = static_cast<double>(hits) / draws;
  out.mean = phat;
  out.se = std::sqrt(std::max(phat * (1.0 - phat), 1e-12) / draws);
  return out;
}

long double exact_log_binomial(long long p, long long d) {
  if (d < 0 || d > p) throw std::invalid_argument("exact_log_binomial: range");
  if (d > p - d) d = p - d;
  unsigned __int128 acc = 1;
  const unsigned __int128 limit = ~static_cast<unsigned __int128>(0);
  for (long long i = 1; i <= d; ++i) {
    unsigned __int128 factor = static_cast<unsigned __int128>(p - d + i);
    if (acc > limit / factor) {
      throw std::overflow_error("exact_log_binomial: 128-bit overflow");
    }
    acc = acc * factor / static_cast<unsigned __int128>(i);
  }
  // Split into high and low halves for an exact long double conversion path.
  long double hi = static_cast<long double>(static_cast<unsigned long long>(acc >> 64));
  long double lo = static_cast<long double>(static_cast<unsigned long long>(acc));
  long double value = hi * std::ldexp(1.0L, 64) + lo;
  return std::log(value);
}

SubgradientResult subgradient_minimize(
    const std::function<double(const Vector&)>& objective,
    const std::function<Vector(const Vector&)>& subgradient, Vector x0,
    int total_iterations, double step0) {
  const int stages = 44;
  const int per_stage = std::max(1, total_iterations / stages);
  Vector x = std::move(x0);
  Vector best_x = x;
  double best = objective(x);
  double step = step0;
  for (int s = 0; s < stages; ++s) {
    x = best_x;
    for (int it = 0; it < per_stage; ++it) {
      Vector g = subgradient(x);
      double gn = g.norm();
      if (gn < 1e-15) break;
      x -= (step / gn) * g;
      double f = objective(x);
      if (f < best) {
        best = f;
        best_x = x;
      }
    }
    step *= 0.5;
  }
  return {best_x, best};
}

Matrix gram_schmidt_basis(const Matrix& X, const std::vector<int>& cols,
                          double tol) {
  const int n = static_cast<int>(X.rows());
  Matrix Q(n, static_cast<int>(cols.size()));
  int r = 0;
  double scale = 0.0;
  for (int c : cols) scale = std::max(scale, X.col(c).norm());
  for (int c : cols) {
    Vector v = X.col(c);
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < r; ++k) v -= Q.col(k).dot(v) * Q.col(k);
    }
    double nn = v.norm();
    if (nn > tol * std::max(scale, 1.0)) {
      Q.col(r++) = v / nn;
    }
  }
  return Q.leftCols(r);
}

Vector gram_schmidt_project(const Matrix& X, const std::vector<int>& cols,
                            const Vector& v, double tol) {
  Matrix Q = gram_schmidt_basis(X, cols, tol);
  if (Q.cols() == 0) return Vector::Zero(v.size());
  return Q * (Q.transpose() * v);
}

namespace {

double partition_rss(const Vector& y, const std::vector<int>& bps) {
  // Same prefix-sum cost formula, written independently.
  double rss = 0.0;
  int start = 0;
  for (std::size_t s = 0; s <= bps.size(); ++s) {
    int end = s < bps.size() ? bps[s] : static_cast<int>(y.size());
    double sum = 0.0, sq = 0.0;
    for (int i = start; i < end; ++i) {
      sum += y[i];
      sq += y[i] * y[i];
    }
    rss += sq - sum * sum / (end - start);
    start = end;
  }
  return rss;
}

void enumerate_subsets(int n_positions, int q, std::vector<int>& cur, int next,
                       const std::function<void(const std::vector<int>&)>& visit) {
  if (static_cast<int>(cur.size()) == q) {
    visit(cur);
    return;
  }
  for (int b = next; b <= n_positions; ++b) {
    cur.push_back(b);
    enumerate_subsets(n_positions, q, cur, b + 1, visit);
    cur.pop_back();
  }
}

}  // namespace

BestPartition brute_force_partition(const Vector& y, int q, double tie_tol) {
  const int n = static_cast<int>(y.size());
  BestPartition best;
  best.rss = std::numeric_limits<double>::infinity();
  std::vector<int> cur;
  enumerate_subsets(n - 1, q, cur, 1, [&](const std::vector<int>& bps) {
    double rss = partition_rss(y, bps);
    if (rss < best.rss - tie_tol) {
      best.rss = rss;
      best.breakpoints = bps;
      best.unique = true;
    } else if (rss < best.rss) {
      best.rss = rss;
      best.breakpoints = bps;
      best.unique = false;
    } else if (rss < best.rss + tie_tol) {
      best.unique = false;
    }
  });
  return best;
}

Vector sqrt_lasso_direct_descent(const Matrix& X, const Vector& y,
                                 double lambda, int max_iters, double tol) {
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  const double pen = lambda / std::sqrt(static_cast<double>(n));
  auto smooth = [&](const Vector& b) { return (y - X * b).norm(); };
  auto objective = [&](const Vector& b) {
    return smooth(b) + pen * b.lpNorm<1>();
  };

  Vector b = Vector::Zero(p);
  double fb = objective(b);
  double step = 1.0 / std::max(1.0, X.squaredNorm() / n);
  for (int it = 0; it < max_iters; ++it) {
    Vector r = y - X * b;
    double rn = r.norm();
    if (rn < 1e-14) break;
    Vector grad = -(X.transpose() * r) / rn;
    // Backtracking proximal step.
    double t = step;
    Vector next;
    for (int ls = 0; ls < 60; ++ls) {
      Vector z = b - t * grad;
      next.resize(p);
      for (int j = 0; j < p; ++j) {
        double thr = t * pen;
        next[j] = z[j] > thr ? z[j] - thr : (z[j] < -thr ? z[j] + thr : 0.0);
      }
      Vector diff = next - b;
      double model = smooth(b) + grad.dot(diff) + diff.squaredNorm() / (2.0 * t);
      if (smooth(next) <= model + 1e-15) break;
      t *= 0.5;
    }
    double fn = objective(next);
    double move = (next - b).lpNorm<Eigen::Infinity>();
    b = next;
    if (fn <= fb && fb - fn < tol && move < 1e-11) break;
    fb = fn;
    step = std::min(step * 1.25, 1e6);
  }
  return b;
}

RandomInstance random_instance(Rng& rng, int n, int p, int k, double magnitude,
                               double sigma, bool normalize) {
  RandomInstance inst;
  inst.X.resize(n, p);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < n; ++i) inst.X(i, j) = rng.normal();
  }
  if (normalize) {
    for (int j = 0; j < p; ++j) inst.X.col(j) /= inst.X.col(j).norm();
  }
  inst.beta0 = Vector::Zero(p);
  for (int j = 0; j < k && j < p; ++j) {
    inst.beta0[j] = (j % 2 == 0 ? magnitude : -magnitude);
  }
  inst.y = inst.X * inst.beta0;
  for (int i = 0; i < n; ++i) inst.y[i] += sigma * rng.normal();
  return inst;
}

}  // namespace oracles
