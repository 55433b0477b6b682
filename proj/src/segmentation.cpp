#include "pivotal/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "pivotal/model_core.hpp"
#include "pivotal/penalties.hpp"
#include "pivotal/selectors.hpp"
#include "pivotal/special_functions.hpp"

namespace pivotal {

namespace {

// Segment cost from prefix sums of y and y^2.
struct SegmentCost {
  std::vector<double> s1, s2;
  explicit SegmentCost(const Vector& y)
      : s1(y.size() + 1, 0.0), s2(y.size() + 1, 0.0) {
    for (int i = 0; i < y.size(); ++i) {
      s1[i + 1] = s1[i] + y[i];
      s2[i + 1] = s2[i] + y[i] * y[i];
    }
  }
  // Squared deviation of y[i..j], inclusive.
  double operator()(int i, int j) const {
    double sum = s1[j + 1] - s1[i];
    double sq = s2[j + 1] - s2[i];
    return sq - sum * sum / (j - i + 1);
  }
};

}  // namespace

SegmentationFamily dp_best_partitions(const Vector& y, int q_max) {
  const int n = static_cast<int>(y.size());
  if (n < 1) throw DomainError("dp_best_partitions: empty signal");
  if (q_max < 0 || q_max > n - 1) {
    throw DomainError("dp_best_partitions: need 0 <= q_max <= n-1");
  }
  SegmentCost cost(y);

  // E[m][j]: best cost of y[0..j] with m breakpoints; back[m][j] holds the
  // start of the last segment. Ties keep the earliest start.
  std::vector<std::vector<double>> E(q_max + 1, std::vector<double>(n));
  std::vector<std::vector<int>> back(q_max + 1, std::vector<int>(n, 0));
  for (int j = 0; j < n; ++j) E[0][j] = cost(0, j);
  for (int m = 1; m <= q_max; ++m) {
    for (int j = 0; j < n; ++j) {
      double best = std::numeric_limits<double>::infinity();
      int arg = m;
      if (j >= m) {
        for (int i = m; i <= j; ++i) {
          double c = E[m - 1][i - 1] + cost(i, j);
          if (c < best) {
            best = c;
            arg = i;
          }
        }
      }
      E[m][j] = best;
      back[m][j] = arg;
    }
  }

  SegmentationFamily fam;
  fam.rss_by_q.resize(q_max + 1);
  fam.breakpoints_by_q.resize(q_max + 1);
  for (int q = 0; q <= q_max; ++q) {
    fam.rss_by_q[q] = std::max(0.0, E[q][n - 1]);
    std::vector<int> bps;
    int j = n - 1;
    for (int m = q; m >= 1; --m) {
      int i = back[m][j];
      bps.push_back(i);
      j = i - 1;
    }
    std::sort(bps.begin(), bps.end());
    fam.breakpoints_by_q[q] = std::move(bps);
  }
  return fam;
}

Vector SegmentationFamily::fitted_for(int q, const Vector& y) const {
  const auto& bps = breakpoints_by_q.at(q);
  Vector fitted(y.size());
  int start = 0;
  for (std::size_t s = 0; s <= bps.size(); ++s) {
    int end = s < bps.size() ? bps[s] : static_cast<int>(y.size());
    double mean = 0.0;
    for (int i = start; i < end; ++i) mean += y[i];
    mean /= (end - start);
    for (int i = start; i < end; ++i) fitted[i] = mean;
    start = end;
  }
  return fitted;
}

namespace {

Segmentation from_family(const SegmentationFamily& fam, int q, const Vector& y) {
  Segmentation seg;
  seg.q = q;
  seg.breakpoints = fam.breakpoints_by_q.at(q);
  seg.rss = fam.rss_by_q.at(q);
  seg.fitted = fam.fitted_for(q, y);
  return seg;
}

}  // namespace

Segmentation segment_select_bgh(const Vector& y, int q_max) {
  const int n = static_cast<int>(y.size());
  if (q_max < 0) q_max = (n - 1) / 4;
  if (4 * q_max > n - 1) {
    throw DomainError("segment_select_bgh: need q_max <= (n-1)/4");
  }
  SegmentationFamily fam = dp_best_partitions(y, q_max);
  int best_q = 0;
  double best = std::numeric_limits<double>::infinity();
  bool zero_rss = false;
  std::vector<std::pair<double, double>> table;
  for (int q = 0; q <= q_max; ++q) {
    double crit = fam.rss_by_q[q] * (1.0 + 1.1 * seg_pen_solve(n, q));
    table.emplace_back(q, crit);
    if (!zero_rss && fam.rss_by_q[q] <= 0.0) {
      best_q = q;
      best = crit;
      zero_rss = true;
    }
    if (!zero_rss && crit < best) {
      best = crit;
      best_q = q;
    }
  }
  Segmentation seg = from_family(fam, best_q, y);
  seg.criterion = std::move(table);
  if (zero_rss) {
    seg.flagged = true;
    seg.flag_reason = "zero-rss";
  }
  return seg;
}

Segmentation segment_select_lebarbier(const Vector& y, int q_max, double sigma2) {
  const int n = static_cast<int>(y.size());
  if (!(sigma2 >= 0.0)) throw DomainError("segment_select_lebarbier: bad sigma2");
  if (q_max < 0) q_max = n - 1;
  SegmentationFamily fam = dp_best_partitions(y, q_max);
  int best_q = 0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> table;
  for (int q = 0; q <= q_max; ++q) {
    PenaltyArgs args;
    args.q = q;
    args.n = n;
    args.sigma2 = sigma2;
    double crit = fam.rss_by_q[q] + classical_penalty(PenaltyKind::lebarbier, args);
    table.emplace_back(q, crit);
    if (crit <= best) {  // ties to the larger q
      best = crit;
      best_q = q;
    }
  }
  Segmentation seg = from_family(fam, best_q, y);
  seg.criterion = std::move(table);
  seg.sigma2 = sigma2;
  return seg;
}

double variance_plugin(const Vector& y, bool* odd_flagged) {
  const int n = static_cast<int>(y.size());
  if (n < 2) throw DomainError("variance_plugin: need n >= 2");
  const bool odd = (n % 2) != 0;
  if (odd_flagged) *odd_flagged = odd;
  const int used = odd ? n - 1 : n;
  double acc = 0.0;
  for (int i = 0; i + 1 < used; i += 2) {
    double d = y[i + 1] - y[i];
    acc += d * d;
  }
  return acc / used;
}

Segmentation segment_select_slope(const Vector& y, int q_max) {
  const int n = static_cast<int>(y.size());
  if (q_max < 0) q_max = (n - 1) / 4;
  SegmentationFamily fam = dp_best_partitions(y, q_max);

  std::vector<SlopePoint> points;
  for (int q = 0; q <= q_max; ++q) {
    SlopePoint pt;
    pt.dim = q + 1;
    pt.rss = fam.rss_by_q[q];
    pt.shape = (q + 1.0) * (2.0 * std::log(n / (q + 1.0)) + 5.0);
    points.push_back(pt);
  }
  SelectionReport report = slope_heuristic_select(points);
  int best_q = static_cast<int>(report.chosen_lambda) - 1;
  Segmentation seg = from_family(fam, best_q, y);
  for (const ReportRow& row : report.rows) {
    seg.criterion.emplace_back(row.lambda - 1.0, row.crit);
  }
  seg.flagged = report.flagged;
  seg.flag_reason = report.flag_reason;
  return seg;
}

// ---------------------------------------------------------------------------
// 1-D fused lasso, exact, by forward message passing on the piecewise-linear
// derivative (clip at +-lambda, add the data term) with backward clamping.

namespace {

struct Knot {
  double pos;
  double dslope;
  double dinter;
};

}  // namespace

Vector fused_lasso_1d(const Vector& y, double lambda) {
  const int n = static_cast<int>(y.size());
  if (n < 1) throw DomainError("fused_lasso_1d: empty signal");
  if (lambda < 0.0) throw DomainError("fused_lasso_1d: negative lambda");
  if (n == 1 || lambda == 0.0) return y;

  std::deque<Knot> knots;
  // Derivative of the running objective: leftmost / rightmost linear pieces.
  double al = 2.0, bl = -2.0 * y[0];
  double ar = 2.0, br = -2.0 * y[0];
  std::vector<double> lo(n - 1), hi(n - 1);

  for (int t = 1; t < n; ++t) {
    // Clip the current derivative at -lambda from the left...
    double a = al, c = bl;
    while (!knots.empty()) {
      double cross = (-lambda - c) / a;
      if (cross <= knots.front().pos) break;
      a += knots.front().dslope;
      c += knots.front().dinter;
      knots.pop_front();
    }
    double lo_t = (-lambda - c) / a;
    double a_lo = a, c_lo = c;
    // ...and at +lambda from the right.
    double a2 = ar, c2 = br;
    while (!knots.empty()) {
      double cross = (lambda - c2) / a2;
      if (cross >= knots.back().pos) break;
      a2 -= knots.back().dslope;
      c2 -= knots.back().dinter;
      knots.pop_back();
    }
    double hi_t = (lambda - c2) / a2;
    lo[t - 1] = lo_t;
    hi[t - 1] = hi_t;

    knots.push_front({lo_t, a_lo, c_lo + lambda});
    knots.push_back({hi_t, -a2, lambda - c2});
    // New data term: every piece gains slope 2 and intercept -2 y_t.
    al = 2.0;
    bl = -lambda - 2.0 * y[t];
    ar = 2.0;
    br = lambda - 2.0 * y[t];
  }

  double a = al, c = bl;
  while (!knots.empty()) {
    double cross = -c / a;
    if (cross <= knots.front().pos) break;
    a += knots.front().dslope;
    c += knots.front().dinter;
    knots.pop_front();
  }
  Vector beta(n);
  beta[n - 1] = -c / a;
  for (int t = n - 2; t >= 0; --t) {
    beta[t] = std::clamp(beta[t + 1], lo[t], hi[t]);
  }
  return beta;
}

double tv_kkt_violation(const Vector& y, double lambda, const Vector& beta) {
  const int n = static_cast<int>(y.size());
  if (beta.size() != n) throw DataError("tv_kkt_violation: length mismatch");
  if (lambda <= 0.0) {
    return (y - beta).lpNorm<Eigen::Infinity>();
  }
  const double scale = std::max(1.0, y.lpNorm<Eigen::Infinity>());
  double viol = 0.0;
  double prefix = 0.0;
  for (int m = 0; m + 1 < n; ++m) {
    prefix += y[m] - beta[m];
    double u = -2.0 * prefix / lambda;
    double diff = beta[m + 1] - beta[m];
    if (std::fabs(diff) > 1e-9 * scale) {
      viol = std::max(viol, std::fabs(u - (diff > 0 ? 1.0 : -1.0)));
    } else {
      viol = std::max(viol, std::fabs(u) - 1.0);
    }
  }
  prefix += y[n - 1] - beta[n - 1];
  viol = std::max(viol, std::fabs(2.0 * prefix / lambda));
  return std::max(viol, 0.0);
}

double tv_lambda_max(const Vector& y) {
  const int n = static_cast<int>(y.size());
  if (n < 2) throw DomainError("tv_lambda_max: need n >= 2");
  double mean = y.mean();
  double prefix = 0.0;
  double worst = 0.0;
  for (int m = 0; m + 1 < n; ++m) {
    prefix += y[m] - mean;
    worst = std::max(worst, std::fabs(prefix));
  }
  return 2.0 * worst;
}

double tv_objective(const Vector& y, double lambda, const Vector& beta) {
  double obj = (y - beta).squaredNorm();
  for (int t = 0; t + 1 < y.size(); ++t) {
    obj += lambda * std::fabs(beta[t + 1] - beta[t]);
  }
  return obj;
}

EstimatorPath tv_path(const Vector& y, std::vector<double> grid) {
  const int n = static_cast<int>(y.size());
  if (n < 2) throw DomainError("tv_path: need n >= 2");
  if (grid.empty()) {
    double lmax = tv_lambda_max(y);
    if (lmax <= 0.0) {
      grid = {0.0};
    } else {
      const int size = 50;
      double log_max = std::log(lmax);
      double log_min = std::log(lmax * 1e-3);
      grid.resize(size);
      for (int i = 0; i < size; ++i) {
        grid[i] = std::exp(log_max + (log_min - log_max) * i / (size - 1));
      }
    }
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] < grid[i - 1])) {
      throw ConfigError("tv_path: grid must be strictly decreasing");
    }
  }
  EstimatorPath path;
  path.grid = grid;
  for (double lambda : grid) {
    Vector beta = fused_lasso_1d(y, lambda);
    double viol = tv_kkt_violation(y, lambda, beta);
    if (viol > 1e-8) {
      throw SolverError("fused lasso certificate failed", viol);
    }
    FitResult fit;
    fit.beta = beta;
    fit.support = Support::from_beta(beta);
    fit.lambda = {lambda};
    fit.rss = (y - beta).squaredNorm();
    fit.kkt_violation = viol;
    path.fits.push_back(std::move(fit));
  }
  return path;
}

std::vector<int> tv_breakpoints(const Vector& beta, double tol) {
  std::vector<int> bps;
  const double scale = std::max(1.0, beta.lpNorm<Eigen::Infinity>());
  for (int t = 0; t + 1 < beta.size(); ++t) {
    if (std::fabs(beta[t + 1] - beta[t]) > tol * scale) bps.push_back(t + 1);
  }
  return bps;
}

Segmentation segment_select_tv_linselect(const Vector& y,
                                         std::vector<double> grid) {
  const int n = static_cast<int>(y.size());
  if (n < 4) throw DomainError("segment_select_tv_linselect: signal too short");
  EstimatorPath path = tv_path(y, std::move(grid));

  // Map each TV fit to its variation support; weight the implied segment
  // space coordinate-style on the n-1 candidate breakpoints.
  struct SegSpace {
    std::vector<int> bps;
    Matrix basis;  // orthonormal segment indicators
    double pen = 0.0;
    double sigma2 = 0.0;
  };
  const double card_bound = n / (3.0 * std::log(static_cast<double>(n - 1)));
  std::vector<SegSpace> spaces;
  std::vector<std::vector<int>> seen;
  for (const FitResult& fit : path.fits) {
    std::vector<int> bps = tv_breakpoints(fit.beta);
    int q = static_cast<int>(bps.size());
    if (q > card_bound) continue;
    if (std::find(seen.begin(), seen.end(), bps) != seen.end()) continue;
    seen.push_back(bps);
    int dim = q + 1;
    if (2 * dim > n - 2) continue;
    double delta = std::log(q + 1.0) + log_binomial(n - 1, q);
    if (delta > 2.0 * n / 3.0) continue;
    SegSpace sp;
    sp.bps = bps;
    sp.basis = Matrix::Zero(n, dim);
    int start = 0;
    for (int s = 0; s <= q; ++s) {
      int end = s < q ? bps[s] : n;
      double val = 1.0 / std::sqrt(static_cast<double>(end - start));
      for (int i = start; i < end; ++i) sp.basis(i, s) = val;
      start = end;
    }
    sp.pen = 1.1 * pen_delta_solve(n, dim, delta);
    double rss = (y - sp.basis * (sp.basis.transpose() * y)).squaredNorm();
    sp.sigma2 = rss / (n - dim);
    spaces.push_back(std::move(sp));
  }

  Segmentation seg;
  if (spaces.empty()) {
    seg.flagged = true;
    seg.flag_reason = "empty-collection";
    seg.fitted = Vector::Constant(n, y.mean());
    seg.rss = (y - seg.fitted).squaredNorm();
    return seg;
  }

  int best_idx = 0;
  double best = std::numeric_limits<double>::infinity();
  int best_support = 0;
  for (int i = 0; i < path.size(); ++i) {
    const Vector& beta = path.fits[i].beta;
    double crit = std::numeric_limits<double>::infinity();
    for (const SegSpace& sp : spaces) {
      Vector proj = sp.basis * (sp.basis.transpose() * beta);
      double c = (y - proj).squaredNorm() + 0.5 * (beta - proj).squaredNorm() +
                 sp.pen * sp.sigma2;
      crit = std::min(crit, c);
    }
    seg.criterion.emplace_back(path.grid[i], crit);
    int vsupp = static_cast<int>(tv_breakpoints(beta).size());
    if (crit < best || (crit == best && vsupp < best_support)) {
      best = crit;
      best_idx = i;
      best_support = vsupp;
    }
  }
  seg.fitted = path.fits[best_idx].beta;
  seg.breakpoints = tv_breakpoints(seg.fitted);
  seg.q = static_cast<int>(seg.breakpoints.size());
  seg.rss = path.fits[best_idx].rss;
  return seg;
}

}  // namespace pivotal

