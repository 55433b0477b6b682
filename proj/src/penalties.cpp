#include "pivotal/penalties.hpp"

#include <cmath>
#include <cstring>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "pivotal/errors.hpp"
#include "pivotal/special_functions.hpp"

namespace pivotal {

double delta_coordinate(int p, int dim) {
  if (dim < 1 || dim > p) throw DomainError("delta_coordinate: need 1 <= dim <= p");
  return log_binomial(p, dim) + std::log(static_cast<double>(dim));
}

double delta_group(int M, int kcard) {
  if (kcard < 1 || kcard > M) throw DomainError("delta_group: need 1 <= kcard <= M");
  return std::log(static_cast<double>(kcard)) + log_binomial(M, kcard);
}

namespace {

// Bisection for the strictly decreasing g on an expanding bracket.
// Stops when the bracket is relatively tight and |g - target| <= tol.
double solve_decreasing(const std::function<double(double)>& g, double target,
                        double lo, double hi, double tol) {
  constexpr double eps = 1e-12;
  if (lo < eps) lo = eps;
  if (g(lo) < target) lo = eps;  // the analytic lower bound overshot
  double ghi = g(hi);
  int expansions = 0;
  while (ghi >= target) {
    hi *= 2.0;
    ghi = g(hi);
    if (++expansions > 200) {
      throw SolverError("penalty bracket expansion failed", hi);
    }
  }
  for (int it = 0; it < 300; ++it) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) >= target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-14 * hi) break;
  }
  double x = 0.5 * (lo + hi);
  if (std::fabs(g(x) - target) > std::max(tol, 1e-12 * target)) {
    // Residual beyond tolerance at a machine-tight bracket means the
    // evaluation itself has lost precision on this instance.
    throw SolverError("penalty equation residual above tolerance",
                      std::fabs(g(x) - target));
  }
  return x;
}

struct PenKey {
  int n;
  int D;
  std::uint64_t delta_bits;
  bool operator<(const PenKey& o) const {
    return std::tie(n, D, delta_bits) < std::tie(o.n, o.D, o.delta_bits);
  }
};

std::mutex g_pen_mutex;
std::map<PenKey, double> g_pen_cache;

}  // namespace

double pen_delta_solve(int n, int D, double delta) {
  if (D < 1 || 2 * D > n - 2) {
    throw DomainError("pen_delta_solve: need 1 <= D <= n/2 - 1");
  }
  if (!(delta >= 0.0) || delta > 2.0 * n / 3.0) {
    throw DomainError("pen_delta_solve: need 0 <= delta <= 2n/3");
  }
  std::uint64_t bits;
  std::memcpy(&bits, &delta, sizeof bits);
  PenKey key{n, D, bits};
  {
    std::lock_guard<std::mutex> lock(g_pen_mutex);
    auto it = g_pen_cache.find(key);
    if (it != g_pen_cache.end()) return it->second;
  }

  const int N = n - D;
  auto g = [&](double x) { return chi2_gap_mean(D + 1, N - 1, x / N); };
  double target = std::exp(-delta);
  double lo = std::max(1e-12, 2.0 * delta + D - 20.0);
  double hi = 20.0 * std::max({static_cast<double>(D), delta, 1.0}) + 50.0;
  double x = solve_decreasing(g, target, lo, hi, 1e-10);

  std::lock_guard<std::mutex> lock(g_pen_mutex);
  g_pen_cache.emplace(key, x);
  return x;
}

PenaltySpec make_penalty_spec(int n, int D, double delta) {
  PenaltySpec spec;
  spec.n = n;
  spec.D = D;
  spec.delta = delta;
  spec.pen_delta = pen_delta_solve(n, D, delta);
  spec.pen = 1.1 * spec.pen_delta;
  return spec;
}

double seg_pen_solve(int n, int q) {
  if (q < 0 || 4 * q > n - 1) {
    throw DomainError("seg_pen_solve: need 0 <= q <= (n-1)/4");
  }
  auto g = [&](double c) { return chi2_gap_mean(q + 2, n - q - 2, c); };
  double log_target = -(std::log(static_cast<double>(q) + 1.0) + log_binomial(n - 1, q));
  double target = std::exp(log_target);
  return solve_decreasing(g, target, 1e-12, 1.0, 1e-10);
}

double classical_penalty(PenaltyKind kind, const PenaltyArgs& args) {
  switch (kind) {
    case PenaltyKind::aic:
      return 2.0 * args.dim;
    case PenaltyKind::bic:
      if (args.n < 1) throw ConfigError("bic penalty needs n");
      return args.dim * std::log(static_cast<double>(args.n));
    case PenaltyKind::birge_massart: {
      if (!args.sigma2) throw ConfigError("birge_massart penalty needs sigma2");
      if (args.dim == 0) return 0.0;
      if (args.p < args.dim) throw ConfigError("birge_massart penalty needs p >= dim");
      double d = args.dim;
      return 4.0 * d * (4.0 + std::log(static_cast<double>(args.p) / d)) * *args.sigma2;
    }
    case PenaltyKind::lebarbier: {
      if (!args.sigma2) throw ConfigError("lebarbier penalty needs sigma2");
      if (args.n < 1) throw ConfigError("lebarbier penalty needs n");
      double q1 = args.q + 1.0;
      return q1 * (2.0 * std::log(static_cast<double>(args.n) / q1) + 5.0) * *args.sigma2;
    }
  }
  throw ConfigError("unknown penalty kind");
}

const char* penalty_kind_name(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::aic: return "aic";
    case PenaltyKind::bic: return "bic";
    case PenaltyKind::birge_massart: return "birge-massart";
    case PenaltyKind::lebarbier: return "lebarbier";
  }
  return "unknown";
}

PenaltyKind penalty_kind_from_name(const std::string& name) {
  if (name == "aic") return PenaltyKind::aic;
  if (name == "bic") return PenaltyKind::bic;
  if (name == "birge-massart") return PenaltyKind::birge_massart;
  if (name == "lebarbier") return PenaltyKind::lebarbier;
  throw UsageError("unknown penalty kind: " + name);
}

}  // namespace pivotal
