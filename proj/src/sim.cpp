#include "pivotal/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

#include "pivotal/lasso.hpp"
#include "pivotal/linselect.hpp"
#include "pivotal/parallel.hpp"
#include "pivotal/refit.hpp"
#include "pivotal/rng.hpp"
#include "pivotal/scaled_lasso.hpp"
#include "pivotal/selectors.hpp"

namespace pivotal {

DesignFamily design_family_from_name(const std::string& name) {
  if (name == "identity") return DesignFamily::identity;
  if (name == "iid-gaussian") return DesignFamily::iid_gaussian;
  if (name == "toeplitz") return DesignFamily::toeplitz;
  throw UsageError("unknown design family: " + name);
}

const char* design_family_name(DesignFamily family) {
  switch (family) {
    case DesignFamily::identity: return "identity";
    case DesignFamily::iid_gaussian: return "iid-gaussian";
    case DesignFamily::toeplitz: return "toeplitz";
  }
  return "unknown";
}

void SimConfig::validate() const {
  if (n < 2 || p < 1) throw ConfigError("sim config: need n >= 2, p >= 1");
  if (k < 0 || k > p) throw ConfigError("sim config: need 0 <= k <= p");
  if (!(sigma > 0.0)) throw ConfigError("sim config: sigma must be positive");
  if (reps < 1) throw ConfigError("sim config: reps must be >= 1");
  if (design == DesignFamily::identity && n != p) {
    throw ConfigError("sim config: identity design needs n == p");
  }
}

std::pair<Dataset, SimTruth> generate_instance(const SimConfig& config, int rep) {
  config.validate();
  Rng rng = Rng::substream(config.seed, static_cast<std::uint64_t>(rep));

  Matrix X;
  switch (config.design) {
    case DesignFamily::identity:
      X = Matrix::Identity(config.n, config.p);
      break;
    case DesignFamily::iid_gaussian:
      X.resize(config.n, config.p);
      for (int j = 0; j < config.p; ++j) {
        for (int i = 0; i < config.n; ++i) X(i, j) = rng.normal();
      }
      break;
    case DesignFamily::toeplitz: {
      // AR(1) rows give exactly the rho^|i-j| covariance.
      X.resize(config.n, config.p);
      double carry = std::sqrt(1.0 - config.rho * config.rho);
      for (int i = 0; i < config.n; ++i) {
        X(i, 0) = rng.normal();
        for (int j = 1; j < config.p; ++j) {
          X(i, j) = config.rho * X(i, j - 1) + carry * rng.normal();
        }
      }
      break;
    }
  }
  if (config.normalize_columns && config.design != DesignFamily::identity) {
    for (int j = 0; j < config.p; ++j) {
      double nrm = X.col(j).norm();
      if (nrm > 0.0) X.col(j) /= nrm;
    }
  }

  // Support positions via partial Fisher-Yates, then signed magnitudes.
  std::vector<int> perm(config.p);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 0; i < config.k; ++i) {
    int j = i + static_cast<int>(rng.below(config.p - i));
    std::swap(perm[i], perm[j]);
  }
  std::vector<int> supp(perm.begin(), perm.begin() + config.k);
  Vector beta0 = Vector::Zero(config.p);
  for (int j : supp) {
    double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    beta0[j] = sign * config.beta_magnitude;
  }

  Vector y = X * beta0;
  for (int i = 0; i < config.n; ++i) y[i] += config.sigma * rng.normal();

  SimTruth truth{beta0, Support(supp)};
  return {Dataset(std::move(X), std::move(y)), std::move(truth)};
}

int oracle_index(const EstimatorPath& path, const SimTruth& truth,
                 const Matrix& X) {
  if (path.fits.empty()) throw ConfigError("oracle_index: empty path");
  int best = 0;
  double best_loss = std::numeric_limits<double>::infinity();
  for (int i = 0; i < path.size(); ++i) {
    double loss = (X * (path.fits[i].beta - truth.beta0)).squaredNorm();
    if (loss < best_loss) {
      best_loss = loss;
      best = i;
    }
  }
  return best;
}

std::pair<double, double> fdr_power(const Support& selected,
                                    const Support& truth) {
  int inter = intersection_size(selected, truth);
  double fdr = static_cast<double>(selected.size() - inter) /
               std::max(selected.size(), 1);
  double power = static_cast<double>(inter) / std::max(truth.size(), 1);
  return {fdr, power};
}

MethodSummary summarize(std::string name, std::string metric,
                        std::vector<double> samples) {
  MethodSummary out;
  out.name = std::move(name);
  out.metric = std::move(metric);
  out.samples = std::move(samples);
  const int m = static_cast<int>(out.samples.size());
  if (m == 0) return out;
  double mean = 0.0;
  for (double v : out.samples) mean += v;
  mean /= m;
  double var = 0.0;
  for (double v : out.samples) var += (v - mean) * (v - mean);
  out.mean = mean;
  out.sd = m > 1 ? std::sqrt(var / (m - 1)) : 0.0;
  std::vector<double> sorted = out.samples;
  std::sort(sorted.begin(), sorted.end());
  const std::array<double, 6> probs{0.0, 0.25, 0.50, 0.75, 0.90, 0.95};
  for (std::size_t i = 0; i < probs.size(); ++i) {
    int idx = std::min<int>(m - 1, static_cast<int>(std::ceil(probs[i] * m)) - 1);
    out.quantiles[i] = sorted[std::max(0, idx)];
  }
  return out;
}

namespace {

double sqrt_lasso_lambda(const SimConfig& config) {
  if (config.sqrt_lasso_lambda > 0.0) return config.sqrt_lasso_lambda;
  return 2.0 * std::sqrt(2.0 * std::log(static_cast<double>(config.p)));
}

struct RepOutcome {
  bool failed = false;
  std::vector<double> values;
};

}  // namespace

MetricsReport run_experiment1(const SimConfig& config) {
  config.validate();
  MetricsReport report;
  report.experiment = "experiment1";
  report.config = config;

  std::vector<RepOutcome> outcomes(config.reps);
  parallel_for(config.reps, config.workers, [&](int rep) {
    RepOutcome& out = outcomes[rep];
    try {
      auto [data, truth] = generate_instance(config, rep);
      std::vector<double> grid =
          default_lambda_grid(data, config.grid_size, config.grid_min_ratio);
      EstimatorPath path = lasso_path(data, grid);
      int oracle = oracle_index(path, truth, data.X);
      double oracle_loss =
          (data.X * (path.fits[oracle].beta - truth.beta0)).squaredNorm();
      auto ratio = [&](const Vector& beta) {
        double loss = (data.X * (beta - truth.beta0)).squaredNorm();
        if (oracle_loss <= 0.0) return loss <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
        return loss / oracle_loss;
      };

      PathFactory factory = [&](const Dataset& d) { return lasso_path(d, grid); };
      SelectionReport cv = vfold_cv_select(
          factory, data, config.vfolds,
          splitmix64(config.seed ^ (0x5cf5ULL + rep)));

      Collection coll = build_collection_coordinate(path, data);
      SelectionReport ls = linselect_select(path, coll, data);

      FitResult sr = sqrt_lasso_fit(data, sqrt_lasso_lambda(config));

      out.values = {ratio(path.fits[cv.chosen_index].beta),
                    ratio(path.fits[ls.chosen_index].beta), ratio(sr.beta)};
    } catch (const Error&) {
      out.failed = true;
    }
  });

  std::vector<double> cv_r, ls_r, sr_r;
  for (int rep = 0; rep < config.reps; ++rep) {
    if (outcomes[rep].failed) {
      report.failed_reps.push_back(rep);
      continue;
    }
    cv_r.push_back(outcomes[rep].values[0]);
    ls_r.push_back(outcomes[rep].values[1]);
    sr_r.push_back(outcomes[rep].values[2]);
  }
  report.methods.push_back(summarize("lasso-cv", "risk-ratio", std::move(cv_r)));
  report.methods.push_back(
      summarize("lasso-linselect", "risk-ratio", std::move(ls_r)));
  report.methods.push_back(
      summarize("sqrt-lasso", "risk-ratio", std::move(sr_r)));
  return report;
}

namespace {

EstimatorPath gauss_refit_path(const Dataset& data, const EstimatorPath& base) {
  EstimatorPath out;
  out.grid = base.grid;
  out.fits.reserve(base.fits.size());
  for (const FitResult& fit : base.fits) {
    FitResult refit = gauss_lasso_refit(data, fit.support);
    refit.lambda = fit.lambda;
    out.fits.push_back(std::move(refit));
  }
  return out;
}

}  // namespace

MetricsReport run_experiment2(const SimConfig& config) {
  config.validate();
  MetricsReport report;
  report.experiment = "experiment2";
  report.config = config;

  std::vector<RepOutcome> outcomes(config.reps);
  parallel_for(config.reps, config.workers, [&](int rep) {
    RepOutcome& out = outcomes[rep];
    try {
      auto [data, truth] = generate_instance(config, rep);
      std::vector<double> grid =
          default_lambda_grid(data, config.grid_size, config.grid_min_ratio);
      EstimatorPath lpath = lasso_path(data, grid);
      EstimatorPath gpath = gauss_refit_path(data, lpath);

      PathFactory factory = [&](const Dataset& d) {
        return gauss_refit_path(d, lasso_path(d, grid));
      };
      SelectionReport cv = vfold_cv_select(
          factory, data, config.vfolds,
          splitmix64(config.seed ^ (0x9d2cULL + rep)));

      Collection coll = build_collection_coordinate(gpath, data);
      SelectionReport ls = linselect_select(gpath, coll, data);

      FitResult sr = sqrt_lasso_fit(data, sqrt_lasso_lambda(config));

      auto [fdr_cv, pow_cv] =
          fdr_power(gpath.fits[cv.chosen_index].support, truth.support0);
      auto [fdr_ls, pow_ls] =
          fdr_power(gpath.fits[ls.chosen_index].support, truth.support0);
      auto [fdr_sr, pow_sr] = fdr_power(sr.support, truth.support0);
      out.values = {fdr_cv, pow_cv, fdr_ls, pow_ls, fdr_sr, pow_sr};
    } catch (const Error&) {
      out.failed = true;
    }
  });

  std::vector<double> f_cv, p_cv, f_ls, p_ls, f_sr, p_sr;
  for (int rep = 0; rep < config.reps; ++rep) {
    if (outcomes[rep].failed) {
      report.failed_reps.push_back(rep);
      continue;
    }
    const auto& v = outcomes[rep].values;
    f_cv.push_back(v[0]);
    p_cv.push_back(v[1]);
    f_ls.push_back(v[2]);
    p_ls.push_back(v[3]);
    f_sr.push_back(v[4]);
    p_sr.push_back(v[5]);
  }
  report.methods.push_back(summarize("gauss-lasso-cv", "fdr", std::move(f_cv)));
  report.methods.push_back(summarize("gauss-lasso-cv", "power", std::move(p_cv)));
  report.methods.push_back(
      summarize("gauss-lasso-linselect", "fdr", std::move(f_ls)));
  report.methods.push_back(
      summarize("gauss-lasso-linselect", "power", std::move(p_ls)));
  report.methods.push_back(summarize("sqrt-lasso", "fdr", std::move(f_sr)));
  report.methods.push_back(summarize("sqrt-lasso", "power", std::move(p_sr)));
  return report;
}

namespace {

// Identity-design thresholding path scored by the modified BIC, evaluated
// over candidate thresholds at the sorted |y| values.
struct BicDemoResult {
  double support_size = 0.0;
  double risk = 0.0;
};

double soft_rss(const std::vector<double>& abs_sorted,
                const std::vector<double>& sq_prefix, double t) {
  // rss(t) = sum_{|y|<=t} y^2 + t^2 #{|y|>t}
  auto it = std::upper_bound(abs_sorted.begin(), abs_sorted.end(), t);
  std::size_t below = static_cast<std::size_t>(it - abs_sorted.begin());
  double rss = sq_prefix[below];
  rss += t * t * static_cast<double>(abs_sorted.size() - below);
  return rss;
}

BicDemoResult bic_tuned_soft(const Vector& y) {
  const int n = static_cast<int>(y.size());
  std::vector<double> abs_sorted(n);
  for (int i = 0; i < n; ++i) abs_sorted[i] = std::fabs(y[i]);
  std::sort(abs_sorted.begin(), abs_sorted.end());
  std::vector<double> sq_prefix(n + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    sq_prefix[i + 1] = sq_prefix[i] + abs_sorted[i] * abs_sorted[i];
  }
  const double logn = std::log(static_cast<double>(n));

  double best = std::numeric_limits<double>::infinity();
  double best_t = abs_sorted[n - 1];
  for (int i = 0; i < n; ++i) {
    double t = abs_sorted[i];
    int supp = n - 1 - i;  // strictly above t
    if (2 * supp > n) continue;
    double rss = soft_rss(abs_sorted, sq_prefix, t);
    if (!(rss > 0.0)) continue;
    double crit = n * std::log(rss / n) + logn * supp;
    if (crit < best) {
      best = crit;
      best_t = t;
    }
  }
  BicDemoResult out;
  for (int i = 0; i < n; ++i) {
    double b = std::fabs(y[i]) > best_t ? (std::fabs(y[i]) - best_t) : 0.0;
    if (b > 0.0) {
      out.support_size += 1.0;
      out.risk += b * b;
    }
  }
  return out;
}

BicDemoResult bic_tuned_scalar(const Vector& y, ThresholdKind kind) {
  const int n = static_cast<int>(y.size());
  std::vector<double> abs_sorted(n);
  for (int i = 0; i < n; ++i) abs_sorted[i] = std::fabs(y[i]);
  std::sort(abs_sorted.begin(), abs_sorted.end());
  const double logn = std::log(static_cast<double>(n));

  double best = std::numeric_limits<double>::infinity();
  double best_lambda = abs_sorted[n - 1] * (1.0 + 1e-12);
  bool found = false;
  for (int i = 0; i < n; ++i) {
    double lambda = abs_sorted[i];
    double rss = 0.0;
    int supp = 0;
    for (int j = 0; j < n; ++j) {
      double b = scalar_threshold(kind, y[j], lambda);
      double d = y[j] - b;
      rss += d * d;
      if (b != 0.0) ++supp;
    }
    if (2 * supp > n) continue;
    if (!(rss > 0.0)) continue;
    double crit = n * std::log(rss / n) + logn * supp;
    if (crit < best) {
      best = crit;
      best_lambda = lambda;
      found = true;
    }
  }
  if (!found) best_lambda = std::nextafter(abs_sorted[n - 1], 1e300);
  BicDemoResult out;
  for (int j = 0; j < n; ++j) {
    double b = scalar_threshold(kind, y[j], best_lambda);
    if (b != 0.0) {
      out.support_size += 1.0;
      out.risk += b * b;
    }
  }
  return out;
}

}  // namespace

MetricsReport run_bic_demo(int n, int reps, std::uint64_t seed, int workers,
                           double sigma) {
  if (n < 2 || reps < 1) throw ConfigError("run_bic_demo: need n >= 2, reps >= 1");
  MetricsReport report;
  report.experiment = "bic-demo";
  report.config = SimConfig{};
  report.config.n = n;
  report.config.p = n;
  report.config.design = DesignFamily::identity;
  report.config.k = 0;
  report.config.sigma = sigma;
  report.config.beta_magnitude = 0.0;
  report.config.reps = reps;
  report.config.seed = seed;
  report.config.workers = workers;

  std::vector<std::array<BicDemoResult, 3>> outcomes(reps);
  parallel_for(reps, workers, [&](int rep) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(rep));
    Vector y(n);
    for (int i = 0; i < n; ++i) y[i] = sigma * rng.normal();
    outcomes[rep][0] = bic_tuned_soft(y);
    outcomes[rep][1] = bic_tuned_scalar(y, ThresholdKind::scad);
    outcomes[rep][2] = bic_tuned_scalar(y, ThresholdKind::hard);
  });

  const char* names[3] = {"lasso-bic", "scad-bic", "hard-threshold-bic"};
  for (int m = 0; m < 3; ++m) {
    std::vector<double> supp, risk;
    for (int rep = 0; rep < reps; ++rep) {
      supp.push_back(outcomes[rep][m].support_size);
      risk.push_back(outcomes[rep][m].risk);
    }
    report.methods.push_back(summarize(names[m], "support-size", std::move(supp)));
    report.methods.push_back(summarize(names[m], "risk", std::move(risk)));
  }
  return report;
}

const MethodSummary& find_summary(const MetricsReport& report,
                                  const std::string& name,
                                  const std::string& metric) {
  for (const auto& m : report.methods) {
    if (m.name == name && m.metric == metric) return m;
  }
  throw ConfigError("summary not found: " + name + "/" + metric);
}

}  // namespace pivotal
