#include "pivotal/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pivotal/linselect.hpp"
#include "pivotal/model_core.hpp"
#include "pivotal/rng.hpp"
#include "pivotal/special_functions.hpp"

namespace pivotal {

namespace {

Dataset rows_subset(const Dataset& data, const std::vector<int>& rows) {
  Matrix X(static_cast<int>(rows.size()), data.p());
  Vector y(static_cast<int>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    X.row(static_cast<int>(i)) = data.X.row(rows[i]);
    y[static_cast<int>(i)] = data.y[rows[i]];
  }
  return Dataset(std::move(X), std::move(y));
}

double heldout_error(const Dataset& data, const std::vector<int>& rows,
                     const Vector& beta) {
  double err = 0.0;
  for (int i : rows) {
    double pred = data.X.row(i).dot(beta);
    double d = data.y[i] - pred;
    err += d * d;
  }
  return err;
}

SelectionReport score_report(const std::string& method,
                             const EstimatorPath& full_path,
                             const std::vector<double>& scores, int n) {
  SelectionReport report;
  report.method = method;
  int best = 0;
  for (int i = 0; i < static_cast<int>(scores.size()); ++i) {
    ReportRow row;
    row.lambda = full_path.grid[i];
    row.crit = scores[i];
    row.support_size = full_path.fits[i].support.size();
    row.components = {{"cv_score", scores[i]}};
    report.rows.push_back(std::move(row));
    if (scores[i] < scores[best]) best = i;
  }
  report.chosen_index = best;
  report.chosen_lambda = full_path.grid[best];
  report.chosen_support = full_path.fits[best].support;
  report.sigma2 = scores[best] / n;  // held-out mean squared error
  return report;
}

}  // namespace

SelectionReport vfold_cv_select_folds(
    const PathFactory& factory, const Dataset& data,
    const std::vector<std::vector<int>>& folds) {
  const int n = data.n();
  std::vector<char> assigned(n, 0);
  for (const auto& fold : folds) {
    for (int i : fold) {
      if (i < 0 || i >= n || assigned[i]) {
        throw ConfigError("folds must partition the observations");
      }
      assigned[i] = 1;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!assigned[i]) throw ConfigError("folds must cover all observations");
  }

  EstimatorPath full_path = factory(data);
  full_path.validate();
  std::vector<double> scores(full_path.size(), 0.0);

  for (const auto& fold : folds) {
    std::vector<int> train;
    train.reserve(n - fold.size());
    std::vector<char> in_fold(n, 0);
    for (int i : fold) in_fold[i] = 1;
    for (int i = 0; i < n; ++i) {
      if (!in_fold[i]) train.push_back(i);
    }
    if (train.empty()) throw ConfigError("a fold emptied the training set");
    Dataset train_data = rows_subset(data, train);
    EstimatorPath path = factory(train_data);
    if (path.size() != full_path.size()) {
      throw ConfigError("path factory must return a fixed shared grid");
    }
    for (int i = 0; i < path.size(); ++i) {
      scores[i] += heldout_error(data, fold, path.fits[i].beta);
    }
  }
  return score_report("vfold-cv", full_path, scores, n);
}

SelectionReport vfold_cv_select(const PathFactory& factory, const Dataset& data,
                                int v, std::uint64_t seed) {
  const int n = data.n();
  if (v < 2 || v > n) throw ConfigError("vfold_cv_select: need 2 <= V <= n");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(perm);
  // Balanced contiguous blocks of the permuted order.
  std::vector<std::vector<int>> folds(v);
  int base = n / v;
  int extra = n % v;
  int pos = 0;
  for (int f = 0; f < v; ++f) {
    int size = base + (f < extra ? 1 : 0);
    for (int i = 0; i < size; ++i) folds[f].push_back(perm[pos++]);
    std::sort(folds[f].begin(), folds[f].end());
  }
  return vfold_cv_select_folds(factory, data, folds);
}

SelectionReport holdout_select_split(const PathFactory& factory,
                                     const Dataset& data,
                                     const std::vector<int>& train_rows,
                                     const std::vector<int>& val_rows) {
  if (train_rows.empty() || val_rows.empty()) {
    throw ConfigError("holdout split needs nonempty train and validation sets");
  }
  EstimatorPath full_path = factory(data);
  full_path.validate();
  Dataset train_data = rows_subset(data, train_rows);
  EstimatorPath path = factory(train_data);
  if (path.size() != full_path.size()) {
    throw ConfigError("path factory must return a fixed shared grid");
  }
  std::vector<double> scores(path.size(), 0.0);
  for (int i = 0; i < path.size(); ++i) {
    scores[i] = heldout_error(data, val_rows, path.fits[i].beta);
  }
  SelectionReport report = score_report("holdout", full_path, scores, data.n());
  return report;
}

SelectionReport holdout_select(const PathFactory& factory, const Dataset& data,
                               double split_ratio, std::uint64_t seed) {
  const int n = data.n();
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
    throw ConfigError("holdout_select: split ratio must be in (0,1)");
  }
  int train_size = static_cast<int>(std::lround(split_ratio * n));
  train_size = std::max(1, std::min(n - 1, train_size));
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(perm);
  std::vector<int> train(perm.begin(), perm.begin() + train_size);
  std::vector<int> val(perm.begin() + train_size, perm.end());
  std::sort(train.begin(), train.end());
  std::sort(val.begin(), val.end());
  return holdout_select_split(factory, data, train, val);
}

double modified_bic_criterion(int n, double rss, int support_size) {
  return n * std::log(rss / n) + std::log(static_cast<double>(n)) * support_size;
}

SelectionReport modified_bic_select(const EstimatorPath& path,
                                    const Dataset& data) {
  if (path.fits.empty()) throw ConfigError("modified_bic_select: empty path");
  const int n = data.n();
  SelectionReport report;
  report.method = "modified-bic";
  int best = -1;
  for (int i = 0; i < path.size(); ++i) {
    const FitResult& fit = path.fits[i];
    ReportRow row;
    row.lambda = path.grid[i];
    row.support_size = fit.support.size();
    bool admissible = 2 * fit.support.size() <= n;
    bool zero_rss = !(fit.rss > 0.0);
    if (zero_rss) {
      report.flagged = true;
      report.flag_reason = "zero-rss-candidate-excluded";
    }
    if (admissible && !zero_rss) {
      row.crit = modified_bic_criterion(n, fit.rss, fit.support.size());
      row.components = {{"loglik", n * std::log(fit.rss / n)},
                        {"penalty", std::log(static_cast<double>(n)) * fit.support.size()}};
      if (best < 0 || row.crit < report.rows[best].crit) best = i;
    } else {
      row.crit = std::numeric_limits<double>::infinity();
      row.components = {{"excluded", 1.0}};
    }
    report.rows.push_back(std::move(row));
  }
  if (best < 0) {
    throw ConfigError("modified_bic_select: no admissible candidate");
  }
  report.chosen_index = best;
  report.chosen_lambda = path.grid[best];
  report.chosen_support = path.fits[best].support;
  report.sigma2 = path.fits[best].rss / n;
  return report;
}

SelectionReport plugin_penalty_select(const EstimatorPath& path,
                                      const Dataset& data, PenaltyKind kind) {
  if (path.fits.empty()) throw ConfigError("plugin_penalty_select: empty path");
  const int n = data.n();
  Support all_cols = [&] {
    std::vector<int> idx(data.p());
    std::iota(idx.begin(), idx.end(), 0);
    return Support(idx);
  }();
  Projector full(data.X, all_cols);
  int rank = full.dim();
  if (rank >= n) {
    throw ConfigError("plugin variance unavailable: rank(X) >= n");
  }
  double sigma2 = (data.y - full.apply(data.y)).squaredNorm() / (n - rank);

  SelectionReport report;
  report.method = std::string("plugin-") + penalty_kind_name(kind);
  report.sigma2 = sigma2;
  // Responses inside the column span leave no residual degrees of freedom;
  // the comparison then degenerates to plain rss.
  if (sigma2 <= 1e-20 * data.y.squaredNorm() / n) {
    report.flagged = true;
    report.flag_reason = "zero-variance-estimate";
  }
  int best = 0;
  for (int i = 0; i < path.size(); ++i) {
    const FitResult& fit = path.fits[i];
    PenaltyArgs args;
    args.dim = fit.support.size();
    args.n = n;
    args.p = data.p();
    args.q = std::max(0, fit.support.size() - 1);
    args.sigma2 = sigma2;
    double pen = classical_penalty(kind, args);
    ReportRow row;
    row.lambda = path.grid[i];
    row.support_size = fit.support.size();
    row.crit = fit.rss + pen;
    row.components = {{"rss", fit.rss}, {"penalty", pen}};
    report.rows.push_back(std::move(row));
    if (report.rows[i].crit < report.rows[best].crit) best = i;
  }
  report.chosen_index = best;
  report.chosen_lambda = path.grid[best];
  report.chosen_support = path.fits[best].support;
  return report;
}

SelectionReport slope_heuristic_select(std::vector<SlopePoint> points,
                                       const SlopeOptions& opts) {
  if (points.size() < 2) {
    throw ConfigError("slope_heuristic_select: need at least two dimensions");
  }
  std::sort(points.begin(), points.end(),
            [](const SlopePoint& a, const SlopePoint& b) { return a.dim < b.dim; });
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].rss > points[i - 1].rss + 1e-9 * std::fabs(points[i - 1].rss)) {
      throw ConfigError("slope_heuristic_select: rss must be nonincreasing in dim");
    }
  }

  // Initial multiplier scale from the two largest models.
  const SlopePoint& last = points[points.size() - 1];
  const SlopePoint& prev = points[points.size() - 2];
  double guess = 1.0;
  double dshape = last.shape - prev.shape;
  if (dshape > 0.0) {
    double drss = prev.rss - last.rss;
    if (drss > 0.0) guess = drss / dshape;
  }

  auto argmin_dim = [&](double kappa) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(points.size()); ++i) {
      double ci = points[i].rss + kappa * points[i].shape;
      double cb = points[best].rss + kappa * points[best].shape;
      if (ci < cb) best = i;  // ties go to the smaller dimension
    }
    return best;
  };

  const int m = opts.grid_size;
  std::vector<double> kappas(m);
  double lo = std::log(opts.span_low * guess);
  double hi = std::log(opts.span_high * guess);
  for (int i = 0; i < m; ++i) {
    kappas[i] = std::exp(lo + (hi - lo) * i / (m - 1));
  }

  std::vector<int> selected(m);
  for (int i = 0; i < m; ++i) selected[i] = argmin_dim(kappas[i]);

  int jump_at = -1;
  int max_drop = 0;
  for (int i = 0; i + 1 < m; ++i) {
    int drop = points[selected[i]].dim - points[selected[i + 1]].dim;
    if (drop >= max_drop && drop > 0) {
      max_drop = drop;
      jump_at = i + 1;
    }
  }

  SelectionReport report;
  report.method = "slope-heuristic";
  double kappa_hat;
  if (jump_at < 0) {
    report.flagged = true;
    report.flag_reason = "no-dimension-jump";
    kappa_hat = kappas[m - 1];
  } else {
    kappa_hat = kappas[jump_at];
  }

  int chosen = argmin_dim(2.0 * kappa_hat);
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    ReportRow row;
    row.lambda = points[i].dim;
    row.support_size = points[i].dim;
    row.crit = points[i].rss + 2.0 * kappa_hat * points[i].shape;
    row.components = {{"rss", points[i].rss}, {"shape", points[i].shape}};
    report.rows.push_back(std::move(row));
  }
  report.chosen_index = chosen;
  report.chosen_lambda = points[chosen].dim;
  report.info = {{"kappa_hat", kappa_hat}, {"max_drop", static_cast<double>(max_drop)}};
  return report;
}

namespace {

struct SubsetScan {
  std::vector<Support> models;
  std::vector<double> rss;
  std::vector<int> dims;
};

// Nonempty column subsets with |J| <= max_card, in (size, lex) order.
SubsetScan scan_subsets(const Dataset& data,
                        const std::function<bool(int)>& card_ok) {
  const int p = data.p();
  if (p > 12) {
    throw UnsupportedSizeError("exhaustive benchmarks limited to p <= 12");
  }
  std::vector<std::vector<int>> subsets;
  for (unsigned mask = 1; mask < (1u << p); ++mask) {
    if (!card_ok(__builtin_popcount(mask))) continue;
    std::vector<int> idx;
    for (int j = 0; j < p; ++j) {
      if (mask & (1u << j)) idx.push_back(j);
    }
    subsets.push_back(std::move(idx));
  }
  // (size, lexicographic) order; ties in any downstream argmin then resolve
  // to the smallest model, lexicographically first.
  std::sort(subsets.begin(), subsets.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  SubsetScan scan;
  for (auto& idx : subsets) {
    Support J(std::move(idx));
    Projector proj(data.X, J);
    scan.models.push_back(J);
    scan.dims.push_back(proj.dim());
    scan.rss.push_back((data.y - proj.apply(data.y)).squaredNorm());
  }
  return scan;
}

}  // namespace

SelectionReport bm_select_exhaustive(const Dataset& data, double sigma2) {
  const int n = data.n();
  const int p = data.p();
  auto card_ok = [&](int card) {
    return 2.0 * card * (1.0 + std::log(static_cast<double>(p) / card)) <= n;
  };
  SubsetScan scan = scan_subsets(data, card_ok);

  // Full-range alternative.
  std::vector<int> all(p);
  std::iota(all.begin(), all.end(), 0);
  Projector full(data.X, Support(all));
  double full_rss = (data.y - full.apply(data.y)).squaredNorm();

  SelectionReport report;
  report.method = "bm-exhaustive";
  report.sigma2 = sigma2;
  int best = -1;
  for (std::size_t i = 0; i < scan.models.size(); ++i) {
    PenaltyArgs args;
    args.dim = scan.dims[i];
    args.p = p;
    args.sigma2 = sigma2;
    double pen = classical_penalty(PenaltyKind::birge_massart, args);
    ReportRow row;
    row.lambda = static_cast<double>(i);
    row.crit = scan.rss[i] + pen;
    row.support_size = scan.models[i].size();
    row.best_model = scan.models[i];
    row.components = {{"rss", scan.rss[i]}, {"penalty", pen}};
    report.rows.push_back(std::move(row));
    if (best < 0 || report.rows.back().crit < report.rows[best].crit) {
      best = static_cast<int>(report.rows.size()) - 1;
    }
  }
  {
    ReportRow row;
    row.lambda = static_cast<double>(report.rows.size());
    row.crit = full_rss + 2.0 * n * sigma2;
    row.support_size = p;
    row.best_model = Support(all);
    row.components = {{"rss", full_rss}, {"penalty", 2.0 * n * sigma2}};
    report.rows.push_back(std::move(row));
    if (best < 0 || report.rows.back().crit < report.rows[best].crit) {
      best = static_cast<int>(report.rows.size()) - 1;
    }
  }
  report.chosen_index = best;
  report.chosen_lambda = report.rows[best].lambda;
  report.chosen_support = report.rows[best].best_model;
  report.chosen_model = report.rows[best].best_model;
  return report;
}

Vector lb_aggregate_exhaustive(const Dataset& data, double sigma2,
                               std::vector<double>* weights_out,
                               std::vector<Support>* models_out) {
  if (!(sigma2 > 0.0)) throw DomainError("lb_aggregate: sigma2 must be positive");
  const int n = data.n();
  const int p = data.p();
  auto card_ok = [&](int card) {
    return 2.0 * card * (1.0 + std::log(static_cast<double>(p) / card)) <= n;
  };
  SubsetScan scan = scan_subsets(data, card_ok);

  std::vector<int> all(p);
  std::iota(all.begin(), all.end(), 0);
  Projector full(data.X, Support(all));
  double full_rss = (data.y - full.apply(data.y)).squaredNorm();
  int full_rank = full.dim();

  // k* of the collection: largest admissible cardinality.
  int kstar = 0;
  for (int k = 1; k <= p; ++k) {
    if (card_ok(k)) kstar = k;
  }
  kstar = std::max(kstar, 1);

  std::vector<Support> models = scan.models;
  std::vector<double> log_w;
  std::vector<double> rss = scan.rss;
  std::vector<int> dims = scan.dims;
  models.push_back(Support(all));
  rss.push_back(full_rss);
  dims.push_back(full_rank);

  for (std::size_t i = 0; i < models.size(); ++i) {
    double lw = -(rss[i] + 2.0 * sigma2 * dims[i]) / (4.0 * sigma2);
    bool is_full = (i + 1 == models.size());
    if (!is_full) {
      lw -= std::log(static_cast<double>(kstar)) + log_binomial(p, dims[i]);
    }
    log_w.push_back(lw);
  }
  double mx = *std::max_element(log_w.begin(), log_w.end());
  double z = 0.0;
  for (double lw : log_w) z += std::exp(lw - mx);
  Vector out = Vector::Zero(n);
  std::vector<double> weights(log_w.size());
  for (std::size_t i = 0; i < models.size(); ++i) {
    weights[i] = std::exp(log_w[i] - mx) / z;
    Projector proj(data.X, models[i]);
    out += weights[i] * proj.apply(data.y);
  }
  if (weights_out) *weights_out = weights;
  if (models_out) *models_out = models;
  return out;
}

SelectionReport bgh_select_exhaustive(const Dataset& data) {
  const int n = data.n();
  const int p = data.p();
  auto card_ok = [&](int card) { return 4 * card <= n - 1; };
  SubsetScan scan = scan_subsets(data, card_ok);

  SelectionReport report;
  report.method = "bgh-exhaustive";
  int best = -1;
  for (std::size_t i = 0; i < scan.models.size(); ++i) {
    int dim = scan.dims[i];
    if (dim < 1 || 2 * dim > n - 2) continue;
    double delta = delta_coordinate(p, dim);
    if (delta > 2.0 * n / 3.0) continue;
    double pen = 1.1 * pen_delta_solve(n, dim, delta);
    ReportRow row;
    row.lambda = static_cast<double>(i);
    row.crit = scan.rss[i] * (1.0 + pen / (n - dim));
    row.support_size = scan.models[i].size();
    row.best_model = scan.models[i];
    row.components = {{"rss", scan.rss[i]}, {"pen", pen},
                      {"sigma2", scan.rss[i] / (n - dim)}};
    report.rows.push_back(std::move(row));
    if (best < 0 || report.rows.back().crit < report.rows[best].crit) {
      best = static_cast<int>(report.rows.size()) - 1;
    }
  }
  if (best < 0) throw ConfigError("bgh_select_exhaustive: no admissible model");
  report.chosen_index = best;
  report.chosen_lambda = report.rows[best].lambda;
  report.chosen_support = report.rows[best].best_model;
  report.chosen_model = report.rows[best].best_model;
  for (const auto& [key, value] : report.rows[best].components) {
    if (key == "sigma2") report.sigma2 = value;
  }
  return report;
}

}  // namespace pivotal
