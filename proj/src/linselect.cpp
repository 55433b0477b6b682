#include "pivotal/linselect.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "pivotal/penalties.hpp"

namespace pivotal {

namespace {

bool space_admissible(int n, int dim, double delta) {
  return dim >= 1 && 2 * dim <= n - 2 && delta <= 2.0 * n / 3.0;
}

}  // namespace

namespace {

// The weight may depend on the space dimension (= rank), which can fall
// below |J| for collinear columns.
ModelSpace make_model_space_weighted(const Dataset& data, const Support& J,
                                     const std::function<double(int)>& delta_of_dim,
                                     bool* admissible) {
  ModelSpace space;
  space.columns = J;
  space.projector = Projector(data.X, J);
  space.dim = space.projector.dim();
  bool ok = space.dim >= 1;
  if (ok) {
    space.delta = delta_of_dim(space.dim);
    ok = space_admissible(data.n(), space.dim, space.delta);
  }
  if (admissible) *admissible = ok;
  if (!ok) return space;
  space.pen = 1.1 * pen_delta_solve(data.n(), space.dim, space.delta);
  double rss = (data.y - space.projector.apply(data.y)).squaredNorm();
  space.sigma2 = rss / (data.n() - space.dim);
  return space;
}

}  // namespace

ModelSpace make_model_space(const Dataset& data, const Support& J,
                            double delta, bool* admissible) {
  return make_model_space_weighted(data, J, [delta](int) { return delta; },
                                   admissible);
}

Collection build_collection_coordinate(const EstimatorPath& path,
                                       const Dataset& data) {
  if (data.p() < 2) {
    throw DomainError("coordinate collection needs p >= 2");
  }
  const double card_bound = data.n() / (3.0 * std::log(static_cast<double>(data.p())));
  std::set<Support> seen;
  Collection coll;
  const int p = data.p();
  for (const FitResult& fit : path.fits) {
    const Support& J = fit.support;
    if (J.empty() || J.size() > card_bound) continue;
    if (!seen.insert(J).second) continue;
    bool ok = false;
    ModelSpace space = make_model_space_weighted(
        data, J, [p](int d) { return delta_coordinate(p, d); }, &ok);
    if (ok) coll.spaces.push_back(std::move(space));
  }
  coll.empty_flagged = coll.spaces.empty();
  return coll;
}

Collection build_collection_group(const EstimatorPath& path,
                                  const GroupStructure& groups,
                                  const Dataset& data) {
  groups.validate(data.p());
  const int M = groups.num_groups();
  if (M < 2) throw DomainError("group collection needs M >= 2");
  const double card_bound = data.n() / (3.0 * std::log(static_cast<double>(M)));
  const double size_bound = data.n() / 2.0 - 1.0;

  std::set<std::vector<int>> seen;
  Collection coll;
  for (const FitResult& fit : path.fits) {
    std::vector<int> active;
    std::size_t total = 0;
    for (int k = 0; k < M; ++k) {
      bool nonzero = false;
      for (int j : groups.groups[k]) {
        if (fit.support.contains(j)) {
          nonzero = true;
          break;
        }
      }
      if (nonzero) {
        active.push_back(k);
        total += groups.groups[k].size();
      }
    }
    if (active.empty() || active.size() > card_bound) continue;
    if (static_cast<double>(total) > size_bound) continue;
    if (!seen.insert(active).second) continue;

    std::vector<int> cols;
    for (int k : active) {
      cols.insert(cols.end(), groups.groups[k].begin(), groups.groups[k].end());
    }
    double delta = delta_group(M, static_cast<int>(active.size()));
    bool ok = false;
    ModelSpace space = make_model_space(data, Support(cols), delta, &ok);
    space.groups = active;
    if (ok) coll.spaces.push_back(std::move(space));
  }
  coll.empty_flagged = coll.spaces.empty();
  return coll;
}

Collection build_collection_full(const Dataset& data, int max_card) {
  const int p = data.p();
  if (p > 12) {
    throw UnsupportedSizeError("exhaustive collection limited to p <= 12");
  }
  const double card_bound =
      std::min<double>(max_card, data.n() / (3.0 * std::log(static_cast<double>(p))));
  Collection coll;
  for (unsigned mask = 1; mask < (1u << p); ++mask) {
    int card = __builtin_popcount(mask);
    if (card > card_bound) continue;
    std::vector<int> idx;
    for (int j = 0; j < p; ++j) {
      if (mask & (1u << j)) idx.push_back(j);
    }
    bool ok = false;
    ModelSpace space = make_model_space_weighted(
        data, Support(idx), [p](int d) { return delta_coordinate(p, d); }, &ok);
    if (ok) coll.spaces.push_back(std::move(space));
  }
  std::sort(coll.spaces.begin(), coll.spaces.end(),
            [](const ModelSpace& a, const ModelSpace& b) {
              return std::make_pair(a.dim, a.columns.indices()) <
                     std::make_pair(b.dim, b.columns.indices());
            });
  coll.empty_flagged = coll.spaces.empty();
  return coll;
}

namespace {

CritParts criterion_from_prediction(const Vector& xb, const ModelSpace& space,
                                    const Vector& y) {
  Vector proj = space.projector.apply(xb);
  CritParts parts;
  parts.fit = (y - proj).squaredNorm();
  parts.approx = 0.5 * (xb - proj).squaredNorm();
  parts.penalty = space.pen * space.sigma2;
  return parts;
}

}  // namespace

CritParts linselect_criterion(const FitResult& fit, const ModelSpace& space,
                              const Dataset& data) {
  return criterion_from_prediction(data.X * fit.beta, space, data.y);
}

SelectionReport linselect_select(const EstimatorPath& path,
                                 const Collection& collection,
                                 const Dataset& data) {
  if (path.fits.empty()) throw ConfigError("linselect_select: empty path");
  SelectionReport report;
  report.method = "linselect";

  // Fallback space when no candidate survived: S = {0}, zero projector,
  // sigma2 = ||Y||^2/n, penalty from (dim 1, log p).
  double fallback_pen = 0.0;
  if (collection.spaces.empty()) {
    report.flagged = true;
    report.flag_reason = "empty-collection";
    fallback_pen = 1.1 * pen_delta_solve(
        data.n(), 1, std::log(static_cast<double>(std::max(2, data.p()))));
  }

  const double yy = data.y.squaredNorm();
  for (int i = 0; i < path.size(); ++i) {
    const FitResult& fit = path.fits[i];
    ReportRow row;
    row.lambda = path.grid[i];
    row.support_size = fit.support.size();
    if (!collection.spaces.empty()) {
      Vector xb = data.X * fit.beta;
      double best = std::numeric_limits<double>::infinity();
      const ModelSpace* best_space = nullptr;
      CritParts best_parts;
      for (const ModelSpace& space : collection.spaces) {
        CritParts parts = criterion_from_prediction(xb, space, data.y);
        if (parts.total() < best) {
          best = parts.total();
          best_space = &space;
          best_parts = parts;
        }
      }
      row.crit = best;
      row.best_model = best_space->columns;
      row.components = {{"fit", best_parts.fit},
                        {"approx", best_parts.approx},
                        {"penalty", best_parts.penalty},
                        {"sigma2", best_space->sigma2}};
    } else {
      Vector xb = data.X * fit.beta;
      double fit_term = yy;
      double approx = 0.5 * xb.squaredNorm();
      double penalty = fallback_pen * (yy / data.n());
      row.crit = fit_term + approx + penalty;
      row.components = {{"fit", fit_term},
                        {"approx", approx},
                        {"penalty", penalty},
                        {"sigma2", yy / data.n()}};
    }
    report.rows.push_back(std::move(row));
  }

  int best_idx = 0;
  for (int i = 1; i < static_cast<int>(report.rows.size()); ++i) {
    const ReportRow& a = report.rows[i];
    const ReportRow& b = report.rows[best_idx];
    // Ties: sparser support first, then larger lambda (smaller index).
    if (a.crit < b.crit ||
        (a.crit == b.crit && a.support_size < b.support_size)) {
      best_idx = i;
    }
  }
  report.chosen_index = best_idx;
  report.chosen_lambda = report.rows[best_idx].lambda;
  report.chosen_support = path.fits[best_idx].support;
  report.chosen_model = report.rows[best_idx].best_model;
  for (const auto& [key, value] : report.rows[best_idx].components) {
    if (key == "sigma2") report.sigma2 = value;
  }
  return report;
}

}  // namespace pivotal
