#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pivotal/lasso.hpp"
#include "pivotal/refit.hpp"
#include "pivotal/rng.hpp"

using namespace pivotal;

TEST_CASE("refit with empty support is the zero fit") {
  Rng rng(400);
  auto inst = oracles::random_instance(rng, 10, 4, 2, 1.0, 0.5);
  Dataset data(inst.X, inst.y);
  FitResult fit = gauss_lasso_refit(data, Support(std::vector<int>{}));
  CHECK(fit.beta.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(fit.rss == doctest::Approx(data.y.squaredNorm()));
}

TEST_CASE("refit on an invertible square design interpolates") {
  Rng rng(401);
  Matrix X(4, 4);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) X(i, j) = rng.normal();
  Vector y(4);
  for (int i = 0; i < 4; ++i) y[i] = rng.normal();
  Dataset data(X, y);
  FitResult fit = gauss_lasso_refit(data, Support({0, 1, 2, 3}));
  CHECK(fit.rss < 1e-18);
  CHECK_FALSE(fit.rank_deficient);
}

TEST_CASE("refit never does worse than the lasso on the same support") {
  Rng rng(402);
  for (int rep = 0; rep < 10; ++rep) {
    auto inst = oracles::random_instance(rng, 20, 8, 3, 1.5, 0.6);
    Dataset data(inst.X, inst.y);
    FitResult lasso = lasso_fit(data, 1.0);
    FitResult refit = gauss_lasso_refit(data, lasso.support);
    CHECK(refit.rss <= lasso.rss + 1e-10);
    // Residual orthogonal to the support columns.
    Vector r = data.y - data.X * refit.beta;
    for (int j : lasso.support.indices()) {
      CHECK(std::fabs(data.X.col(j).dot(r)) < 1e-9);
    }
  }
}

TEST_CASE("rank-deficient support is flagged and solved at minimum norm") {
  Rng rng(403);
  Matrix X(6, 3);
  for (int i = 0; i < 6; ++i) X(i, 0) = rng.normal();
  X.col(1) = X.col(0);
  for (int i = 0; i < 6; ++i) X(i, 2) = rng.normal();
  Vector y(6);
  for (int i = 0; i < 6; ++i) y[i] = rng.normal();
  Dataset data(X, y);
  FitResult fit = gauss_lasso_refit(data, Support({0, 1, 2}));
  CHECK(fit.rank_deficient);
  CHECK(fit.beta[0] == doctest::Approx(fit.beta[1]).epsilon(1e-9));
}

TEST_CASE("support larger than n is rejected") {
  Rng rng(404);
  auto inst = oracles::random_instance(rng, 3, 5, 0, 0.0, 1.0);
  Dataset data(inst.X, inst.y);
  CHECK_THROWS_AS(gauss_lasso_refit(data, Support({0, 1, 2, 3})), DomainError);
}

TEST_CASE("hard threshold keeps or kills coordinates") {
  CHECK(scalar_threshold(ThresholdKind::hard, 3.0, 1.0) == 3.0);
  CHECK(scalar_threshold(ThresholdKind::hard, 0.5, 1.0) == 0.0);
  CHECK(scalar_threshold(ThresholdKind::hard, -1.0, 1.0) == -1.0);  // tie kept
}

TEST_CASE("scad at the origin stays zero") {
  for (double lambda : {0.2, 1.0, 4.0}) {
    CHECK(scalar_threshold(ThresholdKind::scad, 0.0, lambda) == 0.0);
  }
}

TEST_CASE("scad matches a fine scalar grid search") {
  auto scad_pen = [](double x, double lambda, double a) {
    x = std::fabs(x);
    if (x <= lambda) return lambda * x;
    if (x <= a * lambda) {
      return (2.0 * a * lambda * x - x * x - lambda * lambda) / (2.0 * (a - 1.0));
    }
    return lambda * lambda * (a + 1.0) / 2.0;
  };
  for (double y : {2.0, -2.0, 0.7, 1.4, 3.1, 5.0}) {
    double best = 0.0;
    double best_val = 1e300;
    for (double b = -6.0; b <= 6.0; b += 1e-6) {
      double val = (y - b) * (y - b) + scad_pen(b, 1.0, 3.0);
      if (val < best_val) {
        best_val = val;
        best = b;
      }
    }
    CHECK(scalar_threshold(ThresholdKind::scad, y, 1.0, 3.0) ==
          doctest::Approx(best).epsilon(1e-4));
  }
}

TEST_CASE("scad rejects a <= 2") {
  CHECK_THROWS_AS(scalar_threshold(ThresholdKind::scad, 1.0, 1.0, 2.0), DomainError);
}
