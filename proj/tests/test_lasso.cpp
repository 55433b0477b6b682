#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pivotal/lasso.hpp"
#include "pivotal/model_core.hpp"
#include "pivotal/rng.hpp"

using namespace pivotal;

namespace {

Dataset random_dataset(Rng& rng, int n, int p, int k = 2, double mag = 2.0,
                       double sigma = 0.5) {
  auto inst = oracles::random_instance(rng, n, p, k, mag, sigma);
  return Dataset(inst.X, inst.y);
}

}  // namespace

TEST_CASE("above the null threshold the fit is exactly zero") {
  Rng rng(100);
  Dataset data = random_dataset(rng, 12, 6);
  Vector g = data.X.transpose() * data.y;
  double lmax = 2.0 * g.lpNorm<Eigen::Infinity>();
  FitResult fit = lasso_fit(data, lmax * 1.0000001);
  CHECK(fit.support.empty());
  CHECK(fit.beta.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(fit.rss == doctest::Approx(data.y.squaredNorm()));
}

TEST_CASE("orthonormal design soft-thresholds the correlations at lambda/2") {
  Matrix X = Matrix::Identity(2, 2);
  Vector y(2);
  y << 3.0, 0.5;
  Dataset data(X, y);
  FitResult fit = lasso_fit(data, 2.0);
  CHECK(fit.beta[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fit.beta[1] == doctest::Approx(0.0));

  // A full orthonormal 6x6 design via QR.
  Rng rng(101);
  Matrix R(6, 6);
  for (int j = 0; j < 6; ++j)
    for (int i = 0; i < 6; ++i) R(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(R);
  Matrix Q = qr.householderQ() * Matrix::Identity(6, 6);
  Vector y2(6);
  for (int i = 0; i < 6; ++i) y2[i] = rng.normal() * 2.0;
  Dataset d2(Q, y2);
  double lambda = 1.3;
  FitResult f2 = lasso_fit(d2, lambda);
  Vector corr = Q.transpose() * y2;
  for (int j = 0; j < 6; ++j) {
    double st = corr[j] > lambda / 2 ? corr[j] - lambda / 2
                : corr[j] < -lambda / 2 ? corr[j] + lambda / 2 : 0.0;
    CHECK(f2.beta[j] == doctest::Approx(st).epsilon(1e-8));
  }
}

TEST_CASE("stationarity certificate holds and is re-verifiable") {
  Rng rng(102);
  for (int rep = 0; rep < 10; ++rep) {
    Dataset data = random_dataset(rng, 20, 8);
    FitResult fit = lasso_fit(data, 1.0);
    CHECK(fit.kkt_violation < 1e-8);
    CHECK(lasso_kkt_violation(data, 1.0, fit.beta) < 1e-8);
  }
}

TEST_CASE("objective matches a long-run subgradient oracle") {
  Rng rng(103);
  Dataset data = random_dataset(rng, 20, 8);
  const double lambda = 1.0;
  FitResult fit = lasso_fit(data, lambda);
  double solver_obj = lasso_objective(data, lambda, fit.beta);

  auto objective = [&](const Vector& b) { return lasso_objective(data, lambda, b); };
  auto subgrad = [&](const Vector& b) {
    Vector g = -2.0 * (data.X.transpose() * (data.y - data.X * b));
    for (int j = 0; j < b.size(); ++j) {
      g[j] += lambda * (b[j] > 0 ? 1.0 : (b[j] < 0 ? -1.0 : 0.0));
    }
    return g;
  };
  auto oracle = oracles::subgradient_minimize(objective, subgrad,
                                              Vector::Zero(data.p()), 1'000'000, 0.5);
  CHECK(std::fabs(solver_obj - oracle.objective) < 1e-6);
}

TEST_CASE("solution map is homogeneous in (y, lambda)") {
  Rng rng(104);
  const double c = 7.0;
  for (int rep = 0; rep < 5; ++rep) {
    Dataset data = random_dataset(rng, 15, 6);
    FitResult base = lasso_fit(data, 0.8);
    Dataset scaled(data.X, Vector(c * data.y));
    FitResult big = lasso_fit(scaled, c * 0.8);
    CHECK((big.beta - c * base.beta).lpNorm<Eigen::Infinity>() < 1e-8);
  }
}

TEST_CASE("default grid starts at the null threshold") {
  Rng rng(105);
  Dataset data = random_dataset(rng, 18, 7);
  auto grid = default_lambda_grid(data);
  CHECK(grid.size() == 100);
  Vector g = data.X.transpose() * data.y;
  CHECK(grid.front() == doctest::Approx(2.0 * g.lpNorm<Eigen::Infinity>()));
  CHECK(grid.back() == doctest::Approx(grid.front() * 1e-3).epsilon(1e-9));
  EstimatorPath path = lasso_path(data, grid);
  CHECK(path.fits.front().support.empty());
  for (int i = 0; i < path.size(); ++i) {
    CHECK(lasso_kkt_violation(data, path.grid[i], path.fits[i].beta) < 1e-8);
  }
}

TEST_CASE("path supports are nested on an orthonormal design") {
  Rng rng(106);
  Matrix R(10, 10);
  for (int j = 0; j < 10; ++j)
    for (int i = 0; i < 10; ++i) R(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(R);
  Matrix Q = qr.householderQ() * Matrix::Identity(10, 10);
  Vector y(10);
  for (int i = 0; i < 10; ++i) y[i] = 3.0 * rng.normal();
  Dataset data(Q, y);
  EstimatorPath path = lasso_path(data);
  for (int i = 1; i < path.size(); ++i) {
    for (int j : path.fits[i - 1].support.indices()) {
      CHECK(path.fits[i].support.contains(j));
    }
  }
}

TEST_CASE("a single-point grid reduces to one fit") {
  Rng rng(107);
  Dataset data = random_dataset(rng, 12, 5);
  EstimatorPath path = lasso_path(data, {0.9});
  CHECK(path.size() == 1);
  FitResult direct = lasso_fit(data, 0.9);
  CHECK((path.fits[0].beta - direct.beta).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("warm starts do not change the solution") {
  Rng rng(108);
  Dataset data = random_dataset(rng, 25, 10);
  FitResult cold = lasso_fit(data, 0.5);
  Vector warm = Vector::Constant(10, 0.3);
  FitResult warmed = lasso_fit(data, 0.5, &warm);
  CHECK((cold.beta - warmed.beta).lpNorm<Eigen::Infinity>() < 1e-7);
}

TEST_CASE("support-size bound holds on the clean-noise event") {
  // lambda^2 ||b||_0 <= 16 phi_J ||X(b - b0)||^2 whenever |X'eps|_inf <= lambda/4.
  Rng rng(109);
  int checked = 0;
  for (int rep = 0; rep < 40; ++rep) {
    auto inst = oracles::random_instance(rng, 30, 10, 3, 3.0, 0.3, true);
    Vector eps = inst.y - inst.X * inst.beta0;
    double lambda = 8.0 * 0.3 * std::sqrt(std::log(10.0));
    if ((inst.X.transpose() * eps).lpNorm<Eigen::Infinity>() > lambda / 4.0) continue;
    Dataset data(inst.X, inst.y);
    FitResult fit = lasso_fit(data, lambda);
    if (fit.support.empty()) continue;
    double phi = submatrix_largest_eigenvalue(data.X, fit.support);
    double loss = (data.X * (fit.beta - inst.beta0)).squaredNorm();
    CHECK(lambda * lambda * fit.support.size() <= 16.0 * phi * loss * (1.0 + 1e-9));
    ++checked;
  }
  CHECK(checked > 5);
}

TEST_CASE("zero response gives a zero fit for positive lambda") {
  Matrix X = Matrix::Identity(4, 4);
  Dataset data(X, Vector::Zero(4));
  FitResult fit = lasso_fit(data, 0.1);
  CHECK(fit.support.empty());
  auto grid = default_lambda_grid(data);
  CHECK(grid.size() == 1);
  CHECK(grid[0] == 0.0);
}
