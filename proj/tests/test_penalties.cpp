#include <doctest.h>

#include <cmath>
#include <thread>

#include "oracles.hpp"
#include "pivotal/errors.hpp"
#include "pivotal/penalties.hpp"
#include "pivotal/special_functions.hpp"

using namespace pivotal;

TEST_CASE("coordinate complexity weight") {
  CHECK(delta_coordinate(17, 1) == doctest::Approx(std::log(17.0)).epsilon(1e-12));
  CHECK(delta_coordinate(10, 2) ==
        doctest::Approx(std::log(45.0) + std::log(2.0)).epsilon(1e-12));
  CHECK(delta_coordinate(100, 7) ==
        doctest::Approx(static_cast<double>(oracles::exact_log_binomial(100, 7)) +
                        std::log(7.0))
            .epsilon(1e-10));
  CHECK_THROWS_AS(delta_coordinate(10, 0), DomainError);
  CHECK_THROWS_AS(delta_coordinate(10, 11), DomainError);
}

TEST_CASE("group complexity weight") {
  CHECK(delta_group(9, 1) == doctest::Approx(std::log(9.0)).epsilon(1e-12));
  CHECK(delta_group(6, 2) ==
        doctest::Approx(std::log(2.0) + std::log(15.0)).epsilon(1e-12));
  CHECK(delta_group(40, 5) ==
        doctest::Approx(std::log(5.0) +
                        static_cast<double>(oracles::exact_log_binomial(40, 5)))
            .epsilon(1e-10));
  CHECK_THROWS_AS(delta_group(6, 0), DomainError);
  CHECK_THROWS_AS(delta_group(6, 7), DomainError);
}

TEST_CASE("penalty solver hits the defining equation") {
  for (auto [n, D, delta] : {std::tuple<int, int, double>{40, 4, 5.0},
                             {30, 1, 1.0},
                             {60, 3, std::log(100.0)},
                             {120, 8, 10.0}}) {
    double x = pen_delta_solve(n, D, delta);
    CHECK(x > 0.0);
    double residual = chi2_gap_mean(D + 1, n - D - 1, x / (n - D)) - std::exp(-delta);
    CHECK(std::fabs(residual) <= 1e-10);
  }
}

TEST_CASE("penalty equation matches Monte-Carlo at (40, 4, 5)") {
  double x = pen_delta_solve(40, 4, 5.0);
  pivotal::Rng rng(91);
  auto mc = oracles::mc_chi2_gap_mean(5, 35, x / 36.0, 1'000'000, rng);
  CHECK(std::fabs(mc.mean - std::exp(-5.0)) <= 3.0 * mc.se);
}

TEST_CASE("penalty is strictly increasing in the weight") {
  CHECK(pen_delta_solve(50, 3, 2.0) < pen_delta_solve(50, 3, 6.0));
  double prev = 0.0;
  for (double delta : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    double x = pen_delta_solve(64, 5, delta);
    CHECK(x > prev);
    prev = x;
  }
}

TEST_CASE("penalty respects the quantile lower bound loosely") {
  // pen >= 2 delta + D - C with an unspecified constant; C <= 10 holds on
  // this grid empirically.
  double x = pen_delta_solve(100, 1, std::log(100.0));
  CHECK(x >= 2.0 * std::log(100.0) + 1.0 - 10.0);
}

TEST_CASE("penalty solver domain checks") {
  CHECK_THROWS_AS(pen_delta_solve(10, 0, 1.0), DomainError);
  CHECK_THROWS_AS(pen_delta_solve(10, 5, 1.0), DomainError);
  CHECK_THROWS_AS(pen_delta_solve(30, 2, 21.0), DomainError);
  CHECK_THROWS_AS(pen_delta_solve(30, 2, -1.0), DomainError);
}

TEST_CASE("penalty solver is deterministic and safe under concurrency") {
  double first = pen_delta_solve(44, 2, 3.5);
  std::vector<double> results(8);
  std::vector<std::thread> pool;
  for (int t = 0; t < 8; ++t) {
    pool.emplace_back([&, t] { results[t] = pen_delta_solve(44, 2, 3.5); });
  }
  for (auto& th : pool) th.join();
  for (double r : results) CHECK(r == first);
}

TEST_CASE("segmentation penalty solves its equation and grows with q") {
  const int n = 60;
  double prev = -1.0;
  for (int q = 0; q <= 5; ++q) {
    double pen = seg_pen_solve(n, q);
    double target = std::exp(-(std::log(q + 1.0) + log_binomial(n - 1, q)));
    CHECK(std::fabs(chi2_gap_mean(q + 2, n - q - 2, pen) - target) <= 1e-10);
    CHECK(pen > prev);
    prev = pen;
  }
}

TEST_CASE("segmentation penalty at q = 0 handles the unit target") {
  double pen = seg_pen_solve(60, 0);
  CHECK(pen > 0.0);
  CHECK(std::fabs(chi2_gap_mean(2, 58, pen) - 1.0) <= 1e-10);
}

TEST_CASE("segmentation penalty matches Monte-Carlo at (60, 3)") {
  double pen = seg_pen_solve(60, 3);
  pivotal::Rng rng(17);
  auto mc = oracles::mc_chi2_gap_mean(5, 55, pen, 1'000'000, rng);
  double target = std::exp(-(std::log(4.0) + log_binomial(59, 3)));
  CHECK(std::fabs(mc.mean - target) <= 3.0 * mc.se);
}

TEST_CASE("classical penalties") {
  PenaltyArgs args;
  args.dim = 3;
  CHECK(classical_penalty(PenaltyKind::aic, args) == doctest::Approx(6.0));
  args.n = 20;
  CHECK(classical_penalty(PenaltyKind::bic, args) ==
        doctest::Approx(3.0 * std::log(20.0)));

  PenaltyArgs bm;
  bm.dim = 2;
  bm.p = 8;
  bm.sigma2 = 1.0;
  CHECK(classical_penalty(PenaltyKind::birge_massart, bm) ==
        doctest::Approx(8.0 * (4.0 + std::log(4.0))).epsilon(1e-12));
  bm.sigma2.reset();
  CHECK_THROWS_AS(classical_penalty(PenaltyKind::birge_massart, bm), ConfigError);

  PenaltyArgs leb;
  leb.q = 0;
  leb.n = 3;
  leb.sigma2 = 1.0;
  CHECK(classical_penalty(PenaltyKind::lebarbier, leb) ==
        doctest::Approx(2.0 * std::log(3.0) + 5.0).epsilon(1e-12));
  leb.q = 2;
  leb.n = 30;
  leb.sigma2 = 0.5;
  CHECK(classical_penalty(PenaltyKind::lebarbier, leb) ==
        doctest::Approx(3.0 * (2.0 * std::log(10.0) + 5.0) * 0.5).epsilon(1e-12));
}
