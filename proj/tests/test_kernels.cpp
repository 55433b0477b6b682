#include <doctest.h>

#include <cmath>
#include <vector>

#include "pivotal/kernels.hpp"
#include "pivotal/rng.hpp"

namespace k = pivotal::kernels;

namespace {

std::vector<double> random_vec(pivotal::Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

}  // namespace

TEST_CASE("dispatched kernels match the scalar reference") {
  pivotal::Rng rng(42);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 15u, 31u, 100u, 1000u}) {
    auto a = random_vec(rng, n);
    auto b = random_vec(rng, n);
    double tol = 1e-13 * (static_cast<double>(n) + 1.0);

    CHECK(k::dot(a.data(), b.data(), n) ==
          doctest::Approx(k::scalar::dot(a.data(), b.data(), n)).epsilon(tol));
    CHECK(k::nrm2sq(a.data(), n) ==
          doctest::Approx(k::scalar::nrm2sq(a.data(), n)).epsilon(tol));
    CHECK(k::sum(a.data(), n) ==
          doctest::Approx(k::scalar::sum(a.data(), n)).epsilon(tol));
    CHECK(k::max_abs(a.data(), n) == k::scalar::max_abs(a.data(), n));

    auto y1 = b;
    auto y2 = b;
    k::axpy(0.37, a.data(), y1.data(), n);
    k::scalar::axpy(0.37, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("forcing the scalar lane changes the dispatch, not the values") {
  pivotal::Rng rng(7);
  auto a = random_vec(rng, 257);
  auto b = random_vec(rng, 257);
  double with_dispatch = k::dot(a.data(), b.data(), a.size());
  k::force_isa(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  double forced = k::dot(a.data(), b.data(), a.size());
  k::reset_isa();
  CHECK(forced == doctest::Approx(with_dispatch).epsilon(1e-13));
  CHECK(forced == k::scalar::dot(a.data(), b.data(), a.size()));
}

TEST_CASE("kernel edge cases") {
  CHECK(k::dot(nullptr, nullptr, 0) == 0.0);
  CHECK(k::sum(nullptr, 0) == 0.0);
  CHECK(k::max_abs(nullptr, 0) == 0.0);
  double one = -3.5;
  CHECK(k::max_abs(&one, 1) == 3.5);
  CHECK(k::nrm2sq(&one, 1) == doctest::Approx(12.25));
}
