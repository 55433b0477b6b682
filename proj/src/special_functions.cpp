#include "pivotal/special_functions.hpp"

#include <cmath>
#include <limits>

#include "pivotal/errors.hpp"

namespace pivotal {

double log_binomial(long long p, long long d) {
  if (d < 0 || d > p) throw DomainError("log_binomial: need 0 <= d <= p");
  if (d > p - d) d = p - d;  // canonical form keeps the symmetry exact
  if (d == 0) return 0.0;
  return std::lgamma(static_cast<double>(p) + 1.0) -
         std::lgamma(static_cast<double>(d) + 1.0) -
         std::lgamma(static_cast<double>(p - d) + 1.0);
}

namespace {

// Continued fraction for I_x(a,b), modified Lentz. Converges fast for
// x < (a+1)/(a+b+2); the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) covers the rest.
double beta_cf(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("incomplete beta: need a, b > 0");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("incomplete beta: need x in [0,1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  double ln_front = a * std::log(x) + b * std::log1p(-x) -
                    std::log(a) - (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x);
  }
  double front_sym = std::exp(b * std::log1p(-x) + a * std::log(x) - std::log(b) -
                              (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)));
  return 1.0 - front_sym * beta_cf(b, a, 1.0 - x);
}

double fisher_survival(double d1, double d2, double x) {
  if (!(d1 >= 1.0) || !(d2 >= 1.0)) {
    throw DomainError("fisher_survival: need d1, d2 >= 1");
  }
  if (!std::isfinite(x)) throw DomainError("fisher_survival: non-finite x");
  if (x <= 0.0) return 1.0;
  // P(F >= x) = I_t(d2/2, d1/2) with t = d2/(d2 + d1 x); this form keeps
  // full relative accuracy in the far tail.
  double t = d2 / (d2 + d1 * x);
  return regularized_incomplete_beta(0.5 * d2, 0.5 * d1, t);
}

double chi2_gap_mean(int du, int dv, double c) {
  if (du < 1 || dv < 1) throw DomainError("chi2_gap_mean: need du, dv >= 1");
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw DomainError("chi2_gap_mean: need finite c >= 0");
  }
  if (c == 0.0) return static_cast<double>(du);
  // E[(U - cV)+] = du P(F_{du+2,dv} >= c dv/(du+2))
  //               - c dv P(F_{du,dv+2} >= c (dv+2)/du)
  double a = static_cast<double>(du);
  double b = static_cast<double>(dv);
  double term1 = a * fisher_survival(a + 2.0, b, c * b / (a + 2.0));
  double term2 = c * b * fisher_survival(a, b + 2.0, c * (b + 2.0) / a);
  return term1 - term2;
}

}  // namespace pivotal
