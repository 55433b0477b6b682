#pragma once

namespace pivotal {

/// log C(p, d) via log-gamma.
double log_binomial(long long p, long long d);

/// Regularized incomplete beta function I_x(a, b), a,b > 0, x in [0,1].
double regularized_incomplete_beta(double a, double b, double x);

/// P(F >= x) for a Fisher variable with (d1, d2) degrees of freedom.
double fisher_survival(double d1, double d2, double x);

/// E[(U - c V)_+] for independent chi-square U, V with (du, dv) degrees of
/// freedom, evaluated through the Fisher survival closed form.
double chi2_gap_mean(int du, int dv, double c);

}  // namespace pivotal
