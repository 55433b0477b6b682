#pragma once

#include <optional>
#include <string>

namespace pivotal {

/// Complexity weight of a coordinate-sparse space: log C(p, dim) + log(dim).
double delta_coordinate(int p, int dim);

/// Complexity weight of a group space with kcard active groups out of M:
/// log(kcard) + log C(M, kcard).
double delta_group(int M, int kcard);

struct PenaltySpec {
  int n = 0;
  int D = 0;
  double delta = 0.0;
  double pen_delta = 0.0;
  double pen = 0.0;  // 1.1 * pen_delta
};

/// Unique x with E[(U - x/(n-D) V)_+] = exp(-delta), U ~ chi2(D+1),
/// V ~ chi2(n-D-1). Requires 1 <= D <= n/2 - 1 and 0 <= delta <= 2n/3.
/// Results are memoized per (n, D, delta).
double pen_delta_solve(int n, int D, double delta);

PenaltySpec make_penalty_spec(int n, int D, double delta);

/// Segmentation penalty: root of E[(U - pen V)_+] = 1/((q+1) C(n-1, q)) with
/// U ~ chi2(q+2), V ~ chi2(n-q-2). Requires 0 <= q <= (n-1)/4.
double seg_pen_solve(int n, int q);

enum class PenaltyKind { aic, bic, birge_massart, lebarbier };

struct PenaltyArgs {
  int dim = 0;                   // model dimension (aic, bic, birge_massart)
  long long n = 0;               // sample size (bic, lebarbier)
  long long p = 0;               // ambient dimension (birge_massart)
  int q = 0;                     // breakpoint count (lebarbier)
  std::optional<double> sigma2;  // required by the known-variance kinds
};

double classical_penalty(PenaltyKind kind, const PenaltyArgs& args);

const char* penalty_kind_name(PenaltyKind kind);
PenaltyKind penalty_kind_from_name(const std::string& name);

}  // namespace pivotal
