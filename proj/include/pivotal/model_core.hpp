#pragma once

#include "pivotal/types.hpp"

namespace pivotal {

/// Orthonormal basis of range(X_J), rank decided at a relative singular-value
/// cutoff. An empty J gives the zero projector.
class Projector {
 public:
  Projector() = default;
  Projector(const Matrix& X, const Support& J, double rank_tol = 1e-10);
  explicit Projector(Matrix orthonormal_basis);

  Vector apply(const Vector& v) const;
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }

 private:
  Matrix basis_;
};

Vector project_onto(const Matrix& X, const Support& J, const Vector& v,
                    double rank_tol = 1e-10);

/// ||X (beta_hat - beta0)||^2.
double prediction_loss(const Matrix& X, const Vector& beta_hat,
                       const Vector& beta0);

struct SparseEigs {
  double minus = 0.0;
  double plus = 0.0;
};

/// Extremal Rayleigh quotients over supports of size <= k, by exhaustive
/// enumeration. k above the cap raises UnsupportedSizeError.
SparseEigs sparse_eigenvalues(const Matrix& X, int k, int cap = 3);

struct CompatibilityOptions {
  double xi = 4.0;
  int restarts = 24;
  int iterations = 600;
  std::uint64_t seed = 1;
};

struct CompatibilityResult {
  double value = 0.0;
  bool converged = false;
};

/// Heuristic upper bound on min over the cone {||u_Tc||_1 < xi ||u_T||_1} of
/// |T|^(1/2) ||X u|| / ||u_T||_1, by multi-restart projected gradient on the
/// slice ||u_T||_1 = 1.
CompatibilityResult compatibility_constant(const Matrix& X, const Support& T,
                                           const CompatibilityOptions& opts = {});

/// Group analogue with unit per-group weights: min over 1 <= |K| <= s and the
/// cone of ||X u|| / ||u_(K)||. Same heuristic caveats.
CompatibilityResult group_compatibility_constant(const Matrix& X,
                                                 const GroupStructure& groups,
                                                 double xi, int s,
                                                 const CompatibilityOptions& opts = {});

/// Largest k in [1, floor(p/e)] with 2 k log(p/k) <= n; 0 when none.
int compute_kstar(long long n, long long p);

/// 2 k log(p/k) >= n, where variance adaptation provably degrades.
bool ultra_high_dimensional(long long n, long long p, long long k);

/// Largest eigenvalue of X_J^T X_J.
double submatrix_largest_eigenvalue(const Matrix& X, const Support& J);

/// max over |J| <= k of the largest eigenvalue of X_J^T X_J (equals the
/// order-k largest sparse eigenvalue); same enumeration cap.
double restricted_largest_eigenvalue(const Matrix& X, int k, int cap = 3);

}  // namespace pivotal
