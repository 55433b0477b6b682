#include "pivotal/scaled_lasso.hpp"

#include <cmath>
#include <limits>

#include "pivotal/kernels.hpp"

namespace pivotal {

FitResult sqrt_lasso_fit(const Dataset& data, double lambda,
                         const ScaledLassoOptions& opts) {
  if (!(lambda > 0.0)) throw DomainError("sqrt_lasso_fit: lambda must be positive");
  const int n = data.n();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double y_scale = data.y.norm() / sqrt_n;
  const double degenerate_floor = 1e-10 * y_scale;

  double sigma = y_scale;
  Vector beta = Vector::Zero(data.p());
  FitResult inner;
  bool degenerate = false;
  int alternations = 0;

  if (y_scale == 0.0) {
    degenerate = true;
  } else {
    for (; alternations < opts.max_alternations; ++alternations) {
      inner = lasso_fit(data, 2.0 * sigma * lambda, &beta, opts.lasso);
      double sigma_next = std::sqrt(inner.rss / n);
      double beta_move = (inner.beta - beta).lpNorm<Eigen::Infinity>();
      double sigma_move = std::fabs(sigma_next - sigma);
      beta = inner.beta;
      if (sigma_next < degenerate_floor) {
        sigma = sigma_next;
        degenerate = true;
        break;
      }
      sigma = sigma_next;
      if (beta_move < opts.tol && sigma_move < opts.tol) {
        // The fixed-point certificate is checked at the updated scale;
        // keep alternating until it holds there too.
        if (lasso_kkt_violation(data, 2.0 * sigma * lambda, beta) < opts.tol) break;
      }
    }
  }

  FitResult fit = make_fit(beta, {lambda}, data.X, data.y);
  fit.sigma_hat = sigma;
  fit.degenerate = degenerate;
  fit.sweeps = alternations;
  if (!degenerate) {
    fit.kkt_violation = lasso_kkt_violation(data, 2.0 * sigma * lambda, fit.beta);
  }
  return fit;
}

namespace {

// Scale step of the (phi, rho) criterion: the positive root of
// rho^2 ||Y||^2 - rho Y'X phi - n = 0.
double rho_step(double yy, double yxphi, int n) {
  return (yxphi + std::sqrt(yxphi * yxphi + 4.0 * n * yy)) / (2.0 * yy);
}

}  // namespace

FitResult penalized_loglik_fit(const Dataset& data, double lambda,
                               const ScaledLassoOptions& opts) {
  if (!(lambda > 0.0)) {
    throw DomainError("penalized_loglik_fit: lambda must be positive");
  }
  const int n = data.n();
  const double yy = data.y.squaredNorm();

  FitResult fit;
  if (yy == 0.0) {
    fit = make_fit(Vector::Zero(data.p()), {lambda}, data.X, data.y);
    fit.sigma_hat = 0.0;
    fit.degenerate = true;
    return fit;
  }

  double rho = std::sqrt(static_cast<double>(n) / yy);
  Vector phi = Vector::Zero(data.p());
  int alternations = 0;
  for (; alternations < opts.max_alternations; ++alternations) {
    Dataset scaled(data.X, rho * data.y);
    FitResult inner = lasso_fit(scaled, 2.0 * lambda, &phi, opts.lasso);
    double yxphi = data.y.dot(data.X * inner.beta);
    double rho_next = rho_step(yy, yxphi, n);
    double phi_move = (inner.beta - phi).lpNorm<Eigen::Infinity>();
    double rho_move = std::fabs(rho_next - rho);
    phi = inner.beta;
    rho = rho_next;
    // Exact minimization along the scaling ray t (phi, rho); the criterion
    // is nearly flat there, which stalls plain alternation.
    double rr = (rho * data.y - data.X * phi).squaredNorm();
    if (rr > 0.0) {
      double l1 = lambda * phi.lpNorm<1>();
      double t = (-l1 + std::sqrt(l1 * l1 + 4.0 * rr * n)) / (2.0 * rr);
      phi *= t;
      rho *= t;
    }
    if (phi_move < opts.tol && rho_move < opts.tol &&
        loglik_stationarity_violation(data, lambda, phi / rho, 1.0 / rho) < opts.tol) {
      break;
    }
  }

  double sigma = 1.0 / rho;
  fit = make_fit(phi * sigma, {lambda}, data.X, data.y);
  fit.sigma_hat = sigma;
  fit.sweeps = alternations;
  fit.degenerate = sigma < 1e-10 * std::sqrt(yy / n);
  fit.kkt_violation = loglik_stationarity_violation(data, lambda, fit.beta, sigma);
  return fit;
}

double sqrt_lasso_objective(const Dataset& data, double lambda,
                            const Vector& beta) {
  Vector r = data.y - data.X * beta;
  return r.norm() + lambda / std::sqrt(static_cast<double>(data.n())) * beta.lpNorm<1>();
}

double huber_form_objective(const Dataset& data, double lambda,
                            const Vector& beta, double scale) {
  Vector r = data.y - data.X * beta;
  return 0.5 * data.n() * scale + 0.5 * r.squaredNorm() / scale +
         lambda * beta.lpNorm<1>();
}

double loglik_objective(const Dataset& data, double lambda, const Vector& beta,
                        double scale) {
  Vector r = data.y - data.X * beta;
  return data.n() * std::log(scale) + 0.5 * r.squaredNorm() / (scale * scale) +
         lambda * beta.lpNorm<1>() / scale;
}

double loglik_stationarity_violation(const Dataset& data, double lambda,
                                     const Vector& beta, double scale) {
  if (!(scale > 0.0)) return std::numeric_limits<double>::infinity();
  const double rho = 1.0 / scale;
  Vector phi = beta * rho;
  Vector resid = rho * data.y - data.X * phi;
  double viol = 0.0;
  for (int j = 0; j < data.p(); ++j) {
    double corr = kernels::dot(data.X.col(j).data(), resid.data(),
                               static_cast<std::size_t>(data.n()));
    if (std::fabs(phi[j]) > 1e-12) {
      viol = std::max(viol, std::fabs(corr - lambda * (phi[j] > 0 ? 1.0 : -1.0)));
    } else {
      viol = std::max(viol, std::fabs(corr) - lambda);
    }
  }
  double rho_grad = rho * data.y.squaredNorm() - data.y.dot(data.X * phi) -
                    data.n() / rho;
  viol = std::max(viol, std::fabs(rho_grad) / std::max(1.0, data.y.squaredNorm()));
  return viol;
}

}  // namespace pivotal
