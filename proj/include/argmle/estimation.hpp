#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "argmle/common.hpp"
#include "argmle/innovations.hpp"
#include "argmle/state_space.hpp"

namespace argmle {

/// Output of the closed-form estimator.
///
/// `martingale` is M_N evaluated at the reference parameter passed to
/// mle() (the true value, when known): M_N(theta_ref) = score - bracket *
/// theta_ref. With theta_ref equal to the generating parameter and the true
/// noise system, theta_hat - theta_ref = bracket^{-1} * martingale holds
/// exactly, which is the identity the tests pin down.
struct EstimationResult {
  Eigen::VectorXd theta_hat;
  Eigen::VectorXd martingale;
  Eigen::MatrixXd bracket;
  double loglik = 0.0;
  double condition = 0.0;
  std::int64_t n = 0;
};

namespace detail {

/// Sufficient statistics of the transformed model. The observation equation
/// is ell^T zeta_n = v_{n-1}^T theta + sigma_n eps_n with the regressor
/// v_{n-1} = Z_{n-1} + beta_{n-1} W_{n-1} free of theta, so the whole
/// likelihood is the quadratic below.
struct TransformedQuadratic {
  Eigen::MatrixXd bracket;     // sum v v^T / sigma^2
  Eigen::VectorXd score;       // sum v * (ell^T zeta_n) / sigma^2
  double sum_zz = 0.0;         // sum (ell^T zeta_n)^2 / sigma^2
  double sum_log_sigma2 = 0.0;
  std::int64_t n = 0;

  double loglik_at(const Eigen::VectorXd& theta) const {
    const double quad =
        sum_zz - 2.0 * theta.dot(score) + theta.dot(bracket * theta);
    return -0.5 * quad - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi) -
           0.5 * sum_log_sigma2;
  }
};

inline TransformedQuadratic accumulate_transformed(std::span<const double> x,
                                                   Eigen::Index p,
                                                   const InnovationSystem& sys) {
  const std::int64_t n = static_cast<std::int64_t>(x.size());
  if (n > sys.horizon)
    throw validation_error("estimation: sample longer than system horizon");
  if (p < 1) throw validation_error("estimation: order must be >= 1");

  // Lag-embed, then one lattice pass per coordinate.
  Eigen::MatrixXd z = z_transform(embed(x, p), sys.beta);

  TransformedQuadratic q;
  q.bracket = Eigen::MatrixXd::Zero(p, p);
  q.score = Eigen::VectorXd::Zero(p);
  q.n = n;

  Eigen::VectorXd w_sum = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd v(p);
  for (std::int64_t t = 0; t < n; ++t) {
    const double inv_s2 = 1.0 / sys.sigma2[static_cast<std::size_t>(t)];
    const double z0 = z(t, 0);
    q.sum_zz += z0 * z0 * inv_s2;
    q.sum_log_sigma2 += std::log(sys.sigma2[static_cast<std::size_t>(t)]);
    if (t >= 1) {
      const double bt = sys.beta[static_cast<std::size_t>(t - 1)];
      v = z.row(t - 1).transpose() + bt * w_sum;
      q.bracket.noalias() += (inv_s2 * v) * v.transpose();
      q.score.noalias() += (inv_s2 * z0) * v;
      w_sum.noalias() += bt * z.row(t - 1).transpose();
    }
  }
  return q;
}

}  // namespace detail

struct MleOptions {
  /// Condition estimate above which the bracket is declared numerically
  /// singular ("insufficient excitation").
  double condition_limit = 1e12;
  /// Reference parameter at which the martingale is reported; defaults to
  /// zero (the raw score).
  std::optional<Eigen::VectorXd> theta_ref;
};

/// Closed-form maximum likelihood estimate of theta from the observations,
/// using the known noise law through its innovation system:
///   theta_hat = bracket^{-1} score.
inline EstimationResult mle(std::span<const double> x, Eigen::Index p,
                            const InnovationSystem& sys,
                            const MleOptions& options = {}) {
  const auto q = detail::accumulate_transformed(x, p, sys);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.bracket);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  const double condition = (lmin > 0.0) ? lmax / lmin
                                        : std::numeric_limits<double>::infinity();
  if (!(lmin > 0.0) || condition > options.condition_limit)
    throw numerical_error("insufficient excitation: bracket condition estimate " +
                          std::to_string(condition));

  EstimationResult result;
  result.bracket = q.bracket;
  result.theta_hat = q.bracket.ldlt().solve(q.score);
  result.condition = condition;
  result.n = q.n;
  result.loglik = q.loglik_at(result.theta_hat);
  if (options.theta_ref) {
    if (options.theta_ref->size() != p)
      throw validation_error("mle: theta_ref has wrong dimension");
    result.martingale = q.score - q.bracket * (*options.theta_ref);
  } else {
    result.martingale = q.score;
  }
  return result;
}

/// Gaussian log-likelihood of the sample at a candidate theta, through the
/// transformed model. Exactly quadratic in theta for fixed data.
inline double log_likelihood(const Eigen::VectorXd& theta,
                             std::span<const double> x,
                             const InnovationSystem& sys) {
  const auto q = detail::accumulate_transformed(x, theta.size(), sys);
  return q.loglik_at(theta);
}

/// Lagged design matrix with zero pre-sample values: Phi(n, i) = x_{n-i}.
inline Eigen::MatrixXd lagged_design(std::span<const double> x, Eigen::Index p) {
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n, p);
  for (Eigen::Index t = 0; t < n; ++t)
    for (Eigen::Index i = 1; i <= p && i <= t; ++i)
      phi(t, i - 1) = x[static_cast<std::size_t>(t - i)];
  return phi;
}

struct GlsOptions {
  Eigen::Index dense_limit = 2000;
};

/// Independent reference estimator: dense generalized least squares of the
/// observation on its lagged design with the full noise covariance,
///   theta = (Phi^T Gamma^{-1} Phi)^{-1} Phi^T Gamma^{-1} x.
/// Maximizes the same quadratic likelihood as mle(), by a completely
/// different computational route.
inline Eigen::VectorXd gls_oracle(std::span<const double> x, Eigen::Index p,
                                  const Eigen::MatrixXd& gamma,
                                  const GlsOptions& options = {}) {
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  if (n > options.dense_limit)
    throw validation_error("gls_oracle: sample exceeds dense limit");
  if (gamma.rows() != n || gamma.cols() != n)
    throw validation_error("gls_oracle: covariance dimension mismatch");

  Eigen::LDLT<Eigen::MatrixXd> ldlt(gamma);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw numerical_error("gls_oracle: covariance not positive definite");

  const Eigen::MatrixXd phi = lagged_design(x, p);
  const Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  const Eigen::MatrixXd gphi = ldlt.solve(phi);
  const Eigen::MatrixXd normal = phi.transpose() * gphi;
  const Eigen::VectorXd rhs = gphi.transpose() * xv;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
  if (!lu.isInvertible())
    throw numerical_error("gls_oracle: singular normal equations");
  return lu.solve(rhs);
}

/// Ordinary least squares on the lagged design (identity covariance).
/// Not consistent under dependent noise; kept as the comparison estimator.
inline Eigen::VectorXd lse(std::span<const double> x, Eigen::Index p) {
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  if (n <= p) throw validation_error("lse: need more observations than order");
  const Eigen::MatrixXd phi = lagged_design(x, p);
  const Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  const Eigen::MatrixXd normal = phi.transpose() * phi;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
  if (!lu.isInvertible()) throw numerical_error("lse: singular design");
  return lu.solve(phi.transpose() * xv);
}

/// Toeplitz covariance matrix ((rho(|i-j|))) of a stationary sequence.
inline Eigen::MatrixXd toeplitz_covariance(std::span<const double> rho,
                                           Eigen::Index n) {
  if (static_cast<Eigen::Index>(rho.size()) < n)
    throw validation_error("toeplitz_covariance: rho must cover lags 0..N-1");
  Eigen::MatrixXd gamma(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      gamma(i, j) = rho[static_cast<std::size_t>(i > j ? i - j : j - i)];
  return gamma;
}

}  // namespace argmle
