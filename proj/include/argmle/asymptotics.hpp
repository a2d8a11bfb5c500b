#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>

#include "argmle/common.hpp"
#include "argmle/state_space.hpp"

namespace argmle {

/// Spectral radius of the companion matrix of theta. Closed-form roots for
/// p <= 2, a dense eigensolver above that.
inline double spectral_radius(const Eigen::VectorXd& theta) {
  const Eigen::Index p = theta.size();
  if (p == 1) return std::abs(theta(0));
  if (p == 2) {
    // lambda^2 - theta_1 lambda - theta_2 = 0
    const double t1 = theta(0), t2 = theta(1);
    const double disc = t1 * t1 + 4.0 * t2;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      return std::max(std::abs((t1 + s) / 2.0), std::abs((t1 - s) / 2.0));
    }
    return std::sqrt(-t2);  // complex pair, |lambda|^2 = -theta_2
  }
  const ArModel model(theta);
  Eigen::EigenSolver<Eigen::MatrixXd> es(model.companion(), false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Fisher information of the AR(p) model and derived quantities. The
/// information depends on theta only, never on the noise law.
struct FisherInfo {
  Eigen::MatrixXd info;      // unique solution of I = A0 I A0^T + b b^T
  Eigen::MatrixXd inverse;   // asymptotic covariance of sqrt(N)(theta_hat - theta)
  double spectral_radius = 0.0;
  bool stable = false;
  bool near_boundary = false;  // r > 1 - 1e-6: returned value is solve-only
  double residual = 0.0;       // max-norm defect of the fixed-point equation
};

namespace detail {

inline Eigen::MatrixXd lyapunov_solve_vectorized(const Eigen::MatrixXd& a,
                                                 const Eigen::MatrixXd& q) {
  const Eigen::Index p = a.rows();
  Eigen::MatrixXd kron = Eigen::MatrixXd::Zero(p * p, p * p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      kron.block(i * p, j * p, p, p) = a(i, j) * a;
  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(p * p, p * p) - kron;
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(q.data(), p * p);
  const Eigen::VectorXd sol = system.partialPivLu().solve(rhs);
  return Eigen::Map<const Eigen::MatrixXd>(sol.data(), p, p);
}

inline Eigen::MatrixXd lyapunov_solve_series(const Eigen::MatrixXd& a,
                                             const Eigen::MatrixXd& q,
                                             double radius) {
  // Truncation rule: stop once r^{2k} ||q|| / (1 - r^2) < 1e-14, with the
  // computed radius inflated by 1e-8 against round-off.
  const double r = std::min(radius * (1.0 + 1e-8), 1.0 - 1e-12);
  Eigen::MatrixXd sum = q;
  Eigen::MatrixXd term = q;
  Eigen::MatrixXd power = a;
  double bound = 1.0 / (1.0 - r * r);
  const double qnorm = q.norm();
  for (int k = 1; k < 100000; ++k) {
    term = power * q * power.transpose();
    sum += term;
    power = a * power;
    bound *= r * r;
    if (bound * qnorm < 1e-14 && term.norm() < 1e-15 * sum.norm()) break;
  }
  return sum;
}

}  // namespace detail

/// Solves the fixed-point equation I = A0 I A0^T + b b^T by two independent
/// routes (truncated series and vectorized linear solve) and requires them
/// to agree; near the stability boundary only the solve route is used.
inline FisherInfo fisher_info(const Eigen::VectorXd& theta) {
  FisherInfo out;
  out.spectral_radius = spectral_radius(theta);
  out.stable = out.spectral_radius < 1.0;
  out.near_boundary = out.spectral_radius > 1.0 - 1e-6;
  if (!out.stable)
    throw numerical_error("fisher_info: outside stability region (r = " +
                          std::to_string(out.spectral_radius) + ")");

  const ArModel model(theta);
  const Eigen::MatrixXd a = model.companion();
  const Eigen::VectorXd b = model.b();
  const Eigen::MatrixXd q = b * b.transpose();

  const Eigen::MatrixXd solved = detail::lyapunov_solve_vectorized(a, q);
  if (!out.near_boundary) {
    const Eigen::MatrixXd series =
        detail::lyapunov_solve_series(a, q, out.spectral_radius);
    const double diff = (series - solved).cwiseAbs().maxCoeff();
    if (diff > 1e-10)
      throw numerical_error("fisher_info: series and solve disagree by " +
                            std::to_string(diff));
  }
  out.info = 0.5 * (solved + solved.transpose());
  out.residual = (a * out.info * a.transpose() + q - out.info).cwiseAbs().maxCoeff();
  out.inverse = out.info.ldlt().solve(
      Eigen::MatrixXd::Identity(theta.size(), theta.size()));
  return out;
}

}  // namespace argmle
