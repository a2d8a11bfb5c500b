#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "argmle/common.hpp"
#include "argmle/innovations.hpp"

namespace argmle {

/// AR(p) model: X_n = theta_1 X_{n-1} + ... + theta_p X_{n-p} + xi_n with
/// zero pre-sample values. Carries the companion form of the recursion,
///   Y_n = A0 Y_{n-1} + b xi_n,  Y_n = (X_n, ..., X_{n-p+1})^T,
/// where A0 has theta as first row and ones on the subdiagonal, b = e_1.
struct ArModel {
  Eigen::VectorXd theta;

  explicit ArModel(Eigen::VectorXd coeffs) : theta(std::move(coeffs)) {
    if (theta.size() < 1) throw validation_error("ArModel: order must be >= 1");
  }
  static ArModel scalar(double t) {
    return ArModel{Eigen::VectorXd::Constant(1, t)};
  }

  Eigen::Index order() const { return theta.size(); }

  Eigen::MatrixXd companion() const {
    const Eigen::Index p = order();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
    a.row(0) = theta.transpose();
    for (Eigen::Index i = 1; i < p; ++i) a(i, i - 1) = 1.0;
    return a;
  }

  Eigen::VectorXd b() const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(order());
    v(0) = 1.0;
    return v;
  }
};

/// Lag embedding: row n-1 of the result is Y_n = (x_n, ..., x_{n-p+1}) with
/// zeros for indices <= 0.
inline Eigen::MatrixXd embed(std::span<const double> x, Eigen::Index p) {
  if (p < 1) throw validation_error("embed: order must be >= 1");
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, p);
  for (Eigen::Index t = 0; t < n; ++t)
    for (Eigen::Index i = 0; i <= t && i < p; ++i) y(t, i) = x[static_cast<std::size_t>(t - i)];
  return y;
}

/// Z_n = sum_{m<=n} k(n,m) Y_m, coordinate-wise (one lattice per column).
inline Eigen::MatrixXd z_transform(const Eigen::MatrixXd& y,
                                   std::span<const double> beta) {
  const Eigen::Index n = y.rows();
  if (static_cast<Eigen::Index>(beta.size()) < n - 1)
    throw validation_error("z_transform: kernel horizon smaller than sequence");
  Eigen::MatrixXd z(n, y.cols());
  std::vector<double> col(static_cast<std::size_t>(n));
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index c = 0; c < y.cols(); ++c) {
    Eigen::Map<Eigen::VectorXd>(col.data(), n) = y.col(c);
    forward_kernel_apply(beta, col, out);
    z.col(c) = Eigen::Map<const Eigen::VectorXd>(out.data(), n);
  }
  return z;
}

inline Eigen::MatrixXd z_transform(const Eigen::MatrixXd& y,
                                   const InnovationSystem& sys) {
  return z_transform(y, sys.beta);
}

/// Y_n = sum_{m<=n} K(n,m) Z_m: inverse of z_transform.
inline Eigen::MatrixXd z_inverse_transform(const Eigen::MatrixXd& z,
                                           std::span<const double> beta) {
  const Eigen::Index n = z.rows();
  if (static_cast<Eigen::Index>(beta.size()) < n - 1)
    throw validation_error("z_inverse_transform: kernel horizon smaller than sequence");
  Eigen::MatrixXd y(n, z.cols());
  std::vector<double> col(static_cast<std::size_t>(n));
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    Eigen::Map<Eigen::VectorXd>(col.data(), n) = z.col(c);
    inverse_kernel_apply(beta, col, out);
    y.col(c) = Eigen::Map<const Eigen::VectorXd>(out.data(), n);
  }
  return y;
}

/// Time-varying transition of the doubled system,
///   A_n = [ A0       beta_n A0 ]
///         [ beta_n I    I      ].
inline Eigen::MatrixXd transition_matrix(const Eigen::MatrixXd& companion,
                                         double beta_n) {
  const Eigen::Index p = companion.rows();
  Eigen::MatrixXd a(2 * p, 2 * p);
  a.topLeftCorner(p, p) = companion;
  a.topRightCorner(p, p) = beta_n * companion;
  a.bottomLeftCorner(p, p) = beta_n * Eigen::MatrixXd::Identity(p, p);
  a.bottomRightCorner(p, p) = Eigen::MatrixXd::Identity(p, p);
  return a;
}

/// First basis vector of R^{2p}; picks the driven coordinate of zeta.
inline Eigen::VectorXd ell(Eigen::Index p) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * p);
  v(0) = 1.0;
  return v;
}

/// The 2p-dimensional Markov state built from its definition: row n-1 is
///   zeta_n = ( Z_n ; sum_{r<=n-1} beta_r Z_r ).
/// The recursion zeta_n = A_{n-1} zeta_{n-1} + ell sigma_n eps_n is a
/// consequence and is enforced as a test, not used as the constructor.
inline Eigen::MatrixXd zeta_process(const Eigen::MatrixXd& z,
                                    std::span<const double> beta) {
  const Eigen::Index n = z.rows();
  const Eigen::Index p = z.cols();
  if (static_cast<Eigen::Index>(beta.size()) < n - 1)
    throw validation_error("zeta_process: beta horizon smaller than sequence");
  Eigen::MatrixXd zeta(n, 2 * p);
  Eigen::RowVectorXd weighted_sum = Eigen::RowVectorXd::Zero(p);
  for (Eigen::Index t = 0; t < n; ++t) {
    zeta.row(t).head(p) = z.row(t);
    zeta.row(t).tail(p) = weighted_sum;
    if (t < n - 1) weighted_sum += beta[static_cast<std::size_t>(t)] * z.row(t);
  }
  return zeta;
}

}  // namespace argmle
