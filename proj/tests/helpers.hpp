#pragma once

// Shared test-only oracles. Everything here is deliberately brute force and
// independent of the library's computational paths.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "argmle/asymptotics.hpp"
#include "argmle/estimation.hpp"
#include "argmle/innovations.hpp"
#include "argmle/noise.hpp"
#include "argmle/rng.hpp"
#include "argmle/simulate.hpp"
#include "argmle/state_space.hpp"

namespace testutil {

/// Dense Cholesky of the Toeplitz covariance: Gamma = L L^T with L lower
/// triangular. Normalizing columns gives the inverse kernel and innovation
/// variances without any recursion.
struct CholeskyOracle {
  Eigen::MatrixXd inverse_kernel;  // unit lower triangular
  Eigen::MatrixXd forward_kernel;  // its inverse
  Eigen::VectorXd sigma2;
};

inline CholeskyOracle cholesky_oracle(const argmle::NoiseModel& model,
                                      Eigen::Index n) {
  const auto rho = argmle::covariance_sequence(model, n - 1);
  const Eigen::MatrixXd gamma = argmle::toeplitz_covariance(rho, n);
  Eigen::LLT<Eigen::MatrixXd> llt(gamma);
  Eigen::MatrixXd l = llt.matrixL();
  CholeskyOracle out;
  out.sigma2 = l.diagonal().array().square();
  out.inverse_kernel = l * l.diagonal().cwiseInverse().asDiagonal();
  out.forward_kernel = out.inverse_kernel.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXd::Identity(n, n));
  return out;
}

/// Row-by-row oracle for the forward kernel: row n of k solves the
/// projection of xi_n on (xi_1..xi_{n-1}) as a dense SPD system.
inline Eigen::MatrixXd forward_kernel_row_oracle(std::span<const double> rho,
                                                 Eigen::Index n) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  k(0, 0) = 1.0;
  for (Eigen::Index row = 1; row < n; ++row) {
    const Eigen::MatrixXd gamma = argmle::toeplitz_covariance(rho, row);
    Eigen::VectorXd rhs(row);
    for (Eigen::Index m = 0; m < row; ++m)
      rhs(m) = rho[static_cast<std::size_t>(row - m)];
    const Eigen::VectorXd coeff = gamma.ldlt().solve(rhs);
    for (Eigen::Index m = 0; m < row; ++m) k(row, m) = -coeff(m);
    k(row, row) = 1.0;
  }
  return k;
}

/// Exact Laplace transform by Gaussian integration: with T the linear map
/// from the driving normals to (alpha . v_{n-1} / sigma_n), one has
/// L_N(mu) = det(I + mu T T^T)^{-1/2}. Entirely independent of the product
/// formula under test.
inline double laplace_determinant_oracle(const argmle::ArModel& model,
                                         const argmle::InnovationSystem& sys,
                                         const Eigen::VectorXd& alpha, double mu,
                                         std::int64_t n) {
  const Eigen::Index p = model.order();
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> eps(static_cast<std::size_t>(n), 0.0);
  std::vector<double> u(static_cast<std::size_t>(n));
  std::vector<double> zalpha(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) {
    eps[static_cast<std::size_t>(j)] = 1.0;
    const auto xi = argmle::simulate_noise_innovation(sys, eps);
    const auto x = argmle::simulate_ar_path(model, xi);
    for (std::int64_t m = 0; m < n; ++m) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < p && i <= m; ++i)
        acc += alpha(i) * x[static_cast<std::size_t>(m - i)];
      u[static_cast<std::size_t>(m)] = acc;
    }
    argmle::forward_kernel_apply(sys.beta, u, zalpha);
    double wsum = 0.0;
    for (std::int64_t row = 1; row < n; ++row) {
      const double bt = sys.beta[static_cast<std::size_t>(row - 1)];
      const double va = zalpha[static_cast<std::size_t>(row - 1)] + bt * wsum;
      t(row, j) = va / sys.sigma[static_cast<std::size_t>(row)];
      wsum += bt * zalpha[static_cast<std::size_t>(row - 1)];
    }
    eps[static_cast<std::size_t>(j)] = 0.0;
  }
  const Eigen::MatrixXd m =
      Eigen::MatrixXd::Identity(n, n) + mu * t * t.transpose();
  return 1.0 / std::sqrt(m.determinant());
}

/// Uniform draw from the stable region by rejection on the spectral radius.
inline Eigen::VectorXd random_stable_theta(argmle::Rng& rng, Eigen::Index p,
                                           double max_radius = 0.98) {
  for (;;) {
    Eigen::VectorXd theta(p);
    for (Eigen::Index i = 0; i < p; ++i) theta(i) = 2.0 * rng.uniform01() - 1.0;
    if (argmle::spectral_radius(theta) < max_radius) return theta;
  }
}

}  // namespace testutil
