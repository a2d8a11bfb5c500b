#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "argmle/common.hpp"

namespace argmle {

/// Innovation machinery of a stationary Gaussian sequence with
/// autocorrelation rho: partial correlations beta_n, innovation variances
/// sigma_n^2 and the pair of unit lower-triangular kernels
///
///   forward:   sigma_n eps_n = sum_{m<=n} k(n,m) xi_m
///   inverse:   xi_n          = sum_{m<=n} K(n,m) sigma_m eps_m
///
/// In matrix form (rows of k and K holding the kernels), the covariance
/// matrix Gamma of (xi_1..xi_N) factors as Gamma = K D K^T and
/// Gamma^{-1} = k^T D^{-1} k with D = diag(sigma_n^2). Note the transpose
/// placement: it is pinned down by the brute-force Cholesky oracle in the
/// test suite, not taken from typography.
///
/// beta_0 is a degenerate index (it would be -k(1,1) = -1); everything
/// downstream multiplies it against a zero state, so it is defined as 0 and
/// never stored.
class InnovationSystem {
 public:
  std::int64_t horizon = 0;       // N
  std::vector<double> beta;       // beta[i] = beta_{i+1}, i = 0..N-2
  std::vector<double> sigma2;     // sigma2[i] = sigma_{i+1}^2, i = 0..N-1
  std::vector<double> sigma;      // elementwise sqrt of sigma2

  bool has_dense_kernels() const { return k_.rows() == horizon; }

  /// Forward kernel as a dense unit lower-triangular matrix (row n holds
  /// k(n, 1..n)). Only materialized up to the dense limit.
  const Eigen::MatrixXd& k() const {
    if (!has_dense_kernels())
      throw validation_error("dense kernels were not materialized for this horizon");
    return k_;
  }

  /// Inverse kernel, k^{-1}, same layout.
  const Eigen::MatrixXd& K() const {
    if (!has_dense_kernels())
      throw validation_error("dense kernels were not materialized for this horizon");
    return K_;
  }

  void set_dense_kernels(Eigen::MatrixXd k, Eigen::MatrixXd K) {
    k_ = std::move(k);
    K_ = std::move(K);
  }

 private:
  Eigen::MatrixXd k_, K_;
};

struct LevinsonOptions {
  /// Horizons up to this size get dense k and K matrices; beyond it only
  /// (beta, sigma2) are kept and kernel actions run through the streamed
  /// lattice recursions below. The O(N^2) memory of the dense form is the
  /// only cost driver at experiment scale.
  std::int64_t dense_kernel_limit = 1024;
  /// Positive definiteness failure threshold: fail when 1 - beta_n^2 drops
  /// to this level, distinguishing genuine degeneracy from round-off.
  double degeneracy_tol = 1e-13;
};

/// Levinson-Durbin recursion on the autocorrelation sequence rho(0..N-1).
///
/// Produces the order-n partial correlation beta_n = -k(n+1, 1) and the
/// innovation variances sigma_n^2 = prod_{m<n} (1 - beta_m^2), together with
/// the dense kernels when the horizon is small enough.
inline InnovationSystem levinson(std::span<const double> rho, std::int64_t n,
                                 const LevinsonOptions& options = {}) {
  if (n < 1) throw validation_error("levinson: horizon must be >= 1");
  if (static_cast<std::int64_t>(rho.size()) < n)
    throw validation_error("levinson: rho must cover lags 0..N-1");
  if (rho[0] != 1.0) throw validation_error("levinson: rho(0) must equal 1");

  InnovationSystem sys;
  sys.horizon = n;
  sys.beta.resize(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
  sys.sigma2.resize(static_cast<std::size_t>(n));
  sys.sigma.resize(static_cast<std::size_t>(n));
  sys.sigma2[0] = 1.0;

  const bool dense = n <= options.dense_kernel_limit;
  Eigen::MatrixXd kmat;
  if (dense) {
    kmat = Eigen::MatrixXd::Zero(n, n);
    kmat(0, 0) = 1.0;
  }

  // phi[j] = coefficient of xi_{m-j} in E(xi_{m+1} | xi_1..xi_m), 0-based.
  std::vector<double> phi(static_cast<std::size_t>(n > 1 ? n - 1 : 0), 0.0);
  double prediction_var = 1.0;

  for (std::int64_t m = 1; m < n; ++m) {
    double num = rho[static_cast<std::size_t>(m)];
    for (std::int64_t j = 0; j < m - 1; ++j)
      num -= phi[static_cast<std::size_t>(j)] * rho[static_cast<std::size_t>(m - 1 - j)];
    const double kappa = num / prediction_var;
    const double one_minus = 1.0 - kappa * kappa;
    if (one_minus <= options.degeneracy_tol)
      throw numerical_error("covariance not positive definite at order " + std::to_string(m));

    // phi_new[j] = phi[j] - kappa * phi[m-2-j], updated pairwise in place.
    for (std::int64_t j = 0, jr = m - 2; j < jr; ++j, --jr) {
      const double a = phi[static_cast<std::size_t>(j)];
      const double b = phi[static_cast<std::size_t>(jr)];
      phi[static_cast<std::size_t>(j)] = a - kappa * b;
      phi[static_cast<std::size_t>(jr)] = b - kappa * a;
    }
    if (m >= 2 && (m - 2) % 2 == 0) {
      const std::int64_t mid = (m - 2) / 2;
      phi[static_cast<std::size_t>(mid)] *= (1.0 - kappa);
    }
    phi[static_cast<std::size_t>(m - 1)] = kappa;

    sys.beta[static_cast<std::size_t>(m - 1)] = kappa;
    prediction_var *= one_minus;
    sys.sigma2[static_cast<std::size_t>(m)] = prediction_var;

    if (dense) {
      // Row m+1 of the forward kernel: k(m+1, c) = -phi[m - c], c = 1..m.
      kmat(m, m) = 1.0;
      for (std::int64_t c = 0; c < m; ++c)
        kmat(m, c) = -phi[static_cast<std::size_t>(m - 1 - c)];
    }
  }

  for (std::int64_t i = 0; i < n; ++i)
    sys.sigma[static_cast<std::size_t>(i)] = std::sqrt(sys.sigma2[static_cast<std::size_t>(i)]);

  if (dense) {
    Eigen::MatrixXd inv = kmat.triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXd::Identity(n, n));
    sys.set_dense_kernels(std::move(kmat), std::move(inv));
  }
  return sys;
}

/// Applies the forward kernel to a sequence: out_n = sum_{m<=n} k(n,m) y_m.
///
/// Runs the growing-order lattice recursion stage by stage,
///   f_j(t) = f_{j-1}(t) - beta_j b_{j-1}(t-1)
///   b_j(t) = b_{j-1}(t-1) - beta_j f_{j-1}(t)
/// with the stage loop outermost so the inner sweep over t has no
/// loop-carried dependency and vectorizes. O(N^2) time, O(N) memory.
namespace detail {

/// Stages past the last nonzero reflection coefficient neither change the
/// forward errors nor feed anything back below, so a zero suffix of beta can
/// be skipped outright. Makes white noise O(N) and AR(1) noise O(N) here.
inline std::int64_t active_stages(std::span<const double> beta, std::int64_t n) {
  std::int64_t last = std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(beta.size()));
  while (last > 0 && beta[static_cast<std::size_t>(last - 1)] == 0.0) --last;
  return last;
}

}  // namespace detail

inline void forward_kernel_apply(std::span<const double> beta,
                                 std::span<const double> y,
                                 std::span<double> out) {
  const std::int64_t n = static_cast<std::int64_t>(y.size());
  if (static_cast<std::int64_t>(beta.size()) < n - 1)
    throw validation_error("forward_kernel_apply: kernel horizon too small");
  if (static_cast<std::int64_t>(out.size()) != n)
    throw validation_error("forward_kernel_apply: output length mismatch");
  if (n == 0) return;

  const std::int64_t stages = detail::active_stages(beta, n);
  std::vector<double> f(y.begin(), y.end());
  std::vector<double> b(y.begin(), y.end());
  out[0] = y[0];
  for (std::int64_t j = 1; j <= stages; ++j) {
    const double bj = beta[static_cast<std::size_t>(j - 1)];
    double* fp = f.data();
    double* bp = b.data();
    for (std::int64_t t = n - 1; t >= j; --t) {
      const double fv = fp[t] - bj * bp[t - 1];
      const double bv = bp[t - 1] - bj * fp[t];
      fp[t] = fv;
      bp[t] = bv;
    }
    if (j < n) out[static_cast<std::size_t>(j)] = f[static_cast<std::size_t>(j)];
  }
  for (std::int64_t t = stages + 1; t < n; ++t)
    out[static_cast<std::size_t>(t)] = f[static_cast<std::size_t>(t)];
}

inline std::vector<double> forward_kernel_apply(std::span<const double> beta,
                                                std::span<const double> y) {
  std::vector<double> out(y.size());
  forward_kernel_apply(beta, y, out);
  return out;
}

/// Applies the inverse kernel to a sequence: out_n = sum_{m<=n} K(n,m) w_m.
/// This is the synthesis form of the lattice above (time-major; the
/// recursion feeds back on its own output, so it cannot be stage-major).
inline void inverse_kernel_apply(std::span<const double> beta,
                                 std::span<const double> w,
                                 std::span<double> out) {
  const std::int64_t n = static_cast<std::int64_t>(w.size());
  if (static_cast<std::int64_t>(beta.size()) < n - 1)
    throw validation_error("inverse_kernel_apply: kernel horizon too small");
  if (static_cast<std::int64_t>(out.size()) != n)
    throw validation_error("inverse_kernel_apply: output length mismatch");
  if (n == 0) return;

  const std::int64_t stages = detail::active_stages(beta, n);
  std::vector<double> b(static_cast<std::size_t>(stages) + 1, 0.0);
  out[0] = w[0];
  b[0] = w[0];
  for (std::int64_t t = 1; t < n; ++t) {
    double fv = w[static_cast<std::size_t>(t)];
    for (std::int64_t j = std::min(t, stages); j >= 1; --j) {
      const double bj = beta[static_cast<std::size_t>(j - 1)];
      const double bprev = b[static_cast<std::size_t>(j - 1)];
      fv += bj * bprev;
      b[static_cast<std::size_t>(j)] = bprev - bj * fv;
    }
    out[static_cast<std::size_t>(t)] = fv;
    b[0] = fv;
  }
}

inline std::vector<double> inverse_kernel_apply(std::span<const double> beta,
                                                std::span<const double> w) {
  std::vector<double> out(w.size());
  inverse_kernel_apply(beta, w, out);
  return out;
}

/// Rebuilds the covariance matrix from the factorization, Gamma = K D K^T.
/// Exercises the Cholesky identity; the result should match the Toeplitz
/// matrix of the input autocorrelation.
inline Eigen::MatrixXd reconstruct_covariance(const InnovationSystem& sys) {
  const Eigen::MatrixXd& inv_kernel = sys.K();
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(
      sys.sigma2.data(), static_cast<Eigen::Index>(sys.sigma2.size()));
  return inv_kernel * d.asDiagonal() * inv_kernel.transpose();
}

/// Partial sums S_n = sum_{m<=n} beta_m^2 at dyadic checkpoints, plus the
/// plateau ratio S_{last} / S_{last/2}. Finite total sum is the regularity
/// diagnostic; the ratio drifting to 1 signals the tail has converged.
struct BetaSummability {
  std::vector<std::pair<std::int64_t, double>> partial_sums;
  double plateau_ratio = 1.0;
};

inline BetaSummability beta_summability_diagnostic(const InnovationSystem& sys) {
  if (sys.horizon < 4)
    throw validation_error("beta_summability_diagnostic: horizon must be >= 4");
  BetaSummability diag;
  const std::int64_t count = static_cast<std::int64_t>(sys.beta.size());
  std::vector<double> cumulative(static_cast<std::size_t>(count) + 1, 0.0);
  for (std::int64_t i = 0; i < count; ++i) {
    const double b = sys.beta[static_cast<std::size_t>(i)];
    cumulative[static_cast<std::size_t>(i) + 1] = cumulative[static_cast<std::size_t>(i)] + b * b;
  }
  for (std::int64_t n = 1; n <= count; n *= 2)
    diag.partial_sums.emplace_back(n, cumulative[static_cast<std::size_t>(n)]);
  if (diag.partial_sums.empty() || diag.partial_sums.back().first != count)
    diag.partial_sums.emplace_back(count, cumulative[static_cast<std::size_t>(count)]);
  const double s_full = cumulative[static_cast<std::size_t>(count)];
  const double s_half = cumulative[static_cast<std::size_t>(count / 2)];
  diag.plateau_ratio = (s_half == 0.0) ? 1.0 : s_full / s_half;
  return diag;
}

}  // namespace argmle
