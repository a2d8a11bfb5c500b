#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "argmle/asymptotics.hpp"
#include "argmle/common.hpp"
#include "argmle/estimation.hpp"
#include "argmle/innovations.hpp"
#include "argmle/noise.hpp"
#include "argmle/rng.hpp"
#include "argmle/simulate.hpp"
#include "argmle/state_space.hpp"

namespace argmle {

/// One evaluation of L_N(mu) = E exp(-mu/2 * alpha^T <M>_N alpha), the
/// Laplace transform of the projected bracket process.
struct LaplaceEvaluation {
  enum class Method { explicit_product, eigen_approx, monte_carlo, p1_closed_form };

  double value = 1.0;
  double log_value = 0.0;  // exact even when value underflows
  Method method = Method::explicit_product;
  double mu = 0.0;
  Eigen::VectorXd alpha;
  std::int64_t n = 0;
  Eigen::VectorXcd eigenvalues;  // spectrum of the doubled matrix, when formed
  double std_error = 0.0;        // monte_carlo only
  double bounded_factor = 0.0;   // p1_closed_form only
};

/// 2x2 lattice factors of the scalar product representation.
inline Eigen::Matrix2d s_factor(double a, double beta) {
  Eigen::Matrix2d f;
  f << a, -beta, -a * beta, 1.0;
  return f;
}

namespace detail {

/// prod_{m=1}^{count} s_factor(a, beta_m), left to right.
inline Eigen::Matrix2d s_product_factors(double a, std::span<const double> beta,
                                         std::int64_t count) {
  if (count > static_cast<std::int64_t>(beta.size()))
    throw validation_error("s_product: not enough partial correlations");
  Eigen::Matrix2d p = Eigen::Matrix2d::Identity();
  for (std::int64_t m = 0; m < count; ++m) p = p * s_factor(a, beta[static_cast<std::size_t>(m)]);
  return p;
}

/// Same product with periodic rescaling; returns the unit-scale matrix and
/// the logarithm of the factored-out scale.
struct ScaledMatrix2 {
  Eigen::Matrix2d m;
  double log_scale = 0.0;
};

inline ScaledMatrix2 s_product_factors_scaled(double a, std::span<const double> beta,
                                              std::int64_t count) {
  if (count > static_cast<std::int64_t>(beta.size()))
    throw validation_error("s_product: not enough partial correlations");
  ScaledMatrix2 out{Eigen::Matrix2d::Identity(), 0.0};
  for (std::int64_t m = 0; m < count; ++m) {
    out.m = out.m * s_factor(a, beta[static_cast<std::size_t>(m)]);
    const double s = out.m.cwiseAbs().maxCoeff();
    if (s > 1e50) {
      out.m /= s;
      out.log_scale += std::log(s);
    }
  }
  return out;
}

/// (prod_{m=1}^{count} s_factor(a, beta_m))^{-1}, accumulated directly from
/// the factor inverses so it stays bounded when |a| > 1.
inline Eigen::Matrix2d s_inverse_product_factors(double a, std::span<const double> beta,
                                                 std::int64_t count) {
  if (count > static_cast<std::int64_t>(beta.size()))
    throw validation_error("s_product: not enough partial correlations");
  Eigen::Matrix2d p = Eigen::Matrix2d::Identity();
  for (std::int64_t m = count - 1; m >= 0; --m) {
    const double b = beta[static_cast<std::size_t>(m)];
    const double det = a * (1.0 - b * b);
    Eigen::Matrix2d inv;
    inv << 1.0, b, a * b, a;
    p = p * (inv / det);
  }
  return p;
}

struct SignedLogDet {
  double log_abs = 0.0;
  double sign = 1.0;
};

/// log |det prod_{m} s_factor(a, beta_m)| via a running QR factorization.
/// The naive determinant of the accumulated product cancels catastrophically
/// once |a|^count outgrows the working precision; keeping the product as
/// rotation * triangular holds the two scales in separate diagonal entries.
inline SignedLogDet s_product_log_det(double a, std::span<const double> beta,
                                      std::int64_t count) {
  if (count > static_cast<std::int64_t>(beta.size()))
    throw validation_error("s_product: not enough partial correlations");
  Eigen::Matrix2d r = Eigen::Matrix2d::Identity();
  SignedLogDet out;
  for (std::int64_t m = 0; m < count; ++m) {
    const Eigen::Matrix2d next = r * s_factor(a, beta[static_cast<std::size_t>(m)]);
    const double hyp = std::hypot(next(0, 0), next(1, 0));
    if (hyp == 0.0) throw numerical_error("s_product_log_det: singular product");
    const double c = next(0, 0) / hyp;
    const double s = next(1, 0) / hyp;
    r(0, 0) = hyp;
    r(0, 1) = c * next(0, 1) + s * next(1, 1);
    r(1, 0) = 0.0;
    r(1, 1) = -s * next(0, 1) + c * next(1, 1);
    const double scale = std::max(std::abs(r(0, 0)), std::abs(r(1, 1)));
    if (scale > 1e50 || (scale > 0.0 && scale < 1e-50)) {
      r /= scale;
      out.log_abs += 2.0 * std::log(scale);
    }
  }
  const double d = r(0, 0) * r(1, 1);
  if (d == 0.0) throw numerical_error("s_product_log_det: vanishing determinant");
  out.log_abs += std::log(std::abs(r(0, 0))) + std::log(std::abs(r(1, 1)));
  out.sign = d > 0.0 ? 1.0 : -1.0;
  return out;
}

/// Doubled-system matrix whose spectrum drives the Laplace asymptotics:
///   [ A0^{-1}                  A0^{-1} b b^T                  ]
///   [ mu alpha alpha^T A0^{-1} A0^T + mu alpha alpha^T A0^{-1} b b^T ].
/// For p = 1 this is [[1/t, 1/t], [mu/t, mu/t + t]] with eigenvalues
/// lambda_{+/-}/theta; see p1_lambdas.
inline Eigen::MatrixXd doubled_matrix(const ArModel& model,
                                      const Eigen::VectorXd& alpha, double mu) {
  const Eigen::Index p = model.order();
  const Eigen::MatrixXd a0 = model.companion();
  const Eigen::MatrixXd a0inv = a0.partialPivLu().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::VectorXd b = model.b();
  const Eigen::MatrixXd aa = alpha * alpha.transpose();
  Eigen::MatrixXd m(2 * p, 2 * p);
  m.topLeftCorner(p, p) = a0inv;
  m.topRightCorner(p, p) = a0inv * b * b.transpose();
  m.bottomLeftCorner(p, p) = mu * aa * a0inv;
  m.bottomRightCorner(p, p) = a0.transpose() + mu * aa * a0inv * b * b.transpose();
  return m;
}

/// Column permutation pairing each block coordinate with its mirror so the
/// 4p-dimensional recursion becomes the Kronecker product chain. perm[j] is
/// the row of the single 1 in column j.
inline std::vector<Eigen::Index> interleave_permutation(Eigen::Index p) {
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(4 * p));
  for (Eigen::Index j = 0; j < 4 * p; ++j) {
    const Eigen::Index i = j + 1;  // 1-based
    Eigen::Index target;
    if (i <= 2 * p) {
      if (i % 2 == 1)
        target = (i - 1) / 2;            // k+1 for i = 2k+1
      else
        target = p + i / 2 - 1;          // p+r for i = 2r
    } else {
      const Eigen::Index ii = i - 2 * p;
      if (ii % 2 == 1)
        target = 2 * p + (ii - 1) / 2;   // 2p+k+1 for i = 2p+2k+1
      else
        target = 3 * p + ii / 2 - 1;     // 3p+r for i = 2r+2p
    }
    perm[static_cast<std::size_t>(j)] = target;
  }
  return perm;
}

/// First 2p rows of the permutation matrix J (i.e. Psi_0 J).
inline Eigen::MatrixXd psi0_j(Eigen::Index p) {
  const auto perm = interleave_permutation(p);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(2 * p, 4 * p);
  for (Eigen::Index j = 0; j < 4 * p; ++j) {
    const Eigen::Index row = perm[static_cast<std::size_t>(j)];
    if (row < 2 * p) r(row, j) = 1.0;
  }
  return r;
}

inline void check_companion_assumptions(const ArModel& model) {
  const Eigen::Index p = model.order();
  if (model.theta(p - 1) == 0.0)
    throw numerical_error("assumption violated (theta_p = 0): use monte_carlo");
  Eigen::EigenSolver<Eigen::MatrixXd> es(model.companion(), false);
  const Eigen::VectorXcd ev = es.eigenvalues();
  const double scale = 1.0 + ev.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < p; ++i) {
    if (std::abs(ev(i)) < 1e-12 * scale)
      throw numerical_error("assumption violated (zero eigenvalue): use monte_carlo");
    for (Eigen::Index j = i + 1; j < p; ++j)
      if (std::abs(ev(i) - ev(j)) < 1e-9 * scale)
        throw numerical_error("assumption violated (repeated eigenvalue): use monte_carlo");
  }
}

}  // namespace detail

/// Spec'd scalar product S_N(a) = prod_{n=1}^{N-1} (a A_1^n + A_2^n); the
/// empty product (N = 1) is the identity.
inline Eigen::Matrix2d s_product(double a, std::span<const double> beta,
                                 std::int64_t n) {
  if (n < 1) throw validation_error("s_product: N must be >= 1");
  return detail::s_product_factors(a, beta, n - 1);
}

/// Exact evaluation of L_N(mu) through the determinant product formula:
///   L = ( prod_n det A_n * det Psi^1_N )^{-1/2},
///   sigma_N^2 Psi^1_N = Psi_0 J [ prod_n (Amu (x) A_1^n + I (x) A_2^n) ] J^T Psi_0^T,
/// where both products run over the N transitions the state recursion
/// actually applies, i.e. n = 0..N-1 with beta_0 = 0 (the bracket up to N
/// involves beta_1..beta_{N-1} and nothing beyond; the determinant oracle
/// in the test suite pins this alignment). All determinant products are
/// accumulated in log space with sign tracking.
///
/// Precision domain: the chain entries grow like the leading eigenvalue
/// power while the final determinant stays of order one, so for fixed
/// mu > 0 the evaluation is accurate up to roughly N log|lambda_max| < 30.
/// At p = 1 use p1_laplace for large N; it factors the determinant and
/// never cancels.
inline LaplaceEvaluation laplace_explicit(const ArModel& model,
                                          const InnovationSystem& sys,
                                          const Eigen::VectorXd& alpha, double mu,
                                          std::int64_t n) {
  const Eigen::Index p = model.order();
  if (alpha.size() != p) throw validation_error("laplace_explicit: alpha dimension mismatch");
  if (mu < 0.0) throw validation_error("laplace_explicit: mu must be >= 0");
  if (n < 1) throw validation_error("laplace_explicit: N must be >= 1");
  if (sys.horizon < n)
    throw validation_error("laplace_explicit: system horizon must be >= N");

  LaplaceEvaluation out;
  out.method = LaplaceEvaluation::Method::explicit_product;
  out.mu = mu;
  out.alpha = alpha;
  out.n = n;
  if (mu == 0.0 || alpha.isZero(0.0)) return out;

  detail::check_companion_assumptions(model);
  const Eigen::MatrixXd amu = detail::doubled_matrix(model, alpha, mu);
  out.eigenvalues = Eigen::EigenSolver<Eigen::MatrixXd>(amu, false).eigenvalues();

  const Eigen::MatrixXd r0 = detail::psi0_j(p);
  Eigen::MatrixXd running = r0;
  double log_scale = 0.0;
  Eigen::MatrixXd factor(4 * p, 4 * p);
  for (std::int64_t m = 1; m <= n; ++m) {
    const double beta_m = m == 1 ? 0.0 : sys.beta[static_cast<std::size_t>(m - 2)];
    const Eigen::Matrix2d a1 = (Eigen::Matrix2d() << 1.0, 0.0, -beta_m, 0.0).finished();
    const Eigen::Matrix2d a2 = (Eigen::Matrix2d() << 0.0, -beta_m, 0.0, 1.0).finished();
    for (Eigen::Index i = 0; i < 2 * p; ++i)
      for (Eigen::Index j = 0; j < 2 * p; ++j) {
        factor.block<2, 2>(2 * i, 2 * j) = amu(i, j) * a1;
        if (i == j) factor.block<2, 2>(2 * i, 2 * j) += a2;
      }
    running = running * factor;
    const double s = running.cwiseAbs().maxCoeff();
    if (s > 1e50 || (s > 0.0 && s < 1e-50)) {
      running /= s;
      log_scale += std::log(s);
    }
  }

  Eigen::MatrixXd final_block = running * r0.transpose();
  const double block_scale = final_block.cwiseAbs().maxCoeff();
  if (!(block_scale > 0.0))
    throw numerical_error("laplace_explicit: degenerate product chain");
  final_block /= block_scale;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(final_block);
  const double det_unit = lu.determinant();
  if (det_unit == 0.0) throw numerical_error("laplace_explicit: singular Psi block");
  const double sigma2_n = sys.sigma2[static_cast<std::size_t>(n - 1)];

  // log |det Psi^1_N| with Psi^1 = exp(log_scale) * final / sigma_N^2
  const double log_det_psi =
      std::log(std::abs(det_unit)) +
      2.0 * static_cast<double>(p) * (std::log(block_scale) + log_scale - std::log(sigma2_n));
  double sign = det_unit > 0.0 ? 1.0 : -1.0;

  // log prod det A_n = p * log sigma_N^2 + N log |det A0|
  double log_det_a = static_cast<double>(p) * std::log(sigma2_n);
  const double det_a0 = (p % 2 == 1 ? 1.0 : -1.0) * model.theta(p - 1);
  log_det_a += static_cast<double>(n) * std::log(std::abs(det_a0));
  if (det_a0 < 0.0 && n % 2 == 1) sign = -sign;

  if (sign <= 0.0)
    throw numerical_error("laplace_explicit: negative determinant product");

  out.log_value = -0.5 * (log_det_a + log_det_psi);
  if (out.log_value > 0.0 && out.log_value < 1e-9) out.log_value = 0.0;
  out.value = std::exp(out.log_value);
  return out;
}

struct MonteCarloLaplaceOptions {
  std::int64_t replications = 100000;
  std::uint64_t seed = 1;
};

/// Unbiased Monte Carlo estimate of L_N(mu): the sample mean of
/// exp(-mu/2 * alpha^T <M>_N alpha) over independent simulated paths.
inline LaplaceEvaluation laplace_monte_carlo(const ArModel& model,
                                             const NoiseModel& noise,
                                             const Eigen::VectorXd& alpha, double mu,
                                             std::int64_t n,
                                             const MonteCarloLaplaceOptions& options = {}) {
  const Eigen::Index p = model.order();
  if (alpha.size() != p) throw validation_error("laplace_monte_carlo: alpha dimension mismatch");
  if (mu < 0.0) throw validation_error("laplace_monte_carlo: mu must be >= 0");
  if (options.replications < 100)
    throw validation_error("laplace_monte_carlo: need at least 100 replications");

  LaplaceEvaluation out;
  out.method = LaplaceEvaluation::Method::monte_carlo;
  out.mu = mu;
  out.alpha = alpha;
  out.n = n;
  if (mu == 0.0 || alpha.isZero(0.0)) return out;

  const auto rho = covariance_sequence(noise, n - 1);
  LevinsonOptions lev;
  lev.dense_kernel_limit = 0;
  const InnovationSystem sys = levinson(rho, n, lev);

  std::vector<double> u(static_cast<std::size_t>(n));
  std::vector<double> zalpha(static_cast<std::size_t>(n));
  double mean = 0.0, m2 = 0.0;
  for (std::int64_t r = 0; r < options.replications; ++r) {
    Rng rng(child_seed(options.seed, static_cast<std::uint64_t>(r)));
    std::vector<double> eps = rng.normal_vector(static_cast<std::size_t>(n));
    std::vector<double> xi = simulate_noise_innovation(sys, eps);
    std::vector<double> x = simulate_ar_path(model, xi);

    // alpha-projected regressor: one lattice on u_m = alpha . Y_m.
    for (std::int64_t t = 0; t < n; ++t) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < p && i <= t; ++i)
        acc += alpha(i) * x[static_cast<std::size_t>(t - i)];
      u[static_cast<std::size_t>(t)] = acc;
    }
    forward_kernel_apply(sys.beta, u, zalpha);

    double quad = 0.0;
    double wsum = 0.0;
    for (std::int64_t t = 1; t < n; ++t) {
      const double bt = sys.beta[static_cast<std::size_t>(t - 1)];
      const double va = zalpha[static_cast<std::size_t>(t - 1)] + bt * wsum;
      quad += va * va / sys.sigma2[static_cast<std::size_t>(t)];
      wsum += bt * zalpha[static_cast<std::size_t>(t - 1)];
    }
    const double value = std::exp(-0.5 * mu * quad);
    const double delta = value - mean;
    mean += delta / static_cast<double>(r + 1);
    m2 += delta * (value - mean);
  }
  out.value = mean;
  out.log_value = std::log(mean);
  out.std_error = std::sqrt(m2 / static_cast<double>(options.replications - 1) /
                            static_cast<double>(options.replications));
  return out;
}

/// Eigenvalues lambda_{+/-} of the doubled matrix for p = 1, scaled by
/// theta:
///   lambda_{+/-}/theta = (theta^2 + mu + 1 +/- sqrt((mu + (1-theta)^2)(mu + (1+theta)^2))) / (2 theta).
/// lambda_+ lambda_- = theta^2 and lambda_+ > 1 for every mu > 0.
struct P1Lambdas {
  double plus;
  double minus;
};

inline P1Lambdas p1_lambdas(double theta, double mu) {
  if (theta == 0.0)
    throw validation_error("p1_lambdas: closed form undefined; perturb theta");
  if (!(mu > 0.0)) throw validation_error("p1_lambdas: mu must be > 0");
  const double d = std::sqrt((mu + (1.0 - theta) * (1.0 - theta)) *
                             (mu + (1.0 + theta) * (1.0 + theta)));
  return {0.5 * (theta * theta + mu + 1.0 + d), 0.5 * (theta * theta + mu + 1.0 - d)};
}

/// p = 1 closed form of the Laplace transform:
///   1/L^2 = c_+^2 lambda_+^N det(I + kappa S_+^{-1} S_-),
/// where S_{+/-} are the scalar products over the N applied transitions
/// (beta_0 = 0, beta_1..beta_{N-1}) at a = lambda_{+/-}/theta,
/// c_+ = (1 - lambda_-)/(lambda_+ - lambda_-) and kappa = (lambda_+ - 1)/(1 - lambda_-).
/// The determinant factor is bounded in N and returned for inspection.
inline LaplaceEvaluation p1_laplace(double theta, const InnovationSystem& sys,
                                    double mu, std::int64_t n) {
  if (n < 1) throw validation_error("p1_laplace: N must be >= 1");
  if (sys.horizon < n)
    throw validation_error("p1_laplace: system horizon must be >= N");
  const P1Lambdas lam = p1_lambdas(theta, mu);

  LaplaceEvaluation out;
  out.method = LaplaceEvaluation::Method::p1_closed_form;
  out.mu = mu;
  out.alpha = Eigen::VectorXd::Ones(1);
  out.n = n;

  const double a_plus = lam.plus / theta;
  const double a_minus = lam.minus / theta;
  const double c_plus = (1.0 - lam.minus) / (lam.plus - lam.minus);
  const double kappa = (lam.plus - 1.0) / (1.0 - lam.minus);

  const Eigen::Matrix2d s_minus =
      s_factor(a_minus, 0.0) * detail::s_product_factors(a_minus, sys.beta, n - 1);
  const Eigen::Matrix2d s_plus_inv =
      detail::s_inverse_product_factors(a_plus, sys.beta, n - 1) *
      s_factor(a_plus, 0.0).inverse();
  const double bounded = (Eigen::Matrix2d::Identity() + kappa * s_plus_inv * s_minus).determinant();
  if (!(bounded > 0.0) || !(c_plus > 0.0))
    throw numerical_error("p1_laplace: closed form lost positivity");

  out.bounded_factor = bounded;
  out.log_value = -0.5 * (2.0 * std::log(c_plus) +
                          static_cast<double>(n) * std::log(lam.plus) + std::log(bounded));
  out.value = std::exp(out.log_value);
  Eigen::VectorXcd ev(2);
  ev << std::complex<double>(lam.plus / theta, 0.0), std::complex<double>(lam.minus / theta, 0.0);
  out.eigenvalues = ev;
  return out;
}

/// Eigenvalue approximation of Lemma-of-large-N form:
///   Lbar_N(mu) = prod over the p eigenvalues of the doubled matrix outside
///   the unit circle of (lambda_i(mu)/lambda_i(0))^{-N/2}.
/// The product over the outside group at mu = 0 is 1/det(A0), so pairing of
/// individual eigenvalues never enters.
inline LaplaceEvaluation eigen_approx(const ArModel& model,
                                      const Eigen::VectorXd& alpha, double mu,
                                      std::int64_t n) {
  const Eigen::Index p = model.order();
  if (alpha.size() != p) throw validation_error("eigen_approx: alpha dimension mismatch");
  if (mu < 0.0) throw validation_error("eigen_approx: mu must be >= 0");
  const double radius = spectral_radius(model.theta);
  if (radius >= 1.0)
    throw numerical_error("eigen_approx: outside stability region");

  LaplaceEvaluation out;
  out.method = LaplaceEvaluation::Method::eigen_approx;
  out.mu = mu;
  out.alpha = alpha;
  out.n = n;
  if (mu == 0.0 || alpha.isZero(0.0)) return out;

  detail::check_companion_assumptions(model);
  const Eigen::MatrixXd amu = detail::doubled_matrix(model, alpha, mu);
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(amu, false).eigenvalues();
  out.eigenvalues = ev;

  std::complex<double> prod_outside(1.0, 0.0);
  Eigen::Index outside = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double mod = std::abs(ev(i));
    if (std::abs(mod - 1.0) < 1e-10)
      throw numerical_error("eigen_approx: eigenvalue classification ambiguous");
    if (mod > 1.0) {
      prod_outside *= ev(i);
      ++outside;
    }
  }
  if (outside != p)
    throw numerical_error("eigen_approx: eigenvalue split miscount (" +
                          std::to_string(outside) + " outside unit circle)");

  const double det_a0 = (p % 2 == 1 ? 1.0 : -1.0) * model.theta(p - 1);
  const std::complex<double> ratio = prod_outside * det_a0;
  if (std::abs(ratio.imag()) > 1e-8 * std::abs(ratio.real()) || ratio.real() <= 0.0)
    throw numerical_error("eigen_approx: eigenvalue ratio product not real positive");

  out.log_value = -0.5 * static_cast<double>(n) * std::log(ratio.real());
  out.value = std::exp(out.log_value);
  return out;
}

/// One row of the limit verification table for L_N(1/N).
struct LimitPoint {
  std::int64_t n = 0;
  double value = 0.0;
  double target = 0.0;
  LaplaceEvaluation::Method method = LaplaceEvaluation::Method::explicit_product;
};

struct LimitCheckOptions {
  std::int64_t mc_replications = 200000;
  std::uint64_t seed = 1;
};

/// Evaluates L_N(1/N) on a grid against the constant limit
/// exp(-alpha^T I(theta) alpha / 2).
///
/// For p = 1 the closed form is used: it is exact and keeps full precision
/// at any N, while the general product chain loses the determinant to
/// cancellation once the leading eigenvalue power outgrows the mantissa
/// (a scalar direction alpha folds into mu as alpha^2 mu). For p >= 2 the
/// chain is used where its assumptions hold and Monte Carlo otherwise.
inline std::vector<LimitPoint> limit_check(const ArModel& model,
                                           const NoiseModel& noise,
                                           const Eigen::VectorXd& alpha,
                                           std::span<const std::int64_t> n_grid,
                                           const LimitCheckOptions& options = {}) {
  if (n_grid.empty()) return {};
  const FisherInfo fi = fisher_info(model.theta);
  const double target = std::exp(-0.5 * alpha.dot(fi.info * alpha));

  std::int64_t max_n = 0;
  for (auto n : n_grid) max_n = std::max(max_n, n);
  const auto rho = covariance_sequence(noise, max_n - 1);
  LevinsonOptions lev;
  lev.dense_kernel_limit = 0;
  const InnovationSystem sys = levinson(rho, max_n, lev);

  std::vector<LimitPoint> table;
  for (auto n : n_grid) {
    LimitPoint pt;
    pt.n = n;
    pt.target = target;
    const double mu = 1.0 / static_cast<double>(n);
    if (model.order() == 1 && model.theta(0) != 0.0 && !alpha.isZero(0.0)) {
      const auto eval =
          p1_laplace(model.theta(0), sys, alpha(0) * alpha(0) * mu, n);
      pt.value = eval.value;
      pt.method = eval.method;
    } else {
      try {
        const auto eval = laplace_explicit(model, sys, alpha, mu, n);
        pt.value = eval.value;
        pt.method = eval.method;
      } catch (const numerical_error&) {
        MonteCarloLaplaceOptions mc;
        mc.replications = options.mc_replications;
        mc.seed = options.seed;
        const auto eval = laplace_monte_carlo(model, noise, alpha, mu, n, mc);
        pt.value = eval.value;
        pt.method = eval.method;
      }
    }
    table.push_back(pt);
  }
  return table;
}

}  // namespace argmle
