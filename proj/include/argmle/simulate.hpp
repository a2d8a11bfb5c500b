#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "argmle/common.hpp"
#include "argmle/innovations.hpp"
#include "argmle/noise.hpp"
#include "argmle/rng.hpp"
#include "argmle/state_space.hpp"

namespace argmle {

/// One simulated path with everything needed to replay it: the standard
/// normal draws eps, the correlated noise xi and the observations x.
struct TrajectoryBundle {
  ArModel model;
  std::uint64_t seed = 0;
  std::vector<double> eps;
  std::vector<double> xi;
  std::vector<double> x;
};

/// Exact-in-distribution noise sample from its innovation representation:
/// xi_n = sum_{m<=n} K(n,m) sigma_m eps_m. This is the reference generator
/// for every noise law; it is O(N^2) through the synthesis lattice.
inline std::vector<double> simulate_noise_innovation(const InnovationSystem& sys,
                                                     std::span<const double> eps) {
  const std::int64_t n = static_cast<std::int64_t>(eps.size());
  if (n > sys.horizon)
    throw validation_error("simulate_noise_innovation: eps longer than system horizon");
  std::vector<double> w(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i)
    w[static_cast<std::size_t>(i)] = sys.sigma[static_cast<std::size_t>(i)] * eps[static_cast<std::size_t>(i)];
  return inverse_kernel_apply(sys.beta, w);
}

/// Exact fractional Gaussian noise by circulant embedding (Wood-Chan).
///
/// The autocorrelation is extended to lag M/2 (the fGn formula is global)
/// and mirrored into a circulant of power-of-two size M >= 2(N-1), whose
/// eigenvalues come from one discrete Fourier transform. The first N real
/// coordinates of the synthesized vector are returned. O(N log N).
///
/// Draw order is fixed: V_0, V_{M/2}, then (a_k, b_k) pairs for
/// k = 1..M/2-1, so a given generator state always yields the same path.
inline std::vector<double> simulate_fgn_circulant(double hurst, std::int64_t n,
                                                  Rng& rng) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw validation_error("simulate_fgn_circulant: H out of (0,1)");
  if (n < 2) throw validation_error("simulate_fgn_circulant: N must be >= 2");

  std::int64_t m = 2;
  while (m < 2 * (n - 1)) m *= 2;
  const std::int64_t half = m / 2;

  std::vector<std::complex<double>> first_row(static_cast<std::size_t>(m));
  for (std::int64_t j = 0; j <= half; ++j)
    first_row[static_cast<std::size_t>(j)] = fgn_autocorrelation(hurst, j);
  for (std::int64_t j = half + 1; j < m; ++j)
    first_row[static_cast<std::size_t>(j)] = fgn_autocorrelation(hurst, m - j);

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> lambda(static_cast<std::size_t>(m));
  fft.fwd(lambda, first_row);

  std::vector<double> eig(static_cast<std::size_t>(m));
  for (std::int64_t j = 0; j < m; ++j) {
    double v = lambda[static_cast<std::size_t>(j)].real();
    if (v < -1e-10)
      throw numerical_error("circulant embedding not nonnegative (min eigenvalue " +
                            std::to_string(v) + ")");
    eig[static_cast<std::size_t>(j)] = v < 0.0 ? 0.0 : v;
  }

  std::vector<std::complex<double>> weights(static_cast<std::size_t>(m));
  weights[0] = rng.normal();
  weights[static_cast<std::size_t>(half)] = rng.normal();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::int64_t k = 1; k < half; ++k) {
    const double a = rng.normal();
    const double b = rng.normal();
    weights[static_cast<std::size_t>(k)] = std::complex<double>(a * inv_sqrt2, b * inv_sqrt2);
    weights[static_cast<std::size_t>(m - k)] = std::conj(weights[static_cast<std::size_t>(k)]);
  }
  for (std::int64_t k = 0; k < m; ++k)
    weights[static_cast<std::size_t>(k)] *= std::sqrt(eig[static_cast<std::size_t>(k)]);

  std::vector<std::complex<double>> synth(static_cast<std::size_t>(m));
  fft.inv(synth, weights);
  // fft.inv carries 1/M; the synthesis wants 1/sqrt(M).
  const double scale = std::sqrt(static_cast<double>(m));
  std::vector<double> out(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j)
    out[static_cast<std::size_t>(j)] = synth[static_cast<std::size_t>(j)].real() * scale;
  return out;
}

/// X_n = theta_1 X_{n-1} + ... + theta_p X_{n-p} + xi_n with zero
/// pre-sample values. The sum is accumulated in fixed order (xi first, then
/// lags ascending) so replays are bit-identical.
inline std::vector<double> simulate_ar_path(const ArModel& model,
                                            std::span<const double> xi) {
  const std::int64_t n = static_cast<std::int64_t>(xi.size());
  const Eigen::Index p = model.order();
  std::vector<double> x(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < n; ++t) {
    double acc = xi[static_cast<std::size_t>(t)];
    for (Eigen::Index i = 1; i <= p && i <= t; ++i)
      acc += model.theta(i - 1) * x[static_cast<std::size_t>(t - i)];
    x[static_cast<std::size_t>(t)] = acc;
  }
  return x;
}

/// Draws eps from the seed, synthesizes xi through the innovation
/// representation and runs the observation recursion.
inline TrajectoryBundle simulate_bundle(const ArModel& model,
                                        const InnovationSystem& sys,
                                        std::int64_t n, std::uint64_t seed) {
  if (n > sys.horizon)
    throw validation_error("simulate_bundle: N exceeds system horizon");
  TrajectoryBundle bundle{model, seed, {}, {}, {}};
  Rng rng(seed);
  bundle.eps = rng.normal_vector(static_cast<std::size_t>(n));
  bundle.xi = simulate_noise_innovation(sys, bundle.eps);
  bundle.x = simulate_ar_path(model, bundle.xi);
  return bundle;
}

}  // namespace argmle
