#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "argmle/common.hpp"

namespace argmle {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// One-sample Kolmogorov-Smirnov distance of the samples against the
/// zero-mean normal law with the given variance (exact sort form, no
/// asymptotic shortcut).
inline double ks_distance_normal(std::vector<double> samples, double variance) {
  if (samples.empty()) throw validation_error("ks_distance_normal: no samples");
  if (!(variance > 0.0)) throw validation_error("ks_distance_normal: variance must be > 0");
  std::sort(samples.begin(), samples.end());
  const double sd = std::sqrt(variance);
  const double m = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = normal_cdf(samples[i] / sd);
    const double hi = (static_cast<double>(i) + 1.0) / m - cdf;
    const double lo = cdf - static_cast<double>(i) / m;
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

inline Eigen::VectorXd sample_mean(const Eigen::MatrixXd& samples) {
  return samples.colwise().mean();
}

/// Unbiased sample covariance (divisor M-1).
inline Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& samples) {
  const Eigen::Index m = samples.rows();
  if (m < 2) throw validation_error("sample_covariance: need at least 2 samples");
  const Eigen::MatrixXd centered = samples.rowwise() - samples.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(m - 1);
}

struct Histogram {
  std::vector<double> edges;        // bins + 1 ascending edges
  std::vector<std::int64_t> counts; // counts per bin, summing to the input size
};

/// Equal-width histogram over [min, max]. A degenerate range (all samples
/// equal) occupies the single first bin.
inline Histogram histogram(const std::vector<double>& samples, std::int64_t bins) {
  if (bins < 1) throw validation_error("histogram: bins must be >= 1");
  if (samples.empty()) throw validation_error("histogram: no samples");
  const auto [mn_it, mx_it] = std::minmax_element(samples.begin(), samples.end());
  const double mn = *mn_it, mx = *mx_it;
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  const double span = (mx > mn) ? (mx - mn) : 1.0;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (std::int64_t i = 0; i <= bins; ++i)
    h.edges[static_cast<std::size_t>(i)] =
        mn + span * static_cast<double>(i) / static_cast<double>(bins);
  for (double x : samples) {
    std::int64_t idx = (mx > mn)
        ? static_cast<std::int64_t>((x - mn) / span * static_cast<double>(bins))
        : 0;
    idx = std::min<std::int64_t>(idx, bins - 1);
    ++h.counts[static_cast<std::size_t>(idx)];
  }
  return h;
}

}  // namespace argmle
