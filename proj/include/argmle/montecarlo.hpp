#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "argmle/asymptotics.hpp"
#include "argmle/common.hpp"
#include "argmle/estimation.hpp"
#include "argmle/innovations.hpp"
#include "argmle/io.hpp"
#include "argmle/noise.hpp"
#include "argmle/rng.hpp"
#include "argmle/simulate.hpp"
#include "argmle/stats.hpp"

namespace argmle {

enum class Estimator { mle, lse };

inline std::string estimator_name(Estimator e) {
  return e == Estimator::mle ? "mle" : "lse";
}

enum class PathGenerator { innovation, circulant };

struct ExperimentConfig {
  ArModel model;
  NoiseModel noise;
  std::int64_t n = 2000;          // path length
  std::int64_t m = 2000;          // replications
  std::uint64_t seed = 1;
  std::vector<Estimator> estimators = {Estimator::mle};
  PathGenerator generator = PathGenerator::innovation;
  int threads = 1;
  std::int64_t bins = 60;
  double max_excluded_fraction = 0.001;
  bool require_stable = true;     // normality experiments need r(theta) < 1

  void validate() const {
    throw_if_invalid(noise);
    if (n < 10 * model.order())
      throw validation_error("experiment: N must be at least 10p");
    if (m < 2) throw validation_error("experiment: M must be >= 2");
    if (estimators.empty()) throw validation_error("experiment: no estimators selected");
    if (require_stable && spectral_radius(model.theta) >= 1.0)
      throw validation_error("experiment: theta outside stability region");
    if (generator == PathGenerator::circulant && noise.kind != NoiseKind::FGN)
      throw validation_error("experiment: circulant generator is fGn-only");
  }
};

/// Per-estimator results: scaled errors sqrt(N)(theta_hat - theta) row by
/// row, summary statistics and the per-coordinate KS distance against the
/// theoretical limit law N(0, (I^{-1})_{ii}).
struct EstimatorBlock {
  Estimator estimator = Estimator::mle;
  Eigen::MatrixXd theta_hats;   // M x p (NaN rows for excluded replications)
  Eigen::MatrixXd samples;      // M x p scaled errors
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  Eigen::VectorXd ks;
  std::vector<std::int64_t> excluded;       // replication indices
  std::vector<std::uint64_t> excluded_seeds;
};

struct ExperimentReport {
  ExperimentConfig config;
  Eigen::MatrixXd target_cov;  // I(theta)^{-1}
  std::vector<EstimatorBlock> blocks;
  double runtime_seconds = 0.0;

  explicit ExperimentReport(ExperimentConfig c) : config(std::move(c)) {}

  const EstimatorBlock& block(Estimator e) const {
    for (const auto& b : blocks)
      if (b.estimator == e) return b;
    throw validation_error("experiment report: estimator not present");
  }
};

struct NormalityStats {
  Eigen::VectorXd ks;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// KS distances are computed against the exact limit law (fixed variance
/// from the Fisher information), not against a fitted normal.
inline NormalityStats normality_stats(const Eigen::MatrixXd& samples,
                                      const Eigen::MatrixXd& target_cov) {
  if (samples.rows() < 30)
    throw validation_error("normality_stats: need at least 30 samples for KS");
  NormalityStats out;
  out.mean = sample_mean(samples);
  out.cov = sample_covariance(samples);
  out.ks.resize(samples.cols());
  for (Eigen::Index c = 0; c < samples.cols(); ++c) {
    std::vector<double> col(static_cast<std::size_t>(samples.rows()));
    Eigen::Map<Eigen::VectorXd>(col.data(), samples.rows()) = samples.col(c);
    out.ks(c) = ks_distance_normal(std::move(col), target_cov(c, c));
  }
  return out;
}

/// Runs M independent replications with per-replication child seeds and
/// aggregates. The output is a pure function of the resolved config: rows
/// are written into place by replication index and all reductions happen
/// afterwards in index order, so thread count and scheduling never change
/// a byte of the result.
inline ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  const Eigen::Index p = config.model.order();
  const auto rho = covariance_sequence(config.noise, config.n - 1);
  LevinsonOptions lev;
  lev.dense_kernel_limit = 0;
  const InnovationSystem sys = levinson(rho, config.n, lev);

  ExperimentReport report(config);
  report.target_cov = fisher_info(config.model.theta).inverse;

  std::vector<Eigen::MatrixXd> estimates(
      config.estimators.size(),
      Eigen::MatrixXd::Constant(config.m, p, std::numeric_limits<double>::quiet_NaN()));

  const int threads = std::max(1, config.threads);
  std::atomic<std::int64_t> next{0};
  auto worker = [&]() {
    std::vector<double> eps, xi, x;
    for (;;) {
      const std::int64_t r = next.fetch_add(1);
      if (r >= config.m) break;
      const std::uint64_t seed = child_seed(config.seed, static_cast<std::uint64_t>(r));
      Rng rng(seed);
      if (config.generator == PathGenerator::circulant) {
        xi = simulate_fgn_circulant(config.noise.hurst, config.n, rng);
      } else {
        eps = rng.normal_vector(static_cast<std::size_t>(config.n));
        xi = simulate_noise_innovation(sys, eps);
      }
      x = simulate_ar_path(config.model, xi);
      for (std::size_t e = 0; e < config.estimators.size(); ++e) {
        try {
          Eigen::VectorXd est;
          if (config.estimators[e] == Estimator::mle)
            est = mle(x, p, sys).theta_hat;
          else
            est = lse(x, p);
          estimates[e].row(r) = est.transpose();
        } catch (const numerical_error&) {
          // row stays NaN; collected below
        }
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  const double sqrt_n = std::sqrt(static_cast<double>(config.n));
  for (std::size_t e = 0; e < config.estimators.size(); ++e) {
    EstimatorBlock block;
    block.estimator = config.estimators[e];
    block.theta_hats = estimates[e];
    std::vector<std::int64_t> kept;
    for (std::int64_t r = 0; r < config.m; ++r) {
      if (estimates[e].row(r).hasNaN()) {
        block.excluded.push_back(r);
        block.excluded_seeds.push_back(child_seed(config.seed, static_cast<std::uint64_t>(r)));
      } else {
        kept.push_back(r);
      }
    }
    const double frac = static_cast<double>(block.excluded.size()) /
                        static_cast<double>(config.m);
    if (frac > config.max_excluded_fraction)
      throw numerical_error("experiment: excluded fraction " + std::to_string(frac) +
                            " exceeds threshold");
    block.samples.resize(static_cast<Eigen::Index>(kept.size()), p);
    for (std::size_t i = 0; i < kept.size(); ++i)
      block.samples.row(static_cast<Eigen::Index>(i)) =
          sqrt_n * (estimates[e].row(kept[i]) - config.model.theta.transpose());
    block.mean = sample_mean(block.samples);
    block.cov = sample_covariance(block.samples);
    if (block.samples.rows() >= 30) {
      block.ks = normality_stats(block.samples, report.target_cov).ks;
    } else {
      // KS needs a meaningful empirical distribution; tiny runs skip it
      block.ks = Eigen::VectorXd::Constant(p, std::numeric_limits<double>::quiet_NaN());
    }
    report.blocks.push_back(std::move(block));
  }

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

/// CSV with one row per replication:
/// replication_index, seed, theta_hat_1..p, scaled_err_1..p.
/// Excluded replications keep their row with nan entries.
inline std::string experiment_csv(const ExperimentReport& report,
                                  const EstimatorBlock& block) {
  const Eigen::Index p = report.config.model.order();
  std::string out = "replication_index,seed";
  for (Eigen::Index i = 1; i <= p; ++i) out += ",theta_hat_" + std::to_string(i);
  for (Eigen::Index i = 1; i <= p; ++i) out += ",scaled_err_" + std::to_string(i);
  out += "\n";
  const double sqrt_n = std::sqrt(static_cast<double>(report.config.n));
  for (std::int64_t r = 0; r < report.config.m; ++r) {
    out += std::to_string(r);
    out += ",";
    out += std::to_string(child_seed(report.config.seed, static_cast<std::uint64_t>(r)));
    for (Eigen::Index i = 0; i < p; ++i)
      out += "," + format_double(block.theta_hats(r, i));
    for (Eigen::Index i = 0; i < p; ++i)
      out += "," + format_double(sqrt_n * (block.theta_hats(r, i) - report.config.model.theta(i)));
    out += "\n";
  }
  return out;
}

/// JSON report: resolved config echo, then per-estimator statistics.
/// runtime_seconds is emitted as 0 unless include_timing is set; the
/// measured value would otherwise be the one nondeterministic byte run to
/// run.
inline std::string experiment_json(const ExperimentReport& report,
                                   bool include_timing = false) {
  JsonWriter w;
  w.begin_object();
  w.key("config");
  w.begin_object();
  w.kv("p", static_cast<std::int64_t>(report.config.model.order()));
  w.vector_field("theta", report.config.model.theta);
  w.kv("noise", report.config.noise.description());
  w.kv("n", report.config.n);
  w.kv("m", report.config.m);
  w.kv("seed", report.config.seed);
  w.kv("generator", report.config.generator == PathGenerator::circulant
                        ? std::string("circulant")
                        : std::string("innovation"));
  w.kv("bins", report.config.bins);
  w.key("estimators");
  w.begin_array();
  for (auto e : report.config.estimators) w.value(estimator_name(e));
  w.end_array();
  w.end_object();

  w.matrix_field("target_cov", report.target_cov);
  w.key("results");
  w.begin_array();
  for (const auto& block : report.blocks) {
    w.begin_object();
    w.kv("estimator", estimator_name(block.estimator));
    w.vector_field("mean", block.mean);
    w.matrix_field("cov", block.cov);
    w.vector_field("ks", block.ks);
    w.kv("excluded_count", static_cast<std::int64_t>(block.excluded.size()));
    w.key("excluded_seeds");
    w.begin_array();
    for (auto s : block.excluded_seeds) w.value(s);
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.kv("runtime_seconds", include_timing ? report.runtime_seconds : 0.0);
  w.end_object();
  return w.str();
}

/// Histogram CSV (bin_left, bin_right, count) for one coordinate of the
/// scaled errors.
inline std::string histogram_csv(const EstimatorBlock& block, Eigen::Index coord,
                                 std::int64_t bins) {
  std::vector<double> col(static_cast<std::size_t>(block.samples.rows()));
  Eigen::Map<Eigen::VectorXd>(col.data(), block.samples.rows()) = block.samples.col(coord);
  const Histogram h = histogram(col, bins);
  std::string out = "bin_left,bin_right,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out += format_double(h.edges[i]) + "," + format_double(h.edges[i + 1]) + "," +
           std::to_string(h.counts[i]) + "\n";
  }
  return out;
}

}  // namespace argmle
