#pragma once

// Cross-validation suites wiring independent computational routes against
// each other. Shared by the `verify` CLI subcommand and the acceptance
// tests.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "argmle/asymptotics.hpp"
#include "argmle/estimation.hpp"
#include "argmle/innovations.hpp"
#include "argmle/laplace.hpp"
#include "argmle/montecarlo.hpp"
#include "argmle/noise.hpp"
#include "argmle/rng.hpp"
#include "argmle/simulate.hpp"

namespace argmle::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline std::vector<NoiseModel> builtin_models() {
  return {NoiseModel::white(),  NoiseModel::ma1(0.4), NoiseModel::ar1(0.4),
          NoiseModel::fgn(0.2), NoiseModel::fgn(0.5), NoiseModel::fgn(0.8)};
}

/// Cholesky / kernel identities at N = 128 for every built-in model:
/// max |k^T D^{-1} k Gamma - I| and max |K D K^T - Gamma| below 1e-8.
inline std::vector<CheckResult> cholesky_suite(Eigen::Index n = 128,
                                               double tol = 1e-8) {
  std::vector<CheckResult> results;
  for (const auto& model : builtin_models()) {
    const auto rho = covariance_sequence(model, n - 1);
    const InnovationSystem sys = levinson(rho, n);
    const Eigen::MatrixXd gamma = toeplitz_covariance(rho, n);
    const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(sys.sigma2.data(), n);

    const Eigen::MatrixXd inverse_identity =
        sys.k().transpose() * d.cwiseInverse().asDiagonal() * sys.k() * gamma;
    const double err_inv =
        (inverse_identity - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    const double err_fwd = (reconstruct_covariance(sys) - gamma).cwiseAbs().maxCoeff();

    std::ostringstream os;
    os << "max|k^T D^-1 k G - I| = " << err_inv << ", max|K D K^T - G| = " << err_fwd;
    results.push_back({"cholesky/" + model.description(),
                       err_inv < tol && err_fwd < tol, os.str()});
  }
  return results;
}

/// MLE against dense GLS on simulated paths, plus the exact martingale
/// identity theta_hat - theta = bracket^{-1} M at the true parameter.
inline std::vector<CheckResult> mle_vs_gls_suite(std::int64_t n = 300,
                                                 int seeds = 20,
                                                 double tol_gls = 1e-8,
                                                 double tol_mart = 1e-10) {
  std::vector<CheckResult> results;
  const std::vector<Eigen::VectorXd> thetas = {
      (Eigen::VectorXd(1) << 0.5).finished(),
      (Eigen::VectorXd(2) << 0.5, 0.2).finished(),
      (Eigen::VectorXd(3) << 0.4, 0.2, 0.1).finished()};
  for (const auto& theta : thetas) {
    const ArModel model(theta);
    for (const auto& noise : builtin_models()) {
      const auto rho = covariance_sequence(noise, n - 1);
      const InnovationSystem sys = levinson(rho, n);
      const Eigen::MatrixXd gamma = toeplitz_covariance(rho, n);
      double worst_gls = 0.0, worst_mart = 0.0;
      for (int s = 0; s < seeds; ++s) {
        const auto bundle =
            simulate_bundle(model, sys, n, child_seed(977, static_cast<std::uint64_t>(s)));
        MleOptions opt;
        opt.theta_ref = theta;
        const EstimationResult est = mle(bundle.x, theta.size(), sys, opt);
        const Eigen::VectorXd gls = gls_oracle(bundle.x, theta.size(), gamma);
        worst_gls = std::max(worst_gls,
                             (est.theta_hat - gls).cwiseAbs().maxCoeff());
        const Eigen::VectorXd recovered =
            theta + est.bracket.ldlt().solve(est.martingale);
        worst_mart = std::max(worst_mart,
                              (est.theta_hat - recovered).cwiseAbs().maxCoeff());
      }
      std::ostringstream os;
      os << "max|mle-gls| = " << worst_gls << ", max martingale defect = " << worst_mart;
      results.push_back({"mle-vs-gls/p" + std::to_string(theta.size()) + "/" +
                             noise.description(),
                         worst_gls < tol_gls && worst_mart < tol_mart, os.str()});
    }
  }
  return results;
}

/// Explicit Laplace transform against Monte Carlo, |explicit - mc| <= 3 SE.
inline std::vector<CheckResult> laplace_vs_mc_suite(std::int64_t replications = 200000,
                                                    std::uint64_t seed = 31) {
  std::vector<CheckResult> results;
  struct Case {
    Eigen::VectorXd theta;
    Eigen::VectorXd alpha;
  };
  std::vector<Case> cases;
  cases.push_back({(Eigen::VectorXd(1) << 0.5).finished(),
                   (Eigen::VectorXd(1) << 1.0).finished()});
  cases.push_back({(Eigen::VectorXd(2) << 0.5, 0.2).finished(),
                   (Eigen::VectorXd(2) << 1.0, 0.0).finished()});
  const std::vector<NoiseModel> noises = {NoiseModel::white(), NoiseModel::ma1(0.4),
                                          NoiseModel::fgn(0.8)};
  for (const auto& c : cases) {
    const ArModel model(c.theta);
    for (const auto& noise : noises) {
      const auto rho = covariance_sequence(noise, 16);
      const InnovationSystem sys = levinson(rho, 17);
      for (std::int64_t n : {5, 10, 16}) {
        for (double mu : {0.25, 1.0}) {
          const auto expl = laplace_explicit(model, sys, c.alpha, mu, n);
          MonteCarloLaplaceOptions mc;
          mc.replications = replications;
          mc.seed = seed;
          const auto est = laplace_monte_carlo(model, noise, c.alpha, mu, n, mc);
          const double gap = std::abs(expl.value - est.value);
          std::ostringstream os;
          os << "explicit = " << expl.value << ", mc = " << est.value
             << " +- " << est.std_error << ", gap/SE = " << gap / est.std_error;
          results.push_back({"laplace-vs-mc/p" + std::to_string(c.theta.size()) + "/" +
                                 noise.description() + "/N" + std::to_string(n) +
                                 "/mu" + format_double(mu),
                             gap <= 3.0 * est.std_error, os.str()});
        }
      }
    }
  }
  return results;
}

/// Lyapunov solution checks: exact p = 1 value, residual below 1e-12 and
/// series/solve agreement for random stable parameters up to p = 4.
inline std::vector<CheckResult> lyapunov_suite(int draws = 1000) {
  std::vector<CheckResult> results;
  {
    double worst = 0.0;
    for (double t : {-0.9, -0.5, 0.0, 0.3, 0.7, 0.95}) {
      const FisherInfo fi = fisher_info(Eigen::VectorXd::Constant(1, t));
      worst = std::max(worst, std::abs(fi.info(0, 0) - 1.0 / (1.0 - t * t)));
    }
    std::ostringstream os;
    os << "max |I - 1/(1-theta^2)| = " << worst;
    results.push_back({"lyapunov/p1-exact", worst < 1e-14, os.str()});
  }
  Rng rng(4242);
  for (Eigen::Index p = 1; p <= 4; ++p) {
    double worst_res = 0.0;
    bool ok = true;
    for (int i = 0; i < draws; ++i) {
      Eigen::VectorXd theta(p);
      do {
        for (Eigen::Index j = 0; j < p; ++j) theta(j) = 2.0 * rng.uniform01() - 1.0;
      } while (spectral_radius(theta) >= 0.995);
      try {
        const FisherInfo fi = fisher_info(theta);  // throws if routes disagree
        worst_res = std::max(worst_res, fi.residual);
      } catch (const numerical_error&) {
        ok = false;
      }
    }
    std::ostringstream os;
    os << draws << " draws, max residual = " << worst_res;
    results.push_back({"lyapunov/p" + std::to_string(p) + "-random",
                       ok && worst_res < 1e-12, os.str()});
  }
  return results;
}

inline std::vector<CheckResult> run_suite(const std::string& name) {
  if (name == "cholesky") return cholesky_suite();
  if (name == "mle-vs-gls") return mle_vs_gls_suite();
  if (name == "laplace-vs-mc") return laplace_vs_mc_suite();
  if (name == "lyapunov") return lyapunov_suite();
  if (name == "all") {
    std::vector<CheckResult> all;
    for (const auto& s : {"cholesky", "mle-vs-gls", "laplace-vs-mc", "lyapunov"}) {
      auto part = run_suite(s);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw validation_error("unknown verify suite: " + name);
}

}  // namespace argmle::verify
