#include <Eigen/Dense>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "argmle/innovations.hpp"
#include "argmle/noise.hpp"
#include "argmle/rng.hpp"
#include "argmle/simulate.hpp"
#include "argmle/state_space.hpp"
#include "helpers.hpp"

using namespace argmle;

namespace {
InnovationSystem make_system(const NoiseModel& model, std::int64_t n) {
  return levinson(covariance_sequence(model, n - 1), n);
}
}  // namespace

TEST_CASE("companion matrix layout") {
  Eigen::VectorXd theta(3);
  theta << 0.5, -0.2, 0.1;
  const ArModel model(theta);
  Eigen::MatrixXd expected(3, 3);
  expected << 0.5, -0.2, 0.1, 1, 0, 0, 0, 1, 0;
  REQUIRE(model.companion().isApprox(expected, 0.0));
  REQUIRE(model.b().dot(model.b()) == 1.0);
  REQUIRE_THROWS_AS(ArModel(Eigen::VectorXd()), validation_error);
}

TEST_CASE("embed examples") {
  const std::vector<double> x{1.0, 2.0, 3.0};
  REQUIRE(embed(x, 1).isApprox(Eigen::MatrixXd(Eigen::Vector3d(1, 2, 3)), 0.0));

  const Eigen::MatrixXd y2 = embed(x, 2);
  Eigen::MatrixXd expected(3, 2);
  expected << 1, 0, 2, 1, 3, 2;
  REQUIRE(y2.isApprox(expected, 0.0));

  const Eigen::MatrixXd y3 = embed(std::vector<double>{5.0}, 3);
  REQUIRE(y3.rows() == 1);
  REQUIRE(y3(0, 0) == 5.0);
  REQUIRE(y3(0, 1) == 0.0);
  REQUIRE(y3(0, 2) == 0.0);
}

TEST_CASE("embedding satisfies the companion recursion") {
  Eigen::VectorXd theta(2);
  theta << 0.5, 0.2;
  const ArModel model(theta);
  Rng rng(4);
  const auto xi = rng.normal_vector(100);
  const auto x = simulate_ar_path(model, xi);
  const Eigen::MatrixXd y = embed(x, 2);
  const Eigen::MatrixXd a0 = model.companion();
  for (int t = 1; t < 100; ++t) {
    const Eigen::Vector2d pred =
        a0 * y.row(t - 1).transpose() + model.b() * xi[static_cast<std::size_t>(t)];
    REQUIRE((y.row(t).transpose() - pred).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("z transform is the identity under white noise") {
  const auto sys = make_system(NoiseModel::white(), 10);
  Rng rng(6);
  const Eigen::MatrixXd y = Eigen::MatrixXd::Random(10, 2);
  REQUIRE((z_transform(y, sys) - y).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("second step subtracts the partial correlation") {
  const auto sys = make_system(NoiseModel::ar1(0.4), 8);
  const Eigen::MatrixXd y = Eigen::MatrixXd::Random(8, 2);
  const Eigen::MatrixXd z = z_transform(y, sys);
  REQUIRE((z.row(1) - (y.row(1) - sys.beta[0] * y.row(0))).cwiseAbs().maxCoeff() <
          1e-14);
}

TEST_CASE("z transform round-trips through the inverse kernel") {
  const auto sys = make_system(NoiseModel::ar1(0.4), 50);
  const Eigen::MatrixXd y = Eigen::MatrixXd::Random(50, 3);
  const Eigen::MatrixXd back = z_inverse_transform(z_transform(y, sys), sys.beta);
  REQUIRE((back - y).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("z transform validates horizon") {
  const auto sys = make_system(NoiseModel::ar1(0.4), 4);
  const Eigen::MatrixXd y = Eigen::MatrixXd::Random(8, 1);
  REQUIRE_THROWS_AS(z_transform(y, sys), validation_error);
}

TEST_CASE("zeta under white noise stacks zeros") {
  const auto sys = make_system(NoiseModel::white(), 12);
  const Eigen::MatrixXd z = Eigen::MatrixXd::Random(12, 2);
  const Eigen::MatrixXd zeta = zeta_process(z, sys.beta);
  REQUIRE(zeta.rows() == 12);
  REQUIRE(zeta.cols() == 4);
  REQUIRE((zeta.leftCols(2) - z).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(zeta.rightCols(2).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::MatrixXd a = transition_matrix(ArModel::scalar(0.5).companion(), 0.0);
  Eigen::MatrixXd expected(2, 2);
  expected << 0.5, 0, 0, 1;
  REQUIRE(a.isApprox(expected, 0.0));
}

TEST_CASE("first state ignores beta_0") {
  const auto sys = make_system(NoiseModel::fgn(0.8), 6);
  const Eigen::MatrixXd z = Eigen::MatrixXd::Random(6, 1);
  const Eigen::MatrixXd zeta = zeta_process(z, sys.beta);
  REQUIRE(zeta(0, 0) == z(0, 0));
  REQUIRE(zeta(0, 1) == 0.0);
}

TEST_CASE("state recursion holds with the true innovations") {
  // zeta_n = A_{n-1} zeta_{n-1} + ell sigma_n eps_n, built from definitions
  for (const auto& noise : {NoiseModel::white(), NoiseModel::ma1(0.4),
                            NoiseModel::ar1(0.4), NoiseModel::fgn(0.2),
                            NoiseModel::fgn(0.8)}) {
    for (Eigen::Index p : {1, 2, 3}) {
      Eigen::VectorXd theta(p);
      if (p == 1) theta << 0.5;
      if (p == 2) theta << 0.5, 0.2;
      if (p == 3) theta << 0.4, 0.2, 0.1;
      const ArModel model(theta);
      const std::int64_t n = 500;
      const auto sys = make_system(noise, n);
      const auto bundle = simulate_bundle(model, sys, n, 2024);

      const Eigen::MatrixXd z = z_transform(embed(bundle.x, p), sys);
      const Eigen::MatrixXd zeta = zeta_process(z, sys.beta);
      const Eigen::MatrixXd a0 = model.companion();
      const Eigen::VectorXd l = ell(p);

      double worst = 0.0;
      double worst_eps = 0.0;
      Eigen::VectorXd prev = Eigen::VectorXd::Zero(2 * p);
      for (std::int64_t t = 0; t < n; ++t) {
        const double beta_prev =
            t == 0 ? 0.0 : sys.beta[static_cast<std::size_t>(t - 1)];
        const Eigen::MatrixXd a = transition_matrix(a0, beta_prev);
        const Eigen::VectorXd pred =
            a * prev + l * sys.sigma[static_cast<std::size_t>(t)] *
                           bundle.eps[static_cast<std::size_t>(t)];
        worst = std::max(worst,
                         (zeta.row(t).transpose() - pred).cwiseAbs().maxCoeff());
        // innovation reconstruction: ell^T(zeta_n - A zeta_{n-1})/sigma_n = eps_n
        const double eps_rec =
            (zeta.row(t).transpose() - a * prev).dot(l) /
            sys.sigma[static_cast<std::size_t>(t)];
        worst_eps = std::max(worst_eps,
                             std::abs(eps_rec - bundle.eps[static_cast<std::size_t>(t)]));
        prev = zeta.row(t).transpose();
      }
      INFO("noise " << noise.description() << " p " << p);
      REQUIRE(worst < 1e-10);
      REQUIRE(worst_eps < 1e-9);
    }
  }
}

TEST_CASE("transition determinant identity") {
  // det A_n = (1 - beta_n^2)^p det A0, against a generic determinant routine
  Rng rng(31);
  for (Eigen::Index p : {1, 2, 3, 4}) {
    const Eigen::VectorXd theta = testutil::random_stable_theta(rng, p);
    const Eigen::MatrixXd a0 = ArModel(theta).companion();
    for (double beta : {0.0, 0.3, -0.8}) {
      const double lhs = transition_matrix(a0, beta).determinant();
      const double rhs = std::pow(1.0 - beta * beta, static_cast<double>(p)) *
                         a0.determinant();
      REQUIRE(lhs == Catch::Approx(rhs).margin(1e-12));
    }
  }
}
