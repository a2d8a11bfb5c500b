#include <Eigen/Dense>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "argmle/asymptotics.hpp"
#include "argmle/rng.hpp"
#include "helpers.hpp"

using namespace argmle;

TEST_CASE("spectral radius closed forms") {
  REQUIRE(spectral_radius(Eigen::VectorXd::Constant(1, 0.7)) == 0.7);
  REQUIRE(spectral_radius(Eigen::VectorXd::Constant(1, -0.7)) == 0.7);
  REQUIRE(spectral_radius(Eigen::VectorXd::Zero(3)) == 0.0);

  Eigen::VectorXd half(2);
  half << 0.5, 0.5;  // roots 1 and -1/2
  REQUIRE(spectral_radius(half) == Catch::Approx(1.0).epsilon(1e-14));

  Eigen::VectorXd complex_pair(2);
  complex_pair << 0.2, -0.5;  // complex roots, modulus sqrt(0.5)
  REQUIRE(spectral_radius(complex_pair) == Catch::Approx(std::sqrt(0.5)).epsilon(1e-14));
}

TEST_CASE("closed form matches the eigensolver for p = 2") {
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd theta(2);
    theta << 4.0 * rng.uniform01() - 2.0, 4.0 * rng.uniform01() - 2.0;
    const Eigen::MatrixXd a = ArModel(theta).companion();
    const double via_solver =
        Eigen::EigenSolver<Eigen::MatrixXd>(a, false).eigenvalues().cwiseAbs().maxCoeff();
    REQUIRE(spectral_radius(theta) == Catch::Approx(via_solver).margin(1e-12));
  }
}

TEST_CASE("scalar Fisher information is 1/(1 - theta^2)") {
  for (double t : {-0.95, -0.5, 0.0, 0.2, 0.5, 0.9}) {
    const FisherInfo fi = fisher_info(Eigen::VectorXd::Constant(1, t));
    REQUIRE(fi.info(0, 0) == Catch::Approx(1.0 / (1.0 - t * t)).epsilon(1e-15));
    REQUIRE(fi.inverse(0, 0) == Catch::Approx(1.0 - t * t).epsilon(1e-13));
    REQUIRE(fi.stable);
  }
}

TEST_CASE("p = 2 at the origin terminates after two series terms") {
  const FisherInfo fi = fisher_info(Eigen::VectorXd::Zero(2));
  REQUIRE(fi.info.isIdentity(1e-15));
}

TEST_CASE("series and vectorized solve agree") {
  Eigen::VectorXd theta(2);
  theta << 0.5, 0.2;
  const ArModel model(theta);
  const Eigen::MatrixXd a = model.companion();
  const Eigen::MatrixXd q = model.b() * model.b().transpose();
  const Eigen::MatrixXd series =
      detail::lyapunov_solve_series(a, q, spectral_radius(theta));
  const Eigen::MatrixXd solved = detail::lyapunov_solve_vectorized(a, q);
  REQUIRE((series - solved).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fixed point residual stays at solver precision") {
  Rng rng(77);
  for (Eigen::Index p = 1; p <= 4; ++p) {
    for (int i = 0; i < 250; ++i) {
      const Eigen::VectorXd theta = testutil::random_stable_theta(rng, p, 0.995);
      const FisherInfo fi = fisher_info(theta);
      REQUIRE(fi.residual < 1e-12);
      REQUIRE(fi.stable);
      // symmetric positive definite on the stable set
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fi.info);
      REQUIRE(es.eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("information rejects unstable parameters") {
  REQUIRE_THROWS_MATCHES(fisher_info(Eigen::VectorXd::Constant(1, 1.0)), numerical_error,
                         Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring(
                             "outside stability region")));
  Eigen::VectorXd theta(2);
  theta << 0.5, 0.6;
  REQUIRE_THROWS_AS(fisher_info(theta), numerical_error);
}

TEST_CASE("near-boundary parameters are flagged") {
  const FisherInfo fi = fisher_info(Eigen::VectorXd::Constant(1, 1.0 - 1e-7));
  REQUIRE(fi.near_boundary);
  REQUIRE(fi.stable);
  REQUIRE(fi.residual < 1e-8);  // solve-only route, looser residual near 1
}

TEST_CASE("information varies smoothly in theta") {
  // two-sided difference quotients at nested steps agree to first order
  Eigen::VectorXd theta(2);
  theta << 0.4, 0.3;
  for (Eigen::Index i = 0; i < 2; ++i) {
    auto derivative = [&](double h) {
      Eigen::VectorXd up = theta, dn = theta;
      up(i) += h;
      dn(i) -= h;
      return Eigen::MatrixXd((fisher_info(up).info - fisher_info(dn).info) / (2.0 * h));
    };
    const Eigen::MatrixXd d1 = derivative(1e-5);
    const Eigen::MatrixXd d2 = derivative(2e-5);
    REQUIRE((d1 - d2).cwiseAbs().maxCoeff() < 1e-3 * d1.cwiseAbs().maxCoeff());
  }
}
