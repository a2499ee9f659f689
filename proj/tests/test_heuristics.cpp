#include <doctest.h>

#include "fsplit/heuristics.hpp"
#include "fsplit/ops.hpp"

using namespace fsplit;

namespace {

double hk_objective(const Eigen::MatrixXd& H, const Eigen::MatrixXd& K, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd s = beta.cwiseSqrt();
  return Eigen::JacobiSVD<Eigen::MatrixXd>(s.asDiagonal() * (K - H.transpose())).singularValues()(0);
}

}  // namespace

TEST_SUITE("heuristics") {

TEST_CASE("heuristic_laplacian spectrum") {
  Eigen::MatrixXd expected(3, 3);
  expected << 2, -1, -1, -1, 2, -1, -1, -1, 2;
  CHECK(heuristic_laplacian(3) == expected);
  for (int n = 2; n <= 8; ++n) {
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(heuristic_laplacian(n)).eigenvalues();
    CHECK(ev(1) == doctest::Approx(n));  // algebraic connectivity
    CHECK(ev(n - 1) == doctest::Approx(n));
  }
}

TEST_CASE("optimize_HK matches a grid search for n = 3, m = 1") {
  const NondecreasingVector F({0, 1, 1}, 1);
  for (double beta : {1.0, 0.3, 4.0}) {
    const Eigen::VectorXd b = Eigen::VectorXd::Constant(1, beta);
    // Oracle: the only free entries are H_21 = a, H_31 = 1 - a; K = (1, 0, 0).
    double best = 1e300;
    for (int k = 0; k <= 10000; ++k) {
      const double a = k * 1e-4;
      Eigen::MatrixXd H(3, 1);
      H << 0, a, 1 - a;
      Eigen::MatrixXd K(1, 3);
      K << 1, 0, 0;
      best = std::min(best, hk_objective(H, K, b));
    }
    CHECK(best == doctest::Approx(std::sqrt(1.5 * beta)).epsilon(1e-6));
    const HKOptimizationResult r = optimize_HK(F, b);
    CHECK(std::abs(r.objective - best) <= 1e-3 * best);
    CHECK(r.H(1, 0) == doctest::Approx(0.5).epsilon(1e-2));
    CHECK(std::abs(r.objective - hk_objective(r.H, r.K, b)) <= 1e-9);
  }
}

TEST_CASE("optimize_HK on two nodes returns the forced pair") {
  for (int m = 1; m <= 4; ++m) {
    Eigen::VectorXd beta(m);
    for (int j = 0; j < m; ++j) beta(j) = 0.5 + j;
    const HKOptimizationResult r = optimize_HK(NondecreasingVector({0, m}, m), beta);
    CHECK(r.H.row(0).isZero(0.0));
    CHECK(r.H.row(1) == Eigen::RowVectorXd::Ones(m));
    CHECK(r.K.col(0) == Eigen::VectorXd::Ones(m));
    CHECK(r.K.col(1).isZero(0.0));
    // (H - K^T) diag(beta) (H^T - K) = (sum beta) [1 -1; -1 1], so ||W|| = sum beta.
    const Eigen::MatrixXd W = 0.5 * (r.H - r.K.transpose()) * beta.asDiagonal() *
                              (r.H.transpose() - r.K);
    CHECK(spectral_norm(W) == doctest::Approx(beta.sum()));
    CHECK(r.objective == doctest::Approx(std::sqrt(2.0 * beta.sum())));
  }
}

TEST_CASE("optimize_HK feasibility and improvement over the uniform start") {
  for (int seed = 0; seed < 10; ++seed) {
    const int n = 3 + seed % 4;
    const int m = 1 + seed % 5;
    const NondecreasingVector F = random_F(n, m, seed);
    Eigen::VectorXd beta(m);
    for (int j = 0; j < m; ++j) beta(j) = 0.5 + 0.25 * ((seed + j) % 5);
    const HKOptimizationResult r = optimize_HK(F, beta);
    CHECK(is_causal_pair(r.H, r.K, F));
    CHECK((r.H.colwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
    CHECK((r.K.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
    // Uniform feasible point.
    Eigen::MatrixXd H0 = Eigen::MatrixXd::Zero(n, m), K0 = Eigen::MatrixXd::Zero(m, n);
    for (int j = 0; j < m; ++j) {
      int hc = 0, kc = 0;
      for (int i = 0; i < n; ++i) (F.forward_before(j, i) ? hc : kc)++;
      for (int i = 0; i < n; ++i) {
        if (F.forward_before(j, i)) H0(i, j) = 1.0 / hc; else K0(j, i) = 1.0 / kc;
      }
    }
    CHECK(r.objective <= hk_objective(H0, K0, beta) + 1e-12);
  }
  const HKOptimizationResult empty = optimize_HK(NondecreasingVector({0, 0, 0}, 0), Eigen::VectorXd(0));
  CHECK(empty.objective == 0.0);
  CHECK(empty.H.cols() == 0);
}

TEST_CASE("sfb_plus_params") {
  const SplittingParams two = sfb_plus_params(NondecreasingVector({0, 1}, 1), Eigen::VectorXd::Constant(1, 2.0));
  // S = [1 -1; -1 1] (1 + beta/2), gamma_i = 2 / (1 + beta/2).
  CHECK(two.gamma.isApprox(Eigen::Vector2d::Constant(2.0 / 2.0)));
  const SplittingParams three = sfb_plus_params(NondecreasingVector({0, 0, 0}, 0), Eigen::VectorXd(0));
  CHECK(three.S.isApprox(full_laplacian(3)));
  CHECK(three.gamma.isApprox(Eigen::Vector3d::Ones()));
  CHECK(three.P.cols() == 0);
  for (int seed = 0; seed < 50; ++seed) {
    const int n = 2 + seed % 7;
    const int m = seed % 6;
    Eigen::VectorXd beta(m);
    for (int j = 0; j < m; ++j) beta(j) = 0.1 + (seed * 7 + j) % 4;
    const SplittingParams p = sfb_plus_params(random_F(n, m, seed), beta, 0.9, 100);
    CHECK(validate_params(p).passed());
    CHECK(p.laplacian == full_laplacian(n));
  }
}

}
