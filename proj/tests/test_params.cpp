#include <doctest.h>

#include <random>

#include "fsplit/error.hpp"
#include "fsplit/ops.hpp"
#include "fsplit/params.hpp"
#include "fsplit/params_json.hpp"

using namespace fsplit;

namespace {

CausalPair forced_two_node(int m) {
  CausalPair c;
  c.H = Eigen::MatrixXd::Zero(2, m);
  c.H.row(1).setOnes();
  c.K = Eigen::MatrixXd::Zero(m, 2);
  c.K.col(0).setOnes();
  c.F = NondecreasingVector({0, m}, m);
  return c;
}

// Two-node parameters in operator form, entered as displayed for the
// Davis-Yin case: Gamma = gamma I, L_21 = 2 / gamma, M = lambda (1, -1)^T.
SplittingParams davis_yin_operator_form(double gamma, double theta_bar, double beta) {
  const double lambda = std::sqrt(theta_bar / gamma);
  Eigen::MatrixXd M(2, 1);
  M << lambda, -lambda;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(2, 2);
  L(1, 0) = 2.0 / gamma;
  return from_operator_form(M, Eigen::Vector2d(gamma, gamma), L, forced_two_node(1),
                            Eigen::VectorXd::Constant(1, beta), 0.9);
}

SplittingParams random_params(int n, int m, std::uint64_t seed) {
  const NondecreasingVector F = random_F(n, m, seed);
  std::optional<CausalPair> causal;
  if (m > 0) causal = random_causal_pair(F, {0.1, 1.0}, {0.1, 1.0}, seed + 1);
  std::mt19937_64 rng(seed + 2);
  std::uniform_real_distribution<double> unit(0.0, 2.0);
  Eigen::VectorXd beta(m);
  for (int j = 0; j < m; ++j) beta(j) = unit(rng);
  return assemble(random_M(n, {0.0, 1.0}, seed + 3), Eigen::MatrixXd(n, 0), causal, beta, 0.9);
}

}  // namespace

TEST_SUITE("params") {

TEST_CASE("assemble on the two-node example") {
  Eigen::MatrixXd M(2, 1);
  M << 1, -1;
  const SplittingParams p =
      assemble(M, Eigen::MatrixXd(2, 0), forced_two_node(1), Eigen::VectorXd::Constant(1, 2.0), 0.9);
  // By hand: MM^T = [1 -1; -1 1], W = (2/2) [1 -1; -1 1].
  Eigen::MatrixXd S(2, 2);
  S << 2, -2, -2, 2;
  CHECK(p.S.isApprox(S));
  CHECK(p.gamma.isApprox(Eigen::Vector2d(1, 1)));
  Eigen::MatrixXd L(2, 2);
  L << 0, 0, 2, 0;
  CHECK(p.L.isApprox(L));
  // L_21 = 1/gamma_1 + 1/gamma_2 as forced for n = 2.
  CHECK(p.L(1, 0) == doctest::Approx(1.0 / p.gamma(0) + 1.0 / p.gamma(1)));
}

TEST_CASE("assemble with the complete laplacian") {
  const SplittingParams p = assemble_lifted(full_laplacian(3), Eigen::MatrixXd(3, 0),
                                            std::nullopt, Eigen::VectorXd(0), 0.9);
  CHECK(p.S.isApprox(full_laplacian(3)));
  CHECK(p.gamma.isApprox(Eigen::Vector3d(1, 1, 1)));
  CHECK((p.M * p.M.transpose()).isApprox(full_laplacian(3)));
}

TEST_CASE("assemble rejects bad inputs") {
  Eigen::MatrixXd M(3, 2);
  M << 1, 0, -1, 0, 0, 0;  // zero column
  CHECK_THROWS_AS(assemble(M, Eigen::MatrixXd(3, 0), std::nullopt, Eigen::VectorXd(0), 0.9), Error);
  try {
    assemble(M, Eigen::MatrixXd(3, 0), std::nullopt, Eigen::VectorXd(0), 0.9);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidM);
  }
  Eigen::MatrixXd notcentered(2, 1);
  notcentered << 1, 0;
  CHECK_THROWS_AS(assemble(notcentered, Eigen::MatrixXd(2, 0), std::nullopt, Eigen::VectorXd(0), 0.9),
                  Error);
  // theta outside (0, 1).
  Eigen::MatrixXd M2(3, 2);
  M2 << 1, 1, -1, 1, 0, -2;
  CHECK_NOTHROW(assemble(M2, Eigen::MatrixXd(3, 0), std::nullopt, Eigen::VectorXd(0), 0.9));
  CHECK_THROWS_AS(assemble(M2, Eigen::MatrixXd(3, 0), std::nullopt, Eigen::VectorXd(0), 1.5), Error);
}

TEST_CASE("validate_params on random assembled parameters") {
  int count = 0;
  for (int n = 2; n <= 8; ++n) {
    for (int m = 0; m <= 6; ++m) {
      for (int rep = 0; rep < 2; ++rep) {
        const SplittingParams p = random_params(n, m, 1000 * n + 10 * m + rep);
        const ValidationReport r = validate_params(p);
        CHECK(r.passed());
        CHECK(std::abs(r.lmi_min_eigenvalue) <= 1e-8);
        const double s = (Eigen::VectorXd::Ones(n).array() / p.gamma.array()).sum() -
                         (Eigen::RowVectorXd::Ones(n) * p.L * Eigen::VectorXd::Ones(n))(0);
        CHECK(std::abs(s) <= 1e-10);
        // L is exactly strictly lower triangular.
        CHECK(p.L.triangularView<Eigen::Upper>().toDenseMatrix().isZero(0.0));
        ++count;
      }
    }
  }
  CHECK(count == 98);
}

TEST_CASE("validate_params detects each violated condition") {
  const SplittingParams good = random_params(4, 3, 77);
  REQUIRE(validate_params(good).passed());

  // (i): M without full rank.
  Eigen::MatrixXd M = good.M;
  M.col(0).setZero();
  SplittingParams bad_m = from_operator_form(M, good.gamma, good.L, good.causal, good.beta, 0.9);
  CHECK_FALSE(validate_params(bad_m).null_space_ok);

  // (ii): L with an upper entry.
  Eigen::MatrixXd L = good.L;
  L(0, 2) = 0.5;
  CHECK_FALSE(validate_params(from_operator_form(good.M, good.gamma, L, good.causal, good.beta, 0.9))
                  .lower_triangular_ok);

  // (iii): H column sums off one.
  CausalPair c = *good.causal;
  c.H *= 2.0;
  CHECK_FALSE(validate_params(from_operator_form(good.M, good.gamma, good.L, c, good.beta, 0.9))
                  .causal_ok);

  // (iv): shrink the step sizes' inverse so that S no longer dominates.
  CHECK_FALSE(validate_params(from_operator_form(good.M, 2.0 * good.gamma, 0.5 * good.L,
                                                 good.causal, good.beta, 0.9))
                  .psd_ok);

  CHECK_FALSE(validate_params(from_operator_form(good.M, good.gamma, good.L, good.causal, good.beta, 1.0))
                  .theta_ok);
}

TEST_CASE("Davis-Yin step-size boundary in operator form") {
  // Inside the range with theta_bar at the bound: lambda_min = 0.
  const double beta = 2.0, gamma = 1.5;
  const SplittingParams at_bound = davis_yin_operator_form(gamma, (4.0 - beta * gamma) / 2.0, beta);
  CHECK(std::abs(lmi_min_eigenvalue(at_bound)) <= 1e-8);
  CHECK(validate_params(at_bound).passed());
  // Beyond the range.
  const SplittingParams beyond = davis_yin_operator_form(5.0 / beta, 0.1, beta);
  CHECK(lmi_min_eigenvalue(beyond) < 0.0);
  CHECK_FALSE(validate_params(beyond).psd_ok);
  const SplittingParams edge = davis_yin_operator_form(4.0 / beta, 1e-6, beta);
  CHECK_FALSE(validate_params(edge).passed());
}

TEST_CASE("factor_P") {
  const SplittingParams base = random_params(5, 3, 3);
  const Eigen::MatrixXd W = base.W;
  // Zero residual gives an empty factor.
  const Eigen::MatrixXd P0 = factor_P(base.M * base.M.transpose() + W, base.M, W);
  CHECK((P0.cols() == 0 || P0.norm() < 1e-7));

  // Adding a PSD residual with R 1 = 0 is recovered.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::MatrixXd B(5, 2);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 2; ++j) B(i, j) = unit(rng);
  B = center_columns(B);
  const Eigen::MatrixXd R = B * B.transpose();
  const Eigen::MatrixXd S_target = base.M * base.M.transpose() + R + W;
  const Eigen::MatrixXd P = factor_P(S_target, base.M, W);
  CHECK((P * P.transpose() - R).norm() <= 1e-10 * R.norm());
  CHECK((P.transpose() * Eigen::VectorXd::Ones(5)).norm() <= 1e-10);
  const SplittingParams rebuilt = assemble(base.M, P, base.causal, base.beta, 0.9);
  CHECK((rebuilt.S - S_target).norm() <= 1e-9 * S_target.norm());

  // Indefinite residual.
  CHECK_THROWS_AS(factor_P(base.M * base.M.transpose() - R + W, base.M, W), Error);
}

TEST_CASE("laplacian_factor") {
  Eigen::MatrixXd lap(2, 2);
  lap << 1, -1, -1, 1;
  const Eigen::MatrixXd M = laplacian_factor(lap);
  CHECK(M.rows() == 2);
  CHECK(M.cols() == 1);
  CHECK((M * M.transpose() - lap).norm() <= 1e-12);
  CHECK(std::abs(std::abs(M(0, 0)) - 1.0) < 1e-12);  // M M^T = lap forces |M_11| = 1
  CHECK(M(0, 0) == doctest::Approx(-M(1, 0)));

  for (int n = 2; n <= 8; ++n) {
    const Eigen::MatrixXd F = laplacian_factor(full_laplacian(n));
    CHECK((F * F.transpose() - full_laplacian(n)).norm() <= 1e-10 * n);
    const Eigen::MatrixXd Mr = random_M(n, {0, 1}, 50 + n);
    const Eigen::MatrixXd G = Mr * Mr.transpose();
    const Eigen::MatrixXd Fr = laplacian_factor(G);
    CHECK((Fr * Fr.transpose() - G).norm() <= 1e-9 * G.norm());
    CHECK((Fr.transpose() * Eigen::VectorXd::Ones(n)).norm() <= 1e-9 * G.norm());
  }

  Eigen::MatrixXd off(2, 2);
  off << 1, 0, 0, 1;
  CHECK_THROWS_AS(laplacian_factor(off), Error);
  Eigen::MatrixXd low_rank = Eigen::MatrixXd::Zero(3, 3);
  low_rank.topLeftCorner(2, 2) = lap;
  CHECK_THROWS_AS(laplacian_factor(low_rank), Error);
}

TEST_CASE("random_M") {
  for (int seed = 0; seed < 20; ++seed) {
    const Eigen::MatrixXd M = random_M(5, {0, 1}, seed);
    CHECK(M.colwise().sum().cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, M.norm()));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    CHECK(svd.singularValues()(3) > 1e-8 * svd.singularValues()(0));
  }
  const Eigen::MatrixXd M2 = random_M(2, {0, 1}, 9);
  CHECK(M2(0, 0) == doctest::Approx(-M2(1, 0)));
  CHECK(random_M(4, {0, 1}, 7) == random_M(4, {0, 1}, 7));
}

TEST_CASE("json round trip is bit exact") {
  for (int seed = 0; seed < 5; ++seed) {
    SplittingParams p = random_params(3 + seed, seed, 500 + seed);
    p = assemble(p.M, random_P(p.n(), 2, {0, 1}, seed), p.causal, p.beta, p.theta);
    const SplittingParams q = params_from_json(nlohmann::json::parse(params_to_json(p).dump()));
    CHECK(q.M == p.M);
    CHECK(q.P == p.P);
    CHECK(q.S == p.S);
    CHECK(q.gamma == p.gamma);
    CHECK(q.L == p.L);
    CHECK(q.beta == p.beta);
    CHECK(q.theta == p.theta);
    CHECK(q.causal.has_value() == p.causal.has_value());
    if (p.causal) {
      CHECK(q.causal->H == p.causal->H);
      CHECK(q.causal->K == p.causal->K);
      CHECK(q.causal->F == p.causal->F);
    }
  }
  CHECK_THROWS_AS(params_from_json(nlohmann::json{{"n", 2}}), Error);
}

}
