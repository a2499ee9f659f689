#pragma once

// Generators for the benchmark problems: a composite toy problem (sum of
// distances plus a Huber-like data term) and a constrained portfolio problem.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>

#include "fsplit/problem.hpp"

namespace fsplit {

/// min_x sum_i ||x - xi_i|| + sum_k h(Psi_k x - y_k), Huber knees delta1 <= delta2.
struct ToyProblemConfig {
  int n = 5;
  int d = 20;
  int p = 30;
  int m = 5;
  double delta1 = 0.1;
  double delta2 = 1.0;
  std::uint64_t seed = 0;
  bool hetero = false;  ///< scale 2 random rows of Psi by 5
};

/// Raw data of a toy instance; independent of m for a fixed seed.
struct ToyData {
  Eigen::MatrixXd xi;   ///< n x d, one center per row
  Eigen::MatrixXd Psi;  ///< p x d
  Eigen::VectorXd y;    ///< p
};

ToyData gen_toy_data(const ToyProblemConfig& cfg);

/// Row block k of an even partition of p rows into m blocks (leading blocks
/// take the remainder): returns (first row, row count).
std::pair<int, int> row_block(int p, int m, int k);

/// n norm-distance resolvents, m block-gradient forwards with
/// beta_k = ||Psi_I Psi_I^T||_2, and the objective. Throws InvalidParameters
/// when m > p or the knees are out of order.
ProblemSpec gen_toy_problem(const ToyProblemConfig& cfg);

/// min x^T S x - r^T x + w ||x - x0||_1 over the simplex intersected with
/// three carbon-intensity halfspaces.
struct PortfolioProblemConfig {
  int assets = 6;
  int days = 123;
  int chunks = 4;
  std::array<double, 3> zeta{0.07, 0.07, 0.07};
  double turnover = 1.0;
  std::uint64_t seed = 0;
  /// Returns (days x assets, percent units); overrides the synthetic sampler.
  std::optional<std::filesystem::path> data;
};

struct PortfolioData {
  Eigen::MatrixXd returns;  ///< days x assets
  Eigen::MatrixXd carbon;   ///< 3 x assets, one scope per row
  Eigen::VectorXd x0;       ///< current (uniform) portfolio
  Eigen::Vector3d bounds;   ///< b_j = (1 - zeta_j) C^j x0
};

/// Synthetic returns: Gaussian with a high-volatility, negative-drift second
/// chunk. Carbon indexes are resampled until some single-asset portfolio
/// satisfies every bound.
PortfolioData gen_portfolio_data(const PortfolioProblemConfig& cfg);

/// Reads a days x assets CSV of returns. An optional non-numeric header line
/// is skipped. Throws Error(Ingestion) naming the offending row and column.
Eigen::MatrixXd read_returns_csv(const std::filesystem::path& path);

/// n = 5 resolvents (turnover, simplex, three halfspaces) and one forward per
/// chunk: x -> 2 S_i x - r / chunks with S_i the chunk covariance divided by
/// the chunk count, beta_i = 2 ||S_i||_2.
ProblemSpec gen_portfolio_problem(const PortfolioProblemConfig& cfg);
ProblemSpec portfolio_problem_from_data(const PortfolioData& data,
                                        const PortfolioProblemConfig& cfg);

}  // namespace fsplit
