#pragma once

#include <Eigen/Dense>

#include "fsplit/causal.hpp"
#include "fsplit/params.hpp"

namespace fsplit {

/// Coupling choice M M^T = n I - 1 1^T (complete-graph laplacian).
Eigen::MatrixXd heuristic_laplacian(int n);

struct HKOptimizationResult {
  Eigen::MatrixXd H;  ///< n x m
  Eigen::MatrixXd K;  ///< m x n
  double objective = 0.0;  ///< ||sqrt(diag(beta)) (K - H^T)||_2
  int iterations_used = 0;
  bool converged = false;
};

inline constexpr int kDefaultHKBudget = 500;

/// Minimizes ||sqrt(diag(beta)) (K - H^T)||_2 over causal pairs with schedule F
/// and unit row/column sums, by projected subgradient descent from the
/// uniform feasible point. The best iterate is returned.
HKOptimizationResult optimize_HK(const NondecreasingVector& F,
                                 const Eigen::VectorXd& beta,
                                 int budget = kDefaultHKBudget);

/// Complete-graph laplacian, P = 0 and optimized (H, K): the lifted SFB+
/// parameters.
SplittingParams sfb_plus_params(const NondecreasingVector& F,
                                const Eigen::VectorXd& beta,
                                double theta = kDefaultTheta,
                                int budget = kDefaultHKBudget);

}  // namespace fsplit
