#include "fsplit/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fsplit/error.hpp"
#include "fsplit/ops.hpp"

namespace fsplit {
namespace {

using Mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Removes the per-column (H) / per-row (K) mean over the allowed support, i.e.
// projects onto the tangent space of {H^T 1 = 0, K 1 = 0} with the supports.
void project_tangent(Eigen::MatrixXd& dH, Eigen::MatrixXd& dK, const Mask& h_mask,
                     const Mask& k_mask) {
  for (Eigen::Index j = 0; j < dH.cols(); ++j) {
    double sum = 0.0;
    int count = 0;
    for (Eigen::Index i = 0; i < dH.rows(); ++i) {
      if (h_mask(i, j)) {
        sum += dH(i, j);
        ++count;
      } else {
        dH(i, j) = 0.0;
      }
    }
    for (Eigen::Index i = 0; i < dH.rows(); ++i) {
      if (h_mask(i, j)) dH(i, j) -= sum / count;
    }
  }
  for (Eigen::Index j = 0; j < dK.rows(); ++j) {
    double sum = 0.0;
    int count = 0;
    for (Eigen::Index i = 0; i < dK.cols(); ++i) {
      if (k_mask(j, i)) {
        sum += dK(j, i);
        ++count;
      } else {
        dK(j, i) = 0.0;
      }
    }
    for (Eigen::Index i = 0; i < dK.cols(); ++i) {
      if (k_mask(j, i)) dK(j, i) -= sum / count;
    }
  }
}

// Restores the exact unit sums lost to rounding.
void renormalize(Eigen::MatrixXd& H, Eigen::MatrixXd& K, const Mask& h_mask,
                 const Mask& k_mask) {
  for (Eigen::Index j = 0; j < H.cols(); ++j) {
    const int count = static_cast<int>(h_mask.col(j).count());
    const double shift = (1.0 - H.col(j).sum()) / count;
    for (Eigen::Index i = 0; i < H.rows(); ++i) {
      if (h_mask(i, j)) H(i, j) += shift;
    }
  }
  for (Eigen::Index j = 0; j < K.rows(); ++j) {
    const int count = static_cast<int>(k_mask.row(j).count());
    const double shift = (1.0 - K.row(j).sum()) / count;
    for (Eigen::Index i = 0; i < K.cols(); ++i) {
      if (k_mask(j, i)) K(j, i) += shift;
    }
  }
}

}  // namespace

Eigen::MatrixXd heuristic_laplacian(int n) { return full_laplacian(n); }

HKOptimizationResult optimize_HK(const NondecreasingVector& F,
                                 const Eigen::VectorXd& beta, int budget) {
  const int n = F.n();
  const int m = F.m();
  if (beta.size() != m || (beta.array() < 0.0).any()) {
    throw Error(ErrorKind::InvalidParameters,
                "optimize_HK: beta must have m nonnegative entries");
  }
  HKOptimizationResult result;
  result.H = Eigen::MatrixXd::Zero(n, m);
  result.K = Eigen::MatrixXd::Zero(m, n);
  if (m == 0) {
    result.converged = true;
    return result;
  }

  Mask h_mask(n, m), k_mask(m, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      h_mask(i, j) = F.forward_before(j, i);
      k_mask(j, i) = !F.forward_before(j, i);
    }
  }
  for (int j = 0; j < m; ++j) {
    if (h_mask.col(j).count() == 0 || k_mask.row(j).count() == 0) {
      throw Error(ErrorKind::NotCausal,
                  "optimize_HK: empty allowed support for forward " +
                      std::to_string(j + 1));
    }
  }

  Eigen::MatrixXd H = h_mask.cast<double>();
  Eigen::MatrixXd K = k_mask.cast<double>();
  for (int j = 0; j < m; ++j) {
    H.col(j) /= H.col(j).sum();
    K.row(j) /= K.row(j).sum();
  }

  const Eigen::VectorXd sqrt_beta = beta.cwiseSqrt();
  auto objective_and_subgradient = [&](Eigen::MatrixXd& gH, Eigen::MatrixXd& gK) {
    const Eigen::MatrixXd B = sqrt_beta.asDiagonal() * (K - H.transpose());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::MatrixXd gD = sqrt_beta.asDiagonal() * svd.matrixU().col(0) *
                               svd.matrixV().col(0).transpose();
    gK = gD;
    gH = -gD.transpose();
    project_tangent(gH, gK, h_mask, k_mask);
    return svd.singularValues()(0);
  };

  Eigen::MatrixXd gH, gK;
  const double f0 = objective_and_subgradient(gH, gK);
  double best = f0;
  Eigen::MatrixXd best_H = H, best_K = K;
  int last_improvement = 0;
  int it = 0;
  for (; it < budget; ++it) {
    const double f = it == 0 ? f0 : objective_and_subgradient(gH, gK);
    if (f < best) {
      if (f < best * (1.0 - 1e-9)) last_improvement = it;
      best = f;
      best_H = H;
      best_K = K;
    }
    const double g2 = gH.squaredNorm() + gK.squaredNorm();
    if (g2 <= 1e-24 * std::max(1.0, f * f)) {
      result.converged = true;
      break;
    }
    if (it - last_improvement > 100) {
      result.converged = true;
      break;
    }
    // Polyak step towards a target slightly below the best value so far.
    const double slack = 0.05 * f0 / std::sqrt(double(it + 1));
    const double step = (f - best + slack) / g2;
    H -= step * gH;
    K -= step * gK;
  }
  renormalize(best_H, best_K, h_mask, k_mask);
  result.H = std::move(best_H);
  result.K = std::move(best_K);
  result.iterations_used = it;
  result.objective =
      spectral_norm(Eigen::MatrixXd(sqrt_beta.asDiagonal() * (result.K - result.H.transpose())));
  return result;
}

SplittingParams sfb_plus_params(const NondecreasingVector& F,
                                const Eigen::VectorXd& beta, double theta,
                                int budget) {
  const int n = F.n();
  const HKOptimizationResult hk = optimize_HK(F, beta, budget);
  std::optional<CausalPair> causal;
  if (F.m() > 0) causal = CausalPair{hk.H, hk.K, F};
  return assemble_lifted(heuristic_laplacian(n), Eigen::MatrixXd::Zero(n, 0), causal,
                         beta, theta);
}

}  // namespace fsplit
