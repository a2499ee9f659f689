#pragma once

// Matrix parameterization of the splitting family.
//
// A parameter set is a point (M, P, H, K, theta) together with the derived
// quantities
//   W = ½ (H - K^T) diag(beta) (H^T - K),
//   S = M M^T + P P^T + W,
//   gamma = 2 / diag(S),  L = -strictly_lower(S),
// so that 2 Gamma^{-1} - L - L^T = S. Parameter sets may also be given
// directly in operator form (M, gamma, L, H, K); validate_params then
// certifies the four nonexpansiveness / fixed-point-encoding conditions.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fsplit/causal.hpp"
#include "fsplit/graph.hpp"

namespace fsplit {

inline constexpr double kDefaultTheta = 0.9;

struct SplittingParams {
  Eigen::MatrixXd M;          ///< n x (n-1); columns orthogonal to 1.
  Eigen::MatrixXd laplacian;  ///< M M^T, kept exact when supplied directly.
  Eigen::MatrixXd P;          ///< n x p, p may be 0.
  Eigen::MatrixXd p_gram;     ///< P P^T (or the residual S - MM^T - W).
  std::optional<CausalPair> causal;  ///< absent iff m = 0.
  Eigen::VectorXd beta;
  double theta = kDefaultTheta;

  Eigen::MatrixXd W;
  Eigen::MatrixXd S;
  Eigen::VectorXd gamma;
  Eigen::MatrixXd L;
  bool operator_form = false;  ///< gamma and L were given, not derived from S.

  int n() const { return static_cast<int>(gamma.size()); }
  int m() const { return static_cast<int>(beta.size()); }
  /// H and K, or empty n x 0 / 0 x n matrices when m = 0.
  Eigen::MatrixXd H() const;
  Eigen::MatrixXd K() const;
};

/// ½ (H - K^T) diag(beta) (H^T - K); the zero n x n matrix when m = 0.
Eigen::MatrixXd forward_coupling(const std::optional<CausalPair>& causal,
                                 const Eigen::VectorXd& beta, int n);

/// Builds parameters from factors M and P. Throws InvalidM, DegenerateRow,
/// NotCausal or InvalidParameters.
SplittingParams assemble(const Eigen::MatrixXd& M, const Eigen::MatrixXd& P,
                         const std::optional<CausalPair>& causal,
                         const Eigen::VectorXd& beta, double theta);

/// Same as assemble, but the coupling is supplied as the laplacian M M^T
/// (the factor M is recovered by laplacian_factor for the minimal form).
/// `p_gram`, when given, must equal P P^T and replaces it in S exactly.
SplittingParams assemble_lifted(const Eigen::MatrixXd& laplacian,
                                const Eigen::MatrixXd& P,
                                const std::optional<CausalPair>& causal,
                                const Eigen::VectorXd& beta, double theta,
                                const std::optional<Eigen::MatrixXd>& p_gram = {});

/// Lowest-level constructor: both the factors and their Gram matrices are
/// supplied (laplacian = M M^T, p_gram = P P^T). Used to rebuild parameters
/// bit-exactly from serialized form.
SplittingParams assemble_with_grams(const Eigen::MatrixXd& M,
                                    const Eigen::MatrixXd& laplacian,
                                    const Eigen::MatrixXd& P,
                                    const Eigen::MatrixXd& p_gram,
                                    const std::optional<CausalPair>& causal,
                                    const Eigen::VectorXd& beta, double theta);

/// Operator form: stores the given M, gamma and L without any check.
SplittingParams from_operator_form(const Eigen::MatrixXd& M,
                                   const Eigen::VectorXd& gamma,
                                   const Eigen::MatrixXd& L,
                                   const std::optional<CausalPair>& causal,
                                   const Eigen::VectorXd& beta, double theta);

/// P with P P^T = S_target - M M^T - W and P^T 1 = 0.
/// Throws NotRepresentable when the residual is indefinite.
Eigen::MatrixXd factor_P(const Eigen::MatrixXd& S_target,
                         const Eigen::MatrixXd& M, const Eigen::MatrixXd& W);

/// Factor of a PSD matrix G with G 1 = 0: returns F (n x r) with F F^T = G,
/// F^T 1 = 0, keeping only the r numerically positive eigenvalues.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& G);

/// M (n x (n-1)) with M M^T = laplacian and M^T 1 = 0. Throws InvalidM unless
/// the laplacian is PSD with null space span(1).
Eigen::MatrixXd laplacian_factor(const Eigen::MatrixXd& laplacian);

/// Centered uniform sample (I - 11^T/n) M_hat with full column rank.
Eigen::MatrixXd random_M(int n, Interval range, std::uint64_t seed);

/// Centered uniform sample with `cols` columns; no rank requirement.
Eigen::MatrixXd random_P(int n, int cols, Interval range, std::uint64_t seed);

struct ValidationTolerances {
  double null_space = 1e-9;
  double row_sum = 1e-9;
  double psd = 1e-8;
  double rank = 1e-9;
};

struct ValidationReport {
  bool null_space_ok = false;       ///< (i) Null(M^T) = span(1)
  bool lower_triangular_ok = false; ///< (ii) L strictly lower, 1^T(G^-1 - L)1 = 0
  bool causal_ok = false;           ///< (iii) causal pair with unit sums
  bool psd_ok = false;              ///< (iv) LMI
  bool theta_ok = false;
  double lmi_min_eigenvalue = 0.0;
  double lmi_scale = 0.0;
  double rank_ratio = 0.0;  ///< sigma_{n-1}(M) / sigma_1(M)
  /// ||M^T 1||, ||P^T 1||, |1^T (Gamma^{-1} - L) 1|
  std::vector<double> null_space_residuals;
  /// max |H^T 1 - 1|, max |K 1 - 1|
  std::vector<double> row_sum_residuals;

  bool passed() const {
    return null_space_ok && lower_triangular_ok && causal_ok && psd_ok && theta_ok;
  }
};

/// lambda_min of 2 Gamma^{-1} - L - L^T - M M^T - W.
double lmi_min_eigenvalue(const SplittingParams& params);

ValidationReport validate_params(const SplittingParams& params,
                                 const ValidationTolerances& tol = {});

}  // namespace fsplit
