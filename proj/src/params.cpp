#include "fsplit/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "fsplit/error.hpp"
#include "fsplit/ops.hpp"

namespace fsplit {
namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& A) {
  return 0.5 * (A + A.transpose());
}

double max_abs_eigenvalue(const Eigen::VectorXd& eigenvalues) {
  return eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
}

double singular_ratio(const Eigen::MatrixXd& M) {
  if (M.cols() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

void check_M(const Eigen::MatrixXd& M) {
  const auto n = M.rows();
  if (n < 2 || M.cols() != n - 1) {
    throw Error(ErrorKind::InvalidM, "M must be n x (n-1) with n >= 2");
  }
  const double residual = (M.transpose() * Eigen::VectorXd::Ones(n)).norm();
  if (residual > 1e-9 * std::max(1.0, M.norm())) {
    throw Error(ErrorKind::InvalidM, "M^T 1 != 0");
  }
  if (singular_ratio(M) <= 1e-9) {
    throw Error(ErrorKind::InvalidM, "M is rank deficient");
  }
}

Eigen::MatrixXd normalized_P(const Eigen::MatrixXd& P, Eigen::Index n) {
  if (P.size() == 0) return Eigen::MatrixXd::Zero(n, 0);
  if (P.rows() != n) {
    throw Error(ErrorKind::InvalidParameters, "P must have n rows");
  }
  const double residual = (P.transpose() * Eigen::VectorXd::Ones(n)).norm();
  if (residual > 1e-9 * std::max(1.0, P.norm())) {
    throw Error(ErrorKind::InvalidParameters, "P^T 1 != 0");
  }
  return P;
}

std::optional<CausalPair> checked_causal(const std::optional<CausalPair>& causal,
                                         const Eigen::VectorXd& beta,
                                         Eigen::Index n) {
  const auto m = beta.size();
  if ((beta.array() < 0.0).any() || !beta.allFinite()) {
    throw Error(ErrorKind::InvalidParameters, "beta must be finite and >= 0");
  }
  if (m == 0) {
    if (causal && causal->m() != 0) {
      throw Error(ErrorKind::InvalidParameters,
                  "causal pair given with an empty beta vector");
    }
    return std::nullopt;
  }
  if (!causal) {
    throw Error(ErrorKind::NotCausal, "m > 0 requires a causal pair");
  }
  if (causal->n() != n || causal->m() != m || causal->K.rows() != m ||
      causal->K.cols() != n) {
    throw Error(ErrorKind::InvalidParameters,
                "causal pair shape does not match n and m");
  }
  if (!is_causal_pair(causal->H, causal->K, causal->F)) {
    throw Error(ErrorKind::NotCausal, "H, K violate the staircase supports of F");
  }
  const double hsum =
      (causal->H.colwise().sum().array() - 1.0).abs().maxCoeff();
  const double ksum =
      (causal->K.rowwise().sum().array() - 1.0).abs().maxCoeff();
  if (hsum > 1e-9 || ksum > 1e-9) {
    throw Error(ErrorKind::NotCausal, "H^T 1 = K 1 = 1 violated");
  }
  return causal;
}

SplittingParams assemble_gram(const Eigen::MatrixXd& M,
                              const Eigen::MatrixXd& laplacian,
                              const Eigen::MatrixXd& P,
                              const Eigen::MatrixXd& p_gram,
                              const std::optional<CausalPair>& causal,
                              const Eigen::VectorXd& beta, double theta) {
  const auto n = M.rows();
  if (!(theta > 0.0 && theta < 1.0)) {
    throw Error(ErrorKind::InvalidParameters, "theta must lie in (0, 1)");
  }
  SplittingParams p;
  p.M = M;
  p.laplacian = laplacian;
  p.P = P;
  p.p_gram = p_gram;
  p.causal = checked_causal(causal, beta, n);
  p.beta = beta;
  p.theta = theta;
  p.W = forward_coupling(p.causal, beta, static_cast<int>(n));
  p.S = symmetrized(laplacian + p_gram + p.W);
  const Eigen::VectorXd diag = p.S.diagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(diag(i) > 1e-12)) {
      throw Error(ErrorKind::DegenerateRow,
                  "S_ii <= 0 for resolvent " + std::to_string(i + 1) +
                      ": it receives no coupling");
    }
  }
  p.gamma = 2.0 * diag.cwiseInverse();
  p.L = -p.S.triangularView<Eigen::StrictlyLower>().toDenseMatrix();
  const double consistency =
      std::abs(0.5 * diag.sum() - p.L.sum());
  if (consistency > 1e-10 * std::max(1.0, p.S.norm())) {
    throw Error(ErrorKind::InvalidParameters,
                "1^T (Gamma^{-1} - L) 1 != 0: S 1 is not zero");
  }
  return p;
}

}  // namespace

SplittingParams assemble_with_grams(const Eigen::MatrixXd& M,
                                    const Eigen::MatrixXd& laplacian,
                                    const Eigen::MatrixXd& P,
                                    const Eigen::MatrixXd& p_gram,
                                    const std::optional<CausalPair>& causal,
                                    const Eigen::VectorXd& beta, double theta) {
  check_M(M);
  const auto n = M.rows();
  if (laplacian.rows() != n || laplacian.cols() != n || p_gram.rows() != n ||
      p_gram.cols() != n) {
    throw Error(ErrorKind::InvalidParameters, "Gram matrices must be n x n");
  }
  return assemble_gram(M, laplacian, normalized_P(P, n), p_gram, causal, beta,
                       theta);
}

Eigen::MatrixXd SplittingParams::H() const {
  return causal ? causal->H : Eigen::MatrixXd::Zero(n(), 0);
}

Eigen::MatrixXd SplittingParams::K() const {
  return causal ? causal->K : Eigen::MatrixXd::Zero(0, n());
}

Eigen::MatrixXd forward_coupling(const std::optional<CausalPair>& causal,
                                 const Eigen::VectorXd& beta, int n) {
  if (!causal || beta.size() == 0) return Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd D = causal->H - causal->K.transpose();
  return symmetrized(0.5 * D * beta.asDiagonal() * D.transpose());
}

SplittingParams assemble(const Eigen::MatrixXd& M, const Eigen::MatrixXd& P,
                         const std::optional<CausalPair>& causal,
                         const Eigen::VectorXd& beta, double theta) {
  check_M(M);
  const Eigen::MatrixXd Pn = normalized_P(P, M.rows());
  return assemble_gram(M, symmetrized(M * M.transpose()), Pn,
                       symmetrized(Pn * Pn.transpose()), causal, beta, theta);
}

SplittingParams assemble_lifted(const Eigen::MatrixXd& laplacian,
                                const Eigen::MatrixXd& P,
                                const std::optional<CausalPair>& causal,
                                const Eigen::VectorXd& beta, double theta,
                                const std::optional<Eigen::MatrixXd>& p_gram) {
  const Eigen::MatrixXd M = laplacian_factor(laplacian);
  const Eigen::MatrixXd Pn = normalized_P(P, M.rows());
  Eigen::MatrixXd gram = p_gram ? symmetrized(*p_gram)
                                : symmetrized(Pn * Pn.transpose());
  if (gram.rows() != M.rows() || gram.cols() != M.rows()) {
    throw Error(ErrorKind::InvalidParameters, "p_gram must be n x n");
  }
  return assemble_gram(M, symmetrized(laplacian), Pn, gram, causal, beta, theta);
}

SplittingParams from_operator_form(const Eigen::MatrixXd& M,
                                   const Eigen::VectorXd& gamma,
                                   const Eigen::MatrixXd& L,
                                   const std::optional<CausalPair>& causal,
                                   const Eigen::VectorXd& beta, double theta) {
  const auto n = gamma.size();
  if (M.rows() != n || L.rows() != n || L.cols() != n) {
    throw Error(ErrorKind::InvalidParameters, "operator form: shape mismatch");
  }
  SplittingParams p;
  p.M = M;
  p.laplacian = symmetrized(M * M.transpose());
  p.P = Eigen::MatrixXd::Zero(n, 0);
  p.causal = causal;
  p.beta = beta;
  p.theta = theta;
  p.gamma = gamma;
  p.L = L;
  p.W = forward_coupling(causal, beta, static_cast<int>(n));
  p.S = Eigen::MatrixXd(2.0 * gamma.cwiseInverse().asDiagonal()) - L -
        L.transpose();
  p.p_gram = p.S - p.laplacian - p.W;
  p.operator_form = true;
  return p;
}

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& G) {
  const Eigen::Index n = G.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrized(G));
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double cutoff = 1e-12 * std::max(max_abs_eigenvalue(lambda), 1e-300);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (lambda(k) > cutoff) keep.push_back(k);
  }
  Eigen::MatrixXd F(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    F.col(static_cast<Eigen::Index>(c)) =
        eig.eigenvectors().col(keep[c]) * std::sqrt(lambda(keep[c]));
  }
  return center_columns(F);
}

Eigen::MatrixXd factor_P(const Eigen::MatrixXd& S_target,
                         const Eigen::MatrixXd& M, const Eigen::MatrixXd& W) {
  const Eigen::Index n = S_target.rows();
  if (S_target.cols() != n || M.rows() != n || W.rows() != n || W.cols() != n) {
    throw Error(ErrorKind::InvalidParameters, "factor_P: shape mismatch");
  }
  const Eigen::MatrixXd R = symmetrized(S_target - M * M.transpose() - W);
  const double scale = std::max(
      {R.cwiseAbs().maxCoeff(), S_target.cwiseAbs().maxCoeff(), 1e-300});
  if ((R * Eigen::VectorXd::Ones(n)).norm() > 1e-9 * scale * std::sqrt(double(n))) {
    throw Error(ErrorKind::NotRepresentable,
                "factor_P: residual S - MM^T - W does not annihilate 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(R);
  const double lambda_scale = std::max(max_abs_eigenvalue(eig.eigenvalues()),
                                       S_target.norm());
  if (eig.eigenvalues()(0) < -1e-8 * lambda_scale) {
    throw Error(ErrorKind::NotRepresentable,
                "factor_P: S - MM^T - W is indefinite (lambda_min = " +
                    std::to_string(eig.eigenvalues()(0)) + ")");
  }
  // Drop eigenvalues that are rounding noise relative to S itself.
  const double cutoff = 1e-12 * std::max(lambda_scale, 1e-300);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (eig.eigenvalues()(k) > cutoff) keep.push_back(k);
  }
  Eigen::MatrixXd P(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    P.col(static_cast<Eigen::Index>(c)) =
        eig.eigenvectors().col(keep[c]) * std::sqrt(eig.eigenvalues()(keep[c]));
  }
  return center_columns(P);
}

Eigen::MatrixXd laplacian_factor(const Eigen::MatrixXd& laplacian) {
  const Eigen::Index n = laplacian.rows();
  if (n < 2 || laplacian.cols() != n) {
    throw Error(ErrorKind::InvalidM, "laplacian must be square with n >= 2");
  }
  const Eigen::MatrixXd lap = symmetrized(laplacian);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double scale = max_abs_eigenvalue(lambda);
  if (!(scale > 0.0)) throw Error(ErrorKind::InvalidM, "laplacian is zero");
  if ((lap * Eigen::VectorXd::Ones(n)).norm() > 1e-9 * scale * std::sqrt(double(n))) {
    throw Error(ErrorKind::InvalidM, "laplacian does not annihilate 1");
  }
  if (lambda(0) < -1e-8 * scale) {
    throw Error(ErrorKind::InvalidM, "laplacian has a negative eigenvalue");
  }
  if (lambda(1) <= 1e-10 * scale) {
    throw Error(ErrorKind::InvalidM, "laplacian rank is below n - 1");
  }
  Eigen::MatrixXd M = eig.eigenvectors().rightCols(n - 1) *
                      lambda.tail(n - 1).cwiseSqrt().asDiagonal();
  return center_columns(M);
}

Eigen::MatrixXd random_M(int n, Interval range, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorKind::InvalidParameters, "random_M: n must be >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(range.lo, range.hi);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Eigen::MatrixXd Mhat(n, n - 1);
    for (Eigen::Index j = 0; j < Mhat.cols(); ++j) {
      for (Eigen::Index i = 0; i < n; ++i) Mhat(i, j) = u(rng);
    }
    Eigen::MatrixXd M = center_columns(Mhat);
    if (singular_ratio(M) > 1e-8) return M;
  }
  throw Error(ErrorKind::InvalidM, "random_M: could not sample a full-rank M");
}

Eigen::MatrixXd random_P(int n, int cols, Interval range, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(range.lo, range.hi);
  Eigen::MatrixXd Phat(n, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) Phat(i, j) = u(rng);
  }
  return center_columns(Phat);
}

double lmi_min_eigenvalue(const SplittingParams& params) {
  const Eigen::MatrixXd Q = symmetrized(
      Eigen::MatrixXd(2.0 * params.gamma.cwiseInverse().asDiagonal()) - params.L -
      params.L.transpose() - params.M * params.M.transpose() - params.W);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

ValidationReport validate_params(const SplittingParams& params,
                                 const ValidationTolerances& tol) {
  ValidationReport r;
  const auto n = params.gamma.size();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  r.theta_ok = params.theta > 0.0 && params.theta < 1.0;

  // (i)
  const bool shape_ok = n >= 2 && params.M.rows() == n && params.M.cols() == n - 1;
  const double m_residual = shape_ok ? (params.M.transpose() * ones).norm()
                                     : std::numeric_limits<double>::infinity();
  r.rank_ratio = shape_ok ? singular_ratio(params.M) : 0.0;
  r.null_space_ok = shape_ok && r.rank_ratio > tol.rank &&
                    m_residual <= tol.null_space * std::max(1.0, params.M.norm());
  const double p_residual =
      params.P.cols() == 0 ? 0.0 : (params.P.transpose() * ones).norm();

  // (ii)
  bool strictly_lower = params.L.rows() == n && params.L.cols() == n;
  for (Eigen::Index i = 0; strictly_lower && i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      if (params.L(i, j) != 0.0) {
        strictly_lower = false;
        break;
      }
    }
  }
  const Eigen::VectorXd gamma_inv = params.gamma.cwiseInverse();
  const double encoding = std::abs(gamma_inv.sum() - params.L.sum());
  const double encoding_scale =
      std::max(1.0, gamma_inv.norm() + params.L.norm());
  r.lower_triangular_ok = strictly_lower && (params.gamma.array() > 0.0).all() &&
                          encoding <= tol.null_space * encoding_scale;
  r.null_space_residuals = {m_residual, p_residual, encoding};

  // (iii)
  if (params.m() == 0) {
    r.causal_ok = !params.causal || params.causal->m() == 0;
    r.row_sum_residuals = {0.0, 0.0};
  } else if (!params.causal) {
    r.causal_ok = false;
    r.row_sum_residuals = {std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity()};
  } else {
    const auto& c = *params.causal;
    const double hsum = (c.H.colwise().sum().array() - 1.0).abs().maxCoeff();
    const double ksum = (c.K.rowwise().sum().array() - 1.0).abs().maxCoeff();
    r.row_sum_residuals = {hsum, ksum};
    bool supports = false;
    try {
      supports = is_causal_pair(c.H, c.K, c.F);
    } catch (const Error&) {
      supports = false;
    }
    r.causal_ok = supports && hsum <= tol.row_sum && ksum <= tol.row_sum;
  }

  // (iv)
  if (shape_ok && strictly_lower) {
    const Eigen::MatrixXd lhs = symmetrized(
        Eigen::MatrixXd(2.0 * gamma_inv.asDiagonal()) - params.L - params.L.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> lhs_eig(lhs, Eigen::EigenvaluesOnly);
    r.lmi_scale = std::max(1.0, max_abs_eigenvalue(lhs_eig.eigenvalues()));
    r.lmi_min_eigenvalue = lmi_min_eigenvalue(params);
    r.psd_ok = r.lmi_min_eigenvalue >= -tol.psd * r.lmi_scale;
  } else {
    r.lmi_min_eigenvalue = -std::numeric_limits<double>::infinity();
    r.psd_ok = false;
  }
  return r;
}

}  // namespace fsplit
