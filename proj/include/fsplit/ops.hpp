#pragma once

// Closed-form proximal, projection and gradient building blocks over R^d,
// plus the few dense linear-algebra helpers shared by the rest of the library.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "fsplit/error.hpp"

namespace fsplit {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Proximity operator of g(x) = ||x - xi|| with step tau.
template <typename DerivedXi, typename DerivedV>
typename DerivedV::PlainObject prox_norm_offset(
    const Eigen::MatrixBase<DerivedXi>& xi,
    typename DerivedV::Scalar tau,
    const Eigen::MatrixBase<DerivedV>& v) {
  using Scalar = typename DerivedV::Scalar;
  typename DerivedV::PlainObject diff = v - xi;
  const Scalar dist = diff.norm();
  if (dist <= tau) return xi;
  return v - (tau / dist) * diff;
}

/// Proximity operator of tau * ||x - x0||_1 (shifted soft-thresholding).
template <typename DerivedX0, typename DerivedV>
typename DerivedV::PlainObject soft_threshold_offset(
    const Eigen::MatrixBase<DerivedX0>& x0,
    typename DerivedV::Scalar tau,
    const Eigen::MatrixBase<DerivedV>& v) {
  using Scalar = typename DerivedV::Scalar;
  const auto diff = (v - x0).array();
  return x0 + (diff.sign() * (diff.abs() - tau).max(Scalar(0))).matrix();
}

/// Euclidean projection onto the unit simplex {p >= 0, sum p = 1}.
/// Sort-then-threshold, O(d log d).
template <typename Derived>
typename Derived::PlainObject project_simplex(
    const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index d = v.size();
  if (d == 0) {
    throw Error(ErrorKind::InvalidParameters, "project_simplex: empty vector");
  }
  const typename Derived::PlainObject values = v;
  std::vector<Scalar> sorted(values.data(), values.data() + d);
  std::sort(sorted.begin(), sorted.end(), std::greater<Scalar>());
  Scalar cumsum = 0;
  Scalar shift = 0;
  for (Eigen::Index j = 0; j < d; ++j) {
    cumsum += sorted[j];
    const Scalar candidate = (cumsum - Scalar(1)) / Scalar(j + 1);
    if (sorted[j] - candidate > Scalar(0)) shift = candidate;
  }
  return (values.array() - shift).max(Scalar(0)).matrix();
}

/// Projection onto the halfspace {x : <c, x> <= b}.
template <typename DerivedC, typename DerivedV>
typename DerivedV::PlainObject project_halfspace(
    const Eigen::MatrixBase<DerivedC>& c,
    typename DerivedV::Scalar b,
    const Eigen::MatrixBase<DerivedV>& v) {
  using Scalar = typename DerivedV::Scalar;
  const Scalar c2 = c.squaredNorm();
  if (!(c2 > Scalar(0))) {
    throw Error(ErrorKind::InvalidParameters,
                "project_halfspace: normal vector must be nonzero");
  }
  const Scalar excess = c.dot(v) - b;
  if (excess <= Scalar(0)) return v;
  return v - (excess / c2) * c;
}

/// Value and derivative of the scalar Huber-like function h_{delta1,delta2}:
/// 0 on |z| <= delta1, quadratic ½(|z|-delta1)^2 up to delta2, linear beyond.
template <typename Scalar>
std::pair<Scalar, Scalar> huber_value_grad(Scalar delta1, Scalar delta2,
                                           Scalar z) {
  if (delta1 < Scalar(0) || delta1 > delta2) {
    throw Error(ErrorKind::InvalidParameters,
                "huber: requires 0 <= delta1 <= delta2");
  }
  const Scalar a = std::abs(z);
  const Scalar sgn = z > 0 ? Scalar(1) : (z < 0 ? Scalar(-1) : Scalar(0));
  if (a <= delta1) return {Scalar(0), Scalar(0)};
  if (a <= delta2) {
    const Scalar t = a - delta1;
    return {Scalar(0.5) * t * t, sgn * t};
  }
  return {(delta2 - delta1) * a - Scalar(0.5) * (delta2 * delta2 - delta1 * delta1),
          sgn * (delta2 - delta1)};
}

namespace detail {
inline constexpr int kPowerIterationCap = 10000;
inline constexpr double kPowerIterationRelTol = 1e-12;
}  // namespace detail

/// Largest singular value by power iteration on A^T A.
///
/// The start vector is all-ones with a small index-dependent perturbation so
/// that it is never exactly orthogonal to a dominant singular vector of the
/// matrices that occur here (e.g. laplacians, whose top eigenvectors are
/// orthogonal to the all-ones vector). Stops when successive Rayleigh
/// quotients agree to 1e-12 relative or after 10 000 iterations.
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index cols = A.cols();
  if (A.rows() == 0 || cols == 0) return Scalar(0);
  VectorX<Scalar> v(cols);
  for (Eigen::Index i = 0; i < cols; ++i) {
    v(i) = Scalar(1) + Scalar(1e-3) * std::sin(Scalar(1.7) * Scalar(i + 1));
  }
  v.normalize();
  const MatrixX<Scalar> ata = A.transpose() * A;
  Scalar rayleigh = v.dot(ata * v);
  for (int it = 0; it < detail::kPowerIterationCap; ++it) {
    VectorX<Scalar> next = ata * v;
    const Scalar nrm = next.norm();
    if (nrm == Scalar(0)) return Scalar(0);
    v = next / nrm;
    const Scalar updated = v.dot(ata * v);
    const bool done = std::abs(updated - rayleigh) <=
                      Scalar(detail::kPowerIterationRelTol) * std::abs(updated);
    rayleigh = updated;
    if (done) break;
  }
  return std::sqrt(std::max(rayleigh, Scalar(0)));
}

/// Mean squared deviation of the rows of X (one point per row) from their
/// average.
template <typename Derived>
typename Derived::Scalar variance(const Eigen::MatrixBase<Derived>& X) {
  using Scalar = typename Derived::Scalar;
  if (X.rows() == 0) {
    throw Error(ErrorKind::InvalidParameters, "variance: no points");
  }
  const auto mean = X.colwise().mean();
  return (X.rowwise() - mean).squaredNorm() / Scalar(X.rows());
}

/// Laplacian of the complete graph, n I - 1 1^T.
template <typename Scalar = double>
MatrixX<Scalar> full_laplacian(Eigen::Index n) {
  if (n < 2) {
    throw Error(ErrorKind::InvalidParameters, "full_laplacian: n must be >= 2");
  }
  return Scalar(n) * MatrixX<Scalar>::Identity(n, n) -
         MatrixX<Scalar>::Ones(n, n);
}

/// Centering projector I - (1/n) 1 1^T applied on the left.
template <typename Derived>
typename Derived::PlainObject center_columns(
    const Eigen::MatrixBase<Derived>& A) {
  return A.rowwise() - A.colwise().mean();
}

}  // namespace fsplit
