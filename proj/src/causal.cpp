#include "fsplit/causal.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "fsplit/error.hpp"

namespace fsplit {

bool check_F(const std::vector<int>& F, int n, int m) {
  if (n < 1 || m < 0 || static_cast<int>(F.size()) != n) return false;
  if (F.front() != 0 || F.back() != m) return false;
  for (int i = 0; i + 1 < n; ++i) {
    if (F[i] > F[i + 1]) return false;
  }
  return std::all_of(F.begin(), F.end(),
                     [m](int f) { return f >= 0 && f <= m; });
}

NondecreasingVector::NondecreasingVector(std::vector<int> entries, int m)
    : entries_(std::move(entries)), m_(m) {
  if (!check_F(entries_, static_cast<int>(entries_.size()), m_)) {
    throw Error(ErrorKind::InvalidParameters,
                "F is not an (m,n)-nondecreasing vector");
  }
}

bool is_causal_pair(const Eigen::MatrixXd& H, const Eigen::MatrixXd& K,
                    const NondecreasingVector& F) {
  const auto n = H.rows();
  const auto m = H.cols();
  if (K.rows() != m || K.cols() != n || F.n() != n || F.m() != m) {
    throw Error(ErrorKind::InvalidParameters,
                "is_causal_pair: shape mismatch between H, K and F");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const bool before = F.forward_before(static_cast<int>(j), static_cast<int>(i));
      if (!before && H(i, j) != 0.0) return false;
      if (before && K(j, i) != 0.0) return false;
    }
  }
  return true;
}

NondecreasingVector infer_F(const Eigen::MatrixXd& H, const Eigen::MatrixXd& K) {
  const auto n = static_cast<int>(H.rows());
  const auto m = static_cast<int>(H.cols());
  if (K.rows() != m || K.cols() != n) {
    throw Error(ErrorKind::InvalidParameters, "infer_F: shape mismatch");
  }
  if (n == 0) throw Error(ErrorKind::InvalidParameters, "infer_F: n = 0");
  std::vector<int> lower(n, 0), upper(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (H(i, j) != 0.0) lower[i] = std::max(lower[i], j + 1);
      if (K(j, i) != 0.0) upper[i] = std::min(upper[i], j);
    }
  }
  std::vector<int> F(n);
  int running = 0;
  for (int i = 0; i < n; ++i) {
    running = std::max(running, lower[i]);
    F[i] = running;
  }
  if (F.front() != 0) {
    throw Error(ErrorKind::NotCausal,
                "infer_F: the first resolvent receives a forward output");
  }
  F.back() = m;
  for (int i = 0; i < n; ++i) {
    if (F[i] > upper[i]) {
      throw Error(ErrorKind::NotCausal,
                  "infer_F: no schedule is consistent with the supports (node " +
                      std::to_string(i + 1) + ")");
    }
  }
  return NondecreasingVector(std::move(F), m);
}

NondecreasingVector even_F(int n, int m) {
  if (n < 1 || m < 0 || (n == 1 && m > 0)) {
    throw Error(ErrorKind::InvalidParameters, "even_F: invalid counts");
  }
  std::vector<int> F(n, 0);
  for (int i = 1; i < n; ++i) {
    F[i] = static_cast<int>((static_cast<long long>(m) * i) / (n - 1));
  }
  return NondecreasingVector(std::move(F), m);
}

NondecreasingVector random_F(int n, int m, std::uint64_t seed) {
  if (n < 1 || m < 0 || (n == 1 && m > 0)) {
    throw Error(ErrorKind::InvalidParameters, "random_F: invalid counts");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, m);
  std::vector<int> F(n, 0);
  for (int i = 1; i + 1 < n; ++i) F[i] = pick(rng);
  std::sort(F.begin() + 1, F.end() - 1);
  F.back() = m;
  return NondecreasingVector(std::move(F), m);
}

CausalPair random_causal_pair(const NondecreasingVector& F, Interval h_range,
                              Interval k_range, std::uint64_t seed) {
  const int n = F.n();
  const int m = F.m();
  if (h_range.lo <= 0.0 || k_range.lo <= 0.0 || h_range.hi < h_range.lo ||
      k_range.hi < k_range.lo) {
    throw Error(ErrorKind::InvalidParameters,
                "random_causal_pair: intervals must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uh(h_range.lo, h_range.hi);
  std::uniform_real_distribution<double> uk(k_range.lo, k_range.hi);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, m);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      // Draw both samples unconditionally so the stream does not depend on F.
      const double h = uh(rng);
      const double k = uk(rng);
      if (F.forward_before(j, i)) {
        H(i, j) = h;
      } else {
        K(j, i) = k;
      }
    }
  }
  for (int j = 0; j < m; ++j) {
    const double hs = H.col(j).sum();
    const double ks = K.row(j).sum();
    if (!(hs > 0.0) || !(ks > 0.0)) {
      throw Error(ErrorKind::NotCausal,
                  "random_causal_pair: empty allowed support for forward " +
                      std::to_string(j + 1));
    }
    H.col(j) /= hs;
    K.row(j) /= ks;
  }
  return CausalPair{std::move(H), std::move(K), F};
}

}  // namespace fsplit
