#pragma once

// Causal routing of forward evaluations (schedule vector F, staircase
// supports of H and K^T).

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace fsplit {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// True iff F has length n, F_1 = 0, F_n = m and is nondecreasing.
/// Entries count forward evaluations scheduled before each resolvent.
bool check_F(const std::vector<int>& F, int n, int m);

/// An (m,n)-nondecreasing vector. Construction validates.
class NondecreasingVector {
 public:
  NondecreasingVector() = default;
  NondecreasingVector(std::vector<int> entries, int m);

  int n() const { return static_cast<int>(entries_.size()); }
  int m() const { return m_; }
  int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& entries() const { return entries_; }

  /// Forward j (0-based) may feed resolvent i iff j < F_i.
  bool forward_before(int j, int i) const { return j < (*this)[i]; }

  friend bool operator==(const NondecreasingVector&,
                         const NondecreasingVector&) = default;

 private:
  std::vector<int> entries_;
  int m_ = 0;
};

/// H (n x m) routes forward outputs into resolvent inputs, K (m x n) forms
/// forward inputs from resolvent outputs.
struct CausalPair {
  Eigen::MatrixXd H;
  Eigen::MatrixXd K;
  NondecreasingVector F;

  int n() const { return static_cast<int>(H.rows()); }
  int m() const { return static_cast<int>(H.cols()); }
};

/// Support check: H in S(F) and K^T in S^c(F). Throws on shape mismatch.
bool is_causal_pair(const Eigen::MatrixXd& H, const Eigen::MatrixXd& K,
                    const NondecreasingVector& F);

/// Smallest schedule consistent with the supports of H and K.
/// Throws Error(NotCausal) when no schedule exists.
NondecreasingVector infer_F(const Eigen::MatrixXd& H, const Eigen::MatrixXd& K);

/// F_i = floor(m (i-1) / (n-1)): forwards spread evenly along the sweep.
NondecreasingVector even_F(int n, int m);

/// Random schedule with F_1 = 0, F_n = m and sorted uniform interior entries.
NondecreasingVector random_F(int n, int m, std::uint64_t seed);

/// Uniform entries on the allowed supports, normalized so that
/// H^T 1 = K 1 = 1.
CausalPair random_causal_pair(const NondecreasingVector& F, Interval h_range,
                              Interval k_range, std::uint64_t seed);

}  // namespace fsplit
