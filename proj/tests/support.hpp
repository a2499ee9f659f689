#pragma once

#include <Eigen/Dense>

#include <memory>
#include <random>
#include <vector>

#include "fsplit/problem.hpp"

namespace testing_support {

inline Eigen::MatrixXd uniform_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c,
                                      double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::MatrixXd A(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) A(i, j) = dist(rng);
  return A;
}

inline Eigen::VectorXd uniform_vector(std::mt19937_64& rng, Eigen::Index n, double lo = -1.0,
                                      double hi = 1.0) {
  return uniform_matrix(rng, n, 1, lo, hi);
}

// A(x) = Q x + b with Q = PSD + skew, so A is maximal monotone.
inline fsplit::ResolventOracle affine_monotone(std::mt19937_64& rng, int d) {
  const Eigen::MatrixXd B = uniform_matrix(rng, d, d);
  const Eigen::MatrixXd C = uniform_matrix(rng, d, d);
  const Eigen::MatrixXd Q = 0.5 * B * B.transpose() + (C - C.transpose());
  const Eigen::VectorXd b = uniform_vector(rng, d);
  return {[Q, b](double step, const fsplit::Point& v) -> fsplit::Point {
            const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(Q.rows(), Q.cols()) + step * Q;
            return A.partialPivLu().solve(v - step * b);
          },
          "affine monotone"};
}

// C(x) = G x + c with G symmetric PSD; 1/beta-cocoercive for beta = lambda_max(G).
inline fsplit::ForwardOracle affine_cocoercive(std::mt19937_64& rng, int d) {
  const Eigen::MatrixXd B = uniform_matrix(rng, d, d);
  const Eigen::MatrixXd G = 0.5 * B * B.transpose();
  const Eigen::VectorXd c = uniform_vector(rng, d);
  const double beta = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G).eigenvalues().maxCoeff();
  return {[G, c](const fsplit::Point& x) -> fsplit::Point { return G * x + c; }, beta,
          "affine cocoercive"};
}

inline fsplit::ProblemSpec affine_problem(std::mt19937_64& rng, int n, int m, int d) {
  std::vector<fsplit::ResolventOracle> res;
  std::vector<fsplit::ForwardOracle> fwd;
  for (int i = 0; i < n; ++i) res.push_back(affine_monotone(rng, d));
  for (int j = 0; j < m; ++j) fwd.push_back(affine_cocoercive(rng, d));
  return fsplit::ProblemSpec(d, std::move(res), std::move(fwd));
}

struct CallCounts {
  std::vector<int> resolvent;
  std::vector<int> forward;
};

// Same problem with every oracle wrapped by a call counter.
inline fsplit::ProblemSpec instrument(const fsplit::ProblemSpec& p,
                                      const std::shared_ptr<CallCounts>& counts) {
  counts->resolvent.assign(static_cast<std::size_t>(p.n()), 0);
  counts->forward.assign(static_cast<std::size_t>(p.m()), 0);
  std::vector<fsplit::ResolventOracle> res;
  std::vector<fsplit::ForwardOracle> fwd;
  for (std::size_t i = 0; i < p.resolvents().size(); ++i) {
    auto inner = p.resolvents()[i].evaluate;
    res.push_back({[inner, counts, i](double s, const fsplit::Point& v) {
                     ++counts->resolvent[i];
                     return inner(s, v);
                   },
                   p.resolvents()[i].label});
  }
  for (std::size_t j = 0; j < p.forwards().size(); ++j) {
    auto inner = p.forwards()[j].evaluate;
    fwd.push_back({[inner, counts, j](const fsplit::Point& x) {
                     ++counts->forward[j];
                     return inner(x);
                   },
                   p.forwards()[j].beta, p.forwards()[j].label});
  }
  return fsplit::ProblemSpec(p.dimension(), std::move(res), std::move(fwd), p.objective_fn());
}

// Golden-section minimization of a unimodal function on [lo, hi].
template <typename F>
double golden_min(F f, double lo, double hi, int iters = 200) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  for (int k = 0; k < iters; ++k) {
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  return 0.5 * (a + b);
}

}  // namespace testing_support
