#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fsplit {

/// An element of H = R^d.
using Point = Eigen::VectorXd;

/// Stack of points, one per row (x in H^n, z in H^(n-1), u in H^m).
using Blocks = Eigen::MatrixXd;

/// Evaluates J_{step A} for a maximal monotone A.
struct ResolventOracle {
  std::function<Point(double step, const Point& input)> evaluate;
  std::string label;
};

/// A (1/beta)-cocoercive single-valued operator. beta = 0 is only meaningful
/// for constant operators.
struct ForwardOracle {
  std::function<Point(const Point& input)> evaluate;
  double beta = 0.0;
  std::string label;
};

/// 0 in sum_i A_i(x) + sum_j C_j(x) over R^d.
class ProblemSpec {
 public:
  ProblemSpec(Eigen::Index dimension, std::vector<ResolventOracle> resolvents,
              std::vector<ForwardOracle> forwards,
              std::function<double(const Point&)> objective = {});

  Eigen::Index dimension() const { return dimension_; }
  Eigen::Index n() const { return static_cast<Eigen::Index>(resolvents_.size()); }
  Eigen::Index m() const { return static_cast<Eigen::Index>(forwards_.size()); }

  const std::vector<ResolventOracle>& resolvents() const { return resolvents_; }
  const std::vector<ForwardOracle>& forwards() const { return forwards_; }

  /// Cocoercivity constants of the forward oracles.
  Eigen::VectorXd beta() const;

  bool has_objective() const { return static_cast<bool>(objective_); }
  double objective(const Point& x) const { return objective_(x); }
  const std::function<double(const Point&)>& objective_fn() const {
    return objective_;
  }

  /// Same operators with the forward oracles replaced.
  ProblemSpec with_forwards(std::vector<ForwardOracle> forwards) const;

 private:
  Eigen::Index dimension_;
  std::vector<ResolventOracle> resolvents_;
  std::vector<ForwardOracle> forwards_;
  std::function<double(const Point&)> objective_;
};

}  // namespace fsplit
