#include "fsplit/problem.hpp"

#include "fsplit/error.hpp"

namespace fsplit {

ProblemSpec::ProblemSpec(Eigen::Index dimension,
                         std::vector<ResolventOracle> resolvents,
                         std::vector<ForwardOracle> forwards,
                         std::function<double(const Point&)> objective)
    : dimension_(dimension),
      resolvents_(std::move(resolvents)),
      forwards_(std::move(forwards)),
      objective_(std::move(objective)) {
  if (dimension_ < 1) {
    throw Error(ErrorKind::InvalidParameters, "problem dimension must be >= 1");
  }
  if (resolvents_.size() < 2) {
    throw Error(ErrorKind::InvalidParameters,
                "problem needs at least two resolvent oracles");
  }
  for (const auto& r : resolvents_) {
    if (!r.evaluate) {
      throw Error(ErrorKind::InvalidParameters, "empty resolvent oracle");
    }
  }
  for (const auto& f : forwards_) {
    if (!f.evaluate || !(f.beta >= 0.0)) {
      throw Error(ErrorKind::InvalidParameters,
                  "forward oracle needs an evaluator and beta >= 0");
    }
  }
}

Eigen::VectorXd ProblemSpec::beta() const {
  Eigen::VectorXd b(m());
  for (Eigen::Index j = 0; j < m(); ++j) b(j) = forwards_[j].beta;
  return b;
}

ProblemSpec ProblemSpec::with_forwards(std::vector<ForwardOracle> forwards) const {
  return ProblemSpec(dimension_, resolvents_, std::move(forwards), objective_);
}

}  // namespace fsplit
