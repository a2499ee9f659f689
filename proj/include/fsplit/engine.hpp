#pragma once

// Evaluation of the splitting operator and the relaxed fixed-point iteration,
// in minimal form (z in H^(n-1)) and lifted form (w = M z in H^n).

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fsplit/params.hpp"
#include "fsplit/problem.hpp"

namespace fsplit {

/// One evaluation of the operator. `next` is z^+ (minimal) or w^+ (lifted).
struct Evaluation {
  Blocks x;                 ///< n x d resolvent outputs
  Blocks u;                 ///< m x d forward outputs
  Blocks resolvent_inputs;  ///< n x d, argument passed to each resolvent
  Blocks next;
};

/// z^+ = z - theta M^T x^+, with x^+ from one triangular sweep.
Evaluation evaluate_T(const SplittingParams& params, const ProblemSpec& problem,
                      const Blocks& z);

/// w^+ = w - theta L x^+ with L = M M^T.
Evaluation evaluate_lifted(const SplittingParams& params,
                           const ProblemSpec& problem, const Blocks& w);

/// Mean of the blocks; equals every block at an exact fixed point.
Point extract_solution(const Blocks& x);

struct FixedPointDiagnostics {
  double max_consensus_deviation = 0.0;  ///< max_i ||x_i - mean||
  double inclusion_residual = 0.0;       ///< ||sum_i a_i + sum_j u_j||
};

/// a_i is recovered from the resolvent identity a_i = (input_i - x_i) / gamma_i.
FixedPointDiagnostics fixed_point_diagnostics(const SplittingParams& params,
                                              const Evaluation& eval);

struct IterationRecord {
  int iter = 0;
  double fp_residual = 0.0;  ///< ||M^T x^{k+1}|| = ||z^{k+1} - z^k|| / theta
  double variance = 0.0;     ///< Var(x^{k+1})
  std::optional<double> objective;
  std::optional<double> elapsed_ms;
};

enum class Termination { MaxIterations, Converged };

struct RunOptions {
  int max_iters = 1000;
  double stop_abs = 0.0;
  double stop_rel = 1e-10;  ///< relative to the first iteration's residual
  double divergence_factor = 1e6;
  bool record_timing = true;
  std::function<void(int iter, const Evaluation&)> on_iterate;
};

struct RunReport {
  std::vector<IterationRecord> records;
  Point consensus;
  Evaluation last;
  Termination reason = Termination::MaxIterations;

  int iterations() const { return static_cast<int>(records.size()); }
};

/// Fixed-point iteration z^{k+1} = T(z^k). z0 defaults to 0.
RunReport run(const SplittingParams& params, const ProblemSpec& problem,
              const std::optional<Blocks>& z0 = {}, const RunOptions& options = {});

/// Lifted iteration. w0 defaults to 0 and must satisfy sum_i w0_i = 0.
RunReport run_lifted(const SplittingParams& params, const ProblemSpec& problem,
                     const std::optional<Blocks>& w0 = {},
                     const RunOptions& options = {});

/// Lifted iteration parameterized directly by the laplacian (P = 0).
RunReport run_lifted(const Eigen::MatrixXd& laplacian,
                     const std::optional<CausalPair>& causal,
                     const Eigen::VectorXd& beta, double theta,
                     const ProblemSpec& problem, const std::optional<Blocks>& w0,
                     const RunOptions& options);

/// Header `iter,fp_residual,variance,objective,elapsed_ms`, one row per record.
void write_run_csv(const RunReport& report, std::ostream& out);

}  // namespace fsplit
