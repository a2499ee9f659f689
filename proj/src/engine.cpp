#include "fsplit/engine.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <string>

#include "fsplit/error.hpp"
#include "fsplit/ops.hpp"

namespace fsplit {
namespace {

void check_compatible(const SplittingParams& params, const ProblemSpec& problem) {
  if (params.n() != problem.n() || params.m() != problem.m()) {
    throw Error(ErrorKind::InvalidParameters,
                "parameters are for n = " + std::to_string(params.n()) +
                    ", m = " + std::to_string(params.m()) + " but the problem has n = " +
                    std::to_string(problem.n()) + ", m = " + std::to_string(problem.m()));
  }
  for (int j = 0; j < params.m(); ++j) {
    const double declared = problem.forwards()[static_cast<std::size_t>(j)].beta;
    if (params.beta(j) < declared * (1.0 - 1e-12)) {
      throw Error(ErrorKind::InvalidParameters,
                  "parameter beta_" + std::to_string(j + 1) +
                      " is below the oracle's cocoercivity constant");
    }
  }
}

Point checked(Point value, Eigen::Index d, const char* kind, int index) {
  if (value.size() != d || !value.allFinite()) {
    throw Error(ErrorKind::OracleFailure,
                std::string(kind) + " oracle " + std::to_string(index + 1) +
                    " returned a malformed point");
  }
  return value;
}

// Triangular sweep: resolvent i sees x_h for h < i and the forward outputs
// scheduled before it. `coupling` is M z (or w in lifted form).
Evaluation sweep(const SplittingParams& params, const ProblemSpec& problem,
                 const Blocks& coupling) {
  const int n = params.n();
  const int m = params.m();
  const Eigen::Index d = problem.dimension();
  Evaluation eval;
  eval.x = Blocks::Zero(n, d);
  eval.u = Blocks::Zero(m, d);
  eval.resolvent_inputs = Blocks::Zero(n, d);

  int evaluated = 0;
  for (int i = 0; i < n; ++i) {
    if (m > 0) {
      const auto& causal = *params.causal;
      // Each C_j is evaluated once, right before the first resolvent that
      // may use it; its input only involves x_h with h < i.
      for (; evaluated < causal.F[i]; ++evaluated) {
        const int j = evaluated;
        const Point input = (causal.K.row(j).head(i) * eval.x.topRows(i)).transpose();
        try {
          eval.u.row(j) =
              checked(problem.forwards()[static_cast<std::size_t>(j)].evaluate(input), d,
                      "forward", j)
                  .transpose();
        } catch (const Error&) {
          throw;
        } catch (const std::exception& e) {
          throw Error(ErrorKind::OracleFailure,
                      "forward oracle " + std::to_string(j + 1) + ": " + e.what());
        }
      }
    }
    Point input = coupling.row(i).transpose();
    if (i > 0) input += (params.L.row(i).head(i) * eval.x.topRows(i)).transpose();
    if (evaluated > 0) {
      input -= (params.causal->H.row(i).head(evaluated) * eval.u.topRows(evaluated))
                   .transpose();
    }
    input *= params.gamma(i);
    eval.resolvent_inputs.row(i) = input.transpose();
    try {
      eval.x.row(i) =
          checked(problem.resolvents()[static_cast<std::size_t>(i)].evaluate(
                      params.gamma(i), input),
                  d, "resolvent", i)
              .transpose();
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(ErrorKind::OracleFailure,
                  "resolvent oracle " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  if (evaluated != m) {
    throw Error(ErrorKind::NotCausal, "schedule left forward oracles unevaluated");
  }
  return eval;
}

// ||M^T x|| = sqrt(<x, M M^T x>), evaluated on centered blocks so that it
// stays accurate far below the round-off level of the quadratic form.
double coupling_residual(const SplittingParams& params, const Blocks& x) {
  return (params.M.transpose() * center_columns(x)).norm();
}

template <typename Step, typename Residual>
RunReport iterate(const ProblemSpec& problem, Blocks state, const RunOptions& options, Step step,
                  Residual residual) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.records.reserve(static_cast<std::size_t>(std::max(0, options.max_iters)));
  double first = 0.0;
  for (int k = 1; k <= options.max_iters; ++k) {
    Evaluation eval = step(state);
    IterationRecord rec;
    rec.iter = k;
    rec.fp_residual = residual(eval);
    rec.variance = variance(eval.x);
    if (problem.has_objective()) rec.objective = problem.objective(extract_solution(eval.x));
    if (options.record_timing) {
      rec.elapsed_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    }
    if (k == 1) first = rec.fp_residual;
    if (!std::isfinite(rec.fp_residual) ||
        (first > 0.0 && rec.fp_residual > options.divergence_factor * first)) {
      throw Error(ErrorKind::Divergence,
                  "fixed-point residual diverged at iteration " + std::to_string(k));
    }
    state = eval.next;
    report.records.push_back(rec);
    if (options.on_iterate) options.on_iterate(k, eval);
    report.last = std::move(eval);
    if (rec.fp_residual <= options.stop_abs ||
        rec.fp_residual <= options.stop_rel * first) {
      report.reason = Termination::Converged;
      break;
    }
  }
  if (report.records.empty()) {
    report.last.next = state;
  }
  report.consensus = report.records.empty() ? Point::Zero(problem.dimension())
                                            : extract_solution(report.last.x);
  return report;
}

}  // namespace

Evaluation evaluate_T(const SplittingParams& params, const ProblemSpec& problem,
                      const Blocks& z) {
  check_compatible(params, problem);
  if (z.rows() != params.n() - 1 || z.cols() != problem.dimension()) {
    throw Error(ErrorKind::InvalidInitialization, "z must be (n-1) x d");
  }
  Evaluation eval = sweep(params, problem, params.M * z);
  eval.next = z - params.theta * (params.M.transpose() * eval.x);
  return eval;
}

Evaluation evaluate_lifted(const SplittingParams& params,
                           const ProblemSpec& problem, const Blocks& w) {
  check_compatible(params, problem);
  if (w.rows() != params.n() || w.cols() != problem.dimension()) {
    throw Error(ErrorKind::InvalidInitialization, "w must be n x d");
  }
  Evaluation eval = sweep(params, problem, w);
  eval.next = w - params.theta * (params.laplacian * eval.x);
  return eval;
}

Point extract_solution(const Blocks& x) { return x.colwise().mean().transpose(); }

FixedPointDiagnostics fixed_point_diagnostics(const SplittingParams& params,
                                              const Evaluation& eval) {
  FixedPointDiagnostics diag;
  const Eigen::RowVectorXd mean = eval.x.colwise().mean();
  diag.max_consensus_deviation = (eval.x.rowwise() - mean).rowwise().norm().maxCoeff();
  const Blocks a = params.gamma.cwiseInverse().asDiagonal() *
                   (eval.resolvent_inputs - eval.x);
  diag.inclusion_residual = (a.colwise().sum() + eval.u.colwise().sum()).norm();
  return diag;
}

RunReport run(const SplittingParams& params, const ProblemSpec& problem,
              const std::optional<Blocks>& z0, const RunOptions& options) {
  check_compatible(params, problem);
  const Blocks z = z0 ? *z0 : Blocks::Zero(params.n() - 1, problem.dimension());
  if (z.rows() != params.n() - 1 || z.cols() != problem.dimension()) {
    throw Error(ErrorKind::InvalidInitialization, "z0 must be (n-1) x d");
  }
  return iterate(
      problem, z, options,
      [&](const Blocks& state) {
        Evaluation eval = sweep(params, problem, params.M * state);
        eval.next = state - params.theta * (params.M.transpose() * eval.x);
        return eval;
      },
      [&](const Evaluation& eval) { return coupling_residual(params, eval.x); });
}

RunReport run_lifted(const SplittingParams& params, const ProblemSpec& problem,
                     const std::optional<Blocks>& w0, const RunOptions& options) {
  check_compatible(params, problem);
  const Blocks w = w0 ? *w0 : Blocks::Zero(params.n(), problem.dimension());
  if (w.rows() != params.n() || w.cols() != problem.dimension()) {
    throw Error(ErrorKind::InvalidInitialization, "w0 must be n x d");
  }
  const double scale = std::max(1.0, w.rowwise().norm().maxCoeff());
  if (w.colwise().sum().norm() > 1e-10 * scale) {
    throw Error(ErrorKind::InvalidInitialization,
                "lifted initialization must satisfy sum_i w0_i = 0");
  }
  return iterate(
      problem, w, options,
      [&](const Blocks& state) {
        Evaluation eval = sweep(params, problem, state);
        eval.next = state - params.theta * (params.laplacian * eval.x);
        return eval;
      },
      [&](const Evaluation& eval) { return coupling_residual(params, eval.x); });
}

RunReport run_lifted(const Eigen::MatrixXd& laplacian,
                     const std::optional<CausalPair>& causal,
                     const Eigen::VectorXd& beta, double theta,
                     const ProblemSpec& problem, const std::optional<Blocks>& w0,
                     const RunOptions& options) {
  const SplittingParams params = assemble_lifted(
      laplacian, Eigen::MatrixXd::Zero(laplacian.rows(), 0), causal, beta, theta);
  return run_lifted(params, problem, w0, options);
}

void write_run_csv(const RunReport& report, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "iter,fp_residual,variance,objective,elapsed_ms\n";
  for (const auto& rec : report.records) {
    out << rec.iter << ',' << rec.fp_residual << ',' << rec.variance << ',';
    if (rec.objective) out << *rec.objective;
    out << ',';
    if (rec.elapsed_ms) out << *rec.elapsed_ms;
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace fsplit
