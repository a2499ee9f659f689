#include "fsplit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "fsplit/error.hpp"
#include "fsplit/heuristics.hpp"
#include "fsplit/params_json.hpp"

namespace fsplit {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidParameters, what);
}

// Forward count a preset needs on a problem with n resolvents and m forwards.
int required_m(MethodName name, int n, int m) {
  switch (name) {
    case MethodName::DRS:
    case MethodName::GraphDRS:
      return 0;
    case MethodName::GFB:
    case MethodName::RFB:
    case MethodName::SDY:
      return n - 1;
    default:
      return m;
  }
}

}  // namespace

MethodDescriptor make_method(MethodName name, int n, const Eigen::VectorXd& beta,
                             std::uint64_t seed, double theta) {
  const int m = static_cast<int>(beta.size());
  const double beta_max = m > 0 ? beta.maxCoeff() : 0.0;
  const std::string id(method_id(name));
  switch (name) {
    case MethodName::DY: {
      require(n == 2, id + " needs n = 2");
      const double beta_hat = beta.sum();
      return davis_yin_params(beta_hat > 0.0 ? 2.0 / beta_hat : 1.0, 1.0, beta, theta);
    }
    case MethodName::DRS:
      require(n == 2 && m == 0, id + " needs n = 2 and m = 0");
      return drs_params(1.0, 1.0, theta);
    case MethodName::GraphDRS:
      require(m == 0, id + " needs m = 0");
      return graph_drs_params(random_forward_tree(n, seed),
                              graph_builders(GraphKind::Complete, n), theta);
    case MethodName::GFB: {
      require(m == n - 1, id + " needs m = n - 1");
      const GraphSpec complete = graph_builders(GraphKind::Complete, n);
      return gfb_params(complete, random_forward_tree(n, seed), beta_max, theta);
    }
    case MethodName::RFB:
      require(m == n - 1, id + " needs m = n - 1");
      return rfb_params(n, beta_max, theta);
    case MethodName::SDY:
      require(m == n - 1, id + " needs m = n - 1");
      return sdy_params(n, beta_max, theta);
    case MethodName::AGFB: {
      const GraphSpec complete = graph_builders(GraphKind::Complete, n);
      require(m <= static_cast<int>(complete.edges.size()),
              id + " needs m <= n (n - 1) / 2");
      const auto edges = random_edge_assignment(complete, m, seed);
      std::vector<EdgeForward> forwards;
      for (int j = 0; j < m; ++j) forwards.push_back({edges[static_cast<std::size_t>(j)], beta(j)});
      return agfb_params(complete, forwards, theta);
    }
    case MethodName::SFBPlus:
      return {MethodName::SFBPlus, sfb_plus_params(random_F(n, m, seed), beta, theta), true,
              "complete laplacian, P = 0, (H, K) minimizing ||W||"};
  }
  throw Error(ErrorKind::InvalidParameters, "unknown method");
}

RunReport run_method(const MethodDescriptor& method, const ProblemSpec& problem,
                     const RunOptions& options) {
  if (method.lifted) return run_lifted(method.params, problem, std::nullopt, options);
  return run(method.params, problem, std::nullopt, options);
}

RunReport run_experiment(const MethodDescriptor& method, const ProblemSpec& problem,
                         const ExperimentConfig& cfg) {
  RunOptions options;
  options.max_iters = cfg.iters;
  options.record_timing = cfg.record_timing;
  RunReport report = run_method(method, problem, options);

  std::ofstream csv(cfg.out);
  if (!csv) throw Error(ErrorKind::Io, "cannot write " + cfg.out.string());
  write_run_csv(report, csv);
  csv.close();
  if (!csv) throw Error(ErrorKind::Io, "failed writing " + cfg.out.string());

  nlohmann::json sidecar;
  sidecar["config"] = cfg.echo;
  sidecar["seed"] = cfg.seed;
  sidecar["method"] = std::string(method_id(method.name));
  sidecar["notes"] = method.notes;
  sidecar["iterations"] = report.iterations();
  sidecar["termination"] =
      report.reason == Termination::Converged ? "converged" : "max-iterations";
  nlohmann::json final_metrics;
  if (!report.records.empty()) {
    const auto& last = report.records.back();
    final_metrics["fp_residual"] = last.fp_residual;
    final_metrics["variance"] = last.variance;
    if (last.objective) final_metrics["objective"] = *last.objective;
  }
  final_metrics["consensus"] =
      std::vector<double>(report.consensus.data(), report.consensus.data() + report.consensus.size());
  sidecar["final"] = final_metrics;
  Eigen::VectorXd beta = problem.beta();
  sidecar["problem_beta"] = std::vector<double>(beta.data(), beta.data() + beta.size());
  sidecar["validation"] = report_to_json(validate_params(method.params));
  sidecar["params"] = params_to_json(method.params);

  const std::filesystem::path side = cfg.out.string() + ".json";
  std::ofstream js(side);
  if (!js) throw Error(ErrorKind::Io, "cannot write " + side.string());
  js << sidecar.dump(2) << '\n';
  if (!js) throw Error(ErrorKind::Io, "failed writing " + side.string());
  return report;
}

Suite parse_suite(std::string_view name) {
  if (name == "toy-homo") return Suite::ToyHomo;
  if (name == "toy-hetero") return Suite::ToyHetero;
  if (name == "portfolio") return Suite::Portfolio;
  throw Error(ErrorKind::InvalidParameters, "unknown suite '" + std::string(name) + "'");
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

Point reference_solution(const ProblemSpec& problem, int iters, std::uint64_t seed) {
  const int n = static_cast<int>(problem.n());
  const int m = static_cast<int>(problem.m());
  const SplittingParams params = sfb_plus_params(random_F(n, m, seed), problem.beta());
  RunOptions options;
  options.max_iters = iters;
  options.stop_rel = 0.0;
  options.stop_abs = 1e-15;
  options.record_timing = false;
  return run_lifted(params, problem, std::nullopt, options).consensus;
}

nlohmann::json CompareSummary::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : methods) {
    nlohmann::json j;
    j["method"] = std::string(method_id(s.name));
    j["runs"] = s.runs;
    if (!s.skipped.empty()) j["skipped"] = s.skipped;
    j["iters_to_threshold"] = s.iters_to_threshold;
    j["final_residuals"] = s.final_residuals;
    j["median_iters"] = s.median_iters;
    j["median_final_residual"] = s.median_final_residual;
    out.push_back(j);
  }
  return {{"methods", out}};
}

CompareSummary compare(const CompareConfig& cfg) {
  if (cfg.methods.empty()) throw Error(ErrorKind::InvalidParameters, "no methods to compare");
  CompareSummary summary;
  for (MethodName name : cfg.methods) summary.methods.push_back({name, 0, {}, {}, {}, -1.0, 0.0});

  const bool portfolio = cfg.suite == Suite::Portfolio;
  for (int r = 0; r < cfg.repeats; ++r) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(r);
    ToyProblemConfig toy = cfg.toy;
    toy.seed = seed;
    toy.hetero = cfg.suite == Suite::ToyHetero;
    PortfolioProblemConfig pf = cfg.portfolio;
    pf.seed = seed;

    const ProblemSpec base = portfolio ? gen_portfolio_problem(pf) : gen_toy_problem(toy);
    const int n = static_cast<int>(base.n());
    const int m = static_cast<int>(base.m());
    const Point x_star = reference_solution(base, cfg.reference_iters, seed);
    const double f_star = base.objective(x_star);

    for (auto& s : summary.methods) {
      if (!s.skipped.empty()) continue;
      const int needed = required_m(s.name, n, m);
      std::optional<ProblemSpec> problem;
      if (needed == m) {
        problem = base;
      } else if (!portfolio && needed > 0 && needed <= toy.p) {
        ToyProblemConfig resplit = toy;
        resplit.m = needed;
        problem = gen_toy_problem(resplit);
      } else {
        s.skipped = std::string(method_id(s.name)) + " does not fit this problem shape";
        continue;
      }
      MethodDescriptor method;
      try {
        method = make_method(s.name, n, problem->beta(), seed);
      } catch (const Error& e) {
        s.skipped = e.what();
        continue;
      }
      auto residual = [&](const Point& x) {
        return portfolio ? (x - x_star).norm() : std::abs(problem->objective(x) - f_star);
      };
      int hit = -1;
      double last = std::numeric_limits<double>::quiet_NaN();
      RunOptions options;
      options.max_iters = cfg.iters;
      options.stop_rel = 0.0;
      options.record_timing = false;
      options.on_iterate = [&](int k, const Evaluation& eval) {
        last = residual(extract_solution(eval.x));
        if (hit < 0 && last <= cfg.threshold) hit = k;
      };
      run_method(method, *problem, options);
      ++s.runs;
      s.iters_to_threshold.push_back(hit);
      s.final_residuals.push_back(last);
    }
  }

  for (auto& s : summary.methods) {
    if (s.runs == 0) continue;
    std::vector<double> iters;
    for (int k : s.iters_to_threshold)
      iters.push_back(k < 0 ? std::numeric_limits<double>::infinity() : k);
    const double med = median(iters);
    s.median_iters = std::isfinite(med) ? med : -1.0;
    s.median_final_residual = median(s.final_residuals);
  }

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    const auto path = cfg.out_dir / "summary.json";
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << summary.to_json().dump(2) << '\n';
    if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
  }
  return summary;
}

}  // namespace fsplit
