#pragma once

// Method factory, single-run persistence and the multi-method comparison.

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fsplit/engine.hpp"
#include "fsplit/presets.hpp"
#include "fsplit/problems.hpp"

namespace fsplit {

/// Instantiates a preset for a problem with n resolvents and forward
/// constants `beta`; random design choices (schedule, forward tree, edge
/// assignment) are drawn from `seed`. Presets defined for constant beta use
/// max(beta). Throws InvalidParameters when the problem shape does not fit
/// (dy/drs need n = 2, graph-drs needs m = 0, gfb/rfb/sdy need m = n - 1).
MethodDescriptor make_method(MethodName name, int n, const Eigen::VectorXd& beta,
                             std::uint64_t seed, double theta = kDefaultTheta);

/// Dispatches to run or run_lifted.
RunReport run_method(const MethodDescriptor& method, const ProblemSpec& problem,
                     const RunOptions& options);

struct ExperimentConfig {
  int iters = 1000;
  std::uint64_t seed = 0;
  std::filesystem::path out;  ///< CSV path; the sidecar is out + ".json"
  bool record_timing = true;
  nlohmann::json echo;        ///< problem/method configuration to persist
};

/// Runs the method from the zero initialization, writes the CSV and a JSON
/// sidecar with the configuration echo, final metrics, validation report and
/// the parameters. Throws Error(Io) on write failures.
RunReport run_experiment(const MethodDescriptor& method, const ProblemSpec& problem,
                         const ExperimentConfig& cfg);

enum class Suite { ToyHomo, ToyHetero, Portfolio };
Suite parse_suite(std::string_view name);

struct CompareConfig {
  Suite suite = Suite::ToyHomo;
  std::vector<MethodName> methods;
  int repeats = 5;
  std::uint64_t seed = 0;
  int iters = 2000;
  double threshold = 1e-5;
  int reference_iters = 20000;
  ToyProblemConfig toy;
  PortfolioProblemConfig portfolio;
  std::filesystem::path out_dir;  ///< empty: no files written
};

struct MethodSummary {
  MethodName name;
  int runs = 0;
  std::string skipped;  ///< reason, empty when the method ran
  /// -1 when the threshold was not reached within the budget.
  std::vector<int> iters_to_threshold;
  std::vector<double> final_residuals;
  double median_iters = -1.0;  ///< over runs; -1 when the median run missed the threshold
  double median_final_residual = 0.0;
};

struct CompareSummary {
  std::vector<MethodSummary> methods;
  nlohmann::json to_json() const;
};

/// Residual: |f(mean x) - f*| on the toy suites, ||mean x - x*|| on the
/// portfolio suite, against a long SFB+ reference run per repeat. Writes
/// summary.json into out_dir when set.
CompareSummary compare(const CompareConfig& cfg);

/// Long SFB+ run used as reference solution.
Point reference_solution(const ProblemSpec& problem, int iters, std::uint64_t seed);

double median(std::vector<double> values);

}  // namespace fsplit
