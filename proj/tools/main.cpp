// Command-line front end: validate parameter files, run single experiments
// and benchmark suites.

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fsplit/error.hpp"
#include "fsplit/experiment.hpp"
#include "fsplit/params_json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitDivergence = 3;

int exit_code(const fsplit::Error& e) {
  switch (e.kind()) {
    case fsplit::ErrorKind::Io:
    case fsplit::ErrorKind::Ingestion:
      return kExitIo;
    case fsplit::ErrorKind::Divergence:
      return kExitDivergence;
    default:
      return kExitValidation;
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct ProblemFlags {
  fsplit::ToyProblemConfig toy;
  fsplit::PortfolioProblemConfig portfolio;
  std::string data;

  void attach(CLI::App* cmd) {
    cmd->add_option("--n", toy.n, "toy: number of distance terms")->capture_default_str();
    cmd->add_option("--d", toy.d, "toy: dimension")->capture_default_str();
    cmd->add_option("--p", toy.p, "toy: rows of Psi")->capture_default_str();
    cmd->add_option("--m", toy.m, "toy: number of forward blocks")->capture_default_str();
    cmd->add_option("--delta1", toy.delta1, "toy: inner Huber knee")->capture_default_str();
    cmd->add_option("--delta2", toy.delta2, "toy: outer Huber knee")->capture_default_str();
    cmd->add_flag("--hetero", toy.hetero, "toy: scale two random rows of Psi by 5");
    cmd->add_option("--assets", portfolio.assets, "portfolio: assets")->capture_default_str();
    cmd->add_option("--days", portfolio.days, "portfolio: trading days")->capture_default_str();
    cmd->add_option("--chunks", portfolio.chunks, "portfolio: return chunks")->capture_default_str();
    cmd->add_option("--turnover", portfolio.turnover, "portfolio: turnover weight")
        ->capture_default_str();
    cmd->add_option("--data", data, "portfolio: CSV of returns (days x assets)");
  }

  void finish(std::uint64_t seed) {
    toy.seed = seed;
    portfolio.seed = seed;
    if (!data.empty()) portfolio.data = data;
  }
};

nlohmann::json echo_flags(const std::string& problem, const ProblemFlags& f,
                          const std::string& method, int iters) {
  nlohmann::json j{{"problem", problem}, {"method", method}, {"iters", iters}};
  if (problem == "toy") {
    j["toy"] = {{"n", f.toy.n},           {"d", f.toy.d},           {"p", f.toy.p},
                {"m", f.toy.m},           {"delta1", f.toy.delta1}, {"delta2", f.toy.delta2},
                {"hetero", f.toy.hetero}, {"seed", f.toy.seed}};
  } else {
    j["portfolio"] = {{"assets", f.portfolio.assets},     {"days", f.portfolio.days},
                      {"chunks", f.portfolio.chunks},     {"zeta", f.portfolio.zeta},
                      {"turnover", f.portfolio.turnover}, {"seed", f.portfolio.seed},
                      {"data", f.data}};
  }
  return j;
}

int cmd_validate(const std::string& path) {
  const fsplit::SplittingParams params = fsplit::load_params(path);
  const fsplit::ValidationReport report = fsplit::validate_params(params);
  std::cout << fsplit::report_to_json(report).dump(2) << '\n';
  return report.passed() ? kExitOk : kExitValidation;
}

int cmd_run(const std::string& problem_kind, const std::string& method_arg, int iters,
            std::uint64_t seed, const std::string& out, ProblemFlags flags, bool timing,
            double theta) {
  flags.finish(seed);
  if (problem_kind != "toy" && problem_kind != "portfolio")
    throw fsplit::Error(fsplit::ErrorKind::InvalidParameters, "--problem must be toy or portfolio");
  const fsplit::ProblemSpec problem = problem_kind == "toy"
                                          ? fsplit::gen_toy_problem(flags.toy)
                                          : fsplit::gen_portfolio_problem(flags.portfolio);

  fsplit::MethodDescriptor method;
  if (std::filesystem::exists(method_arg) && !std::filesystem::is_directory(method_arg)) {
    method = {fsplit::MethodName::SFBPlus, fsplit::load_params(method_arg), false,
              "loaded from " + method_arg};
  } else {
    method = fsplit::make_method(fsplit::parse_method(method_arg),
                                 static_cast<int>(problem.n()), problem.beta(), seed, theta);
  }
  const fsplit::ValidationReport report = fsplit::validate_params(method.params);
  if (!report.passed()) {
    std::cerr << "parameters fail validation\n" << fsplit::report_to_json(report).dump(2) << '\n';
    return kExitValidation;
  }

  fsplit::ExperimentConfig cfg;
  cfg.iters = iters;
  cfg.seed = seed;
  cfg.out = out;
  cfg.record_timing = timing;
  cfg.echo = echo_flags(problem_kind, flags, method_arg, iters);
  const fsplit::RunReport run = fsplit::run_experiment(method, problem, cfg);
  const auto& last = run.records.back();
  std::cout << "iterations " << run.iterations() << ", fp_residual " << last.fp_residual
            << ", variance " << last.variance;
  if (last.objective) std::cout << ", objective " << std::setprecision(12) << *last.objective;
  std::cout << '\n';
  return kExitOk;
}

int cmd_bench(const std::string& suite, const std::string& methods, int repeats,
              std::uint64_t seed, const std::string& out, int iters, double threshold,
              int reference_iters, ProblemFlags flags) {
  flags.finish(seed);
  fsplit::CompareConfig cfg;
  cfg.suite = fsplit::parse_suite(suite);
  for (const auto& id : split_list(methods)) cfg.methods.push_back(fsplit::parse_method(id));
  cfg.repeats = repeats;
  cfg.seed = seed;
  cfg.iters = iters;
  cfg.threshold = threshold;
  cfg.reference_iters = reference_iters;
  cfg.toy = flags.toy;
  cfg.portfolio = flags.portfolio;
  cfg.out_dir = out;
  const fsplit::CompareSummary summary = fsplit::compare(cfg);

  std::cout << std::left << std::setw(11) << "method" << std::setw(6) << "runs"
            << std::setw(14) << "median_iters" << "median_final_residual\n";
  for (const auto& s : summary.methods) {
    std::cout << std::setw(11) << fsplit::method_id(s.name);
    if (!s.skipped.empty()) {
      std::cout << "skipped: " << s.skipped << '\n';
      continue;
    }
    std::cout << std::setw(6) << s.runs << std::setw(14)
              << (s.median_iters < 0 ? std::string("-") : std::to_string(static_cast<int>(s.median_iters)))
              << std::scientific << std::setprecision(3) << s.median_final_residual
              << std::defaultfloat << '\n';
  }
  return kExitOk;
}

int cmd_preset(const std::string& id, int n, const std::string& beta_list,
               std::uint64_t seed, double theta, const std::string& out) {
  std::vector<double> betas;
  for (const auto& item : split_list(beta_list)) betas.push_back(std::stod(item));
  const Eigen::VectorXd beta =
      Eigen::Map<const Eigen::VectorXd>(betas.data(), static_cast<Eigen::Index>(betas.size()));
  const fsplit::MethodDescriptor method =
      fsplit::make_method(fsplit::parse_method(id), n, beta, seed, theta);
  fsplit::save_params(method.params, out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frugal splitting methods: validation, runs and benchmarks"};
  app.require_subcommand(1);

  std::string params_path;
  auto* validate = app.add_subcommand("validate", "check a parameter file");
  validate->add_option("--params", params_path, "parameter JSON")->required();

  std::string problem_kind = "toy", method_arg, out;
  int iters = 1000;
  std::uint64_t seed = 0;
  bool no_timing = false;
  double theta = fsplit::kDefaultTheta;
  ProblemFlags run_flags;
  auto* run = app.add_subcommand("run", "run one method on one problem");
  run->add_option("--problem", problem_kind, "toy or portfolio")->capture_default_str();
  run->add_option("--method", method_arg, "preset id or parameter JSON")->required();
  run->add_option("--iters", iters, "iteration budget")->capture_default_str();
  run->add_option("--seed", seed, "problem and design seed")->capture_default_str();
  run->add_option("--out", out, "CSV output path")->required();
  run->add_option("--theta", theta, "relaxation")->capture_default_str();
  run->add_flag("--no-timing", no_timing, "leave elapsed_ms empty (byte-stable output)");
  run_flags.attach(run);

  std::string suite = "toy-homo";
  std::string methods = "sfb+,agfb,gfb,rfb,sdy,graph-drs,dy,drs";
  int repeats = 5, bench_iters = 2000, reference_iters = 20000;
  double threshold = 1e-5;
  std::string bench_out;
  std::uint64_t bench_seed = 0;
  ProblemFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "compare methods over seeded repeats");
  bench->add_option("--suite", suite, "toy-homo, toy-hetero or portfolio")->capture_default_str();
  bench->add_option("--methods", methods, "comma-separated preset ids")->capture_default_str();
  bench->add_option("--repeats", repeats, "repeats")->capture_default_str();
  bench->add_option("--seed", bench_seed, "master seed")->capture_default_str();
  bench->add_option("--out", bench_out, "output directory")->required();
  bench->add_option("--iters", bench_iters, "iterations per run")->capture_default_str();
  bench->add_option("--threshold", threshold, "residual threshold")->capture_default_str();
  bench->add_option("--reference-iters", reference_iters, "reference run length")
      ->capture_default_str();
  bench_flags.attach(bench);

  std::string preset_id, beta_list, preset_out;
  int preset_n = 3;
  std::uint64_t preset_seed = 0;
  double preset_theta = fsplit::kDefaultTheta;
  auto* preset = app.add_subcommand("preset", "export preset parameters as JSON");
  preset->add_option("--method", preset_id, "preset id")->required();
  preset->add_option("--n", preset_n, "resolvent count")->capture_default_str();
  preset->add_option("--beta", beta_list, "comma-separated forward constants");
  preset->add_option("--seed", preset_seed, "design seed")->capture_default_str();
  preset->add_option("--theta", preset_theta, "relaxation")->capture_default_str();
  preset->add_option("--out", preset_out, "output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(params_path);
    if (*run)
      return cmd_run(problem_kind, method_arg, iters, seed, out, run_flags, !no_timing, theta);
    if (*bench)
      return cmd_bench(suite, methods, repeats, bench_seed, bench_out, bench_iters, threshold,
                       reference_iters, bench_flags);
    if (*preset)
      return cmd_preset(preset_id, preset_n, beta_list, preset_seed, preset_theta, preset_out);
  } catch (const fsplit::Error& e) {
    std::cerr << "error (" << fsplit::to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}
