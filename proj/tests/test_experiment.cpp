#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fsplit/error.hpp"
#include "fsplit/experiment.hpp"
#include "fsplit/params_json.hpp"

using namespace fsplit;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("median") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK(std::isnan(median({})));
}

TEST_CASE("make_method checks the problem shape") {
  const Eigen::VectorXd b4 = Eigen::VectorXd::Constant(4, 1.0);
  CHECK_THROWS_AS(make_method(MethodName::DY, 3, b4, 0), Error);
  CHECK_THROWS_AS(make_method(MethodName::GraphDRS, 5, b4, 0), Error);
  CHECK_THROWS_AS(make_method(MethodName::GFB, 4, b4, 0), Error);
  for (MethodName name : {MethodName::GFB, MethodName::RFB, MethodName::SDY, MethodName::AGFB,
                          MethodName::SFBPlus}) {
    const MethodDescriptor d = make_method(name, 5, b4, 3);
    CHECK(d.name == name);
    CHECK(validate_params(d.params).passed());
  }
  CHECK(validate_params(make_method(MethodName::DY, 2, b4, 0).params).passed());
  CHECK(validate_params(make_method(MethodName::DRS, 2, Eigen::VectorXd(0), 0).params).passed());
  // Same seed, same design.
  CHECK(make_method(MethodName::AGFB, 5, b4, 7).params.S == make_method(MethodName::AGFB, 5, b4, 7).params.S);
}

TEST_CASE("run_experiment writes a reproducible csv and sidecar") {
  const auto dir = temp_dir("fsplit_experiment");
  ToyProblemConfig toy;
  toy.seed = 2;
  const ProblemSpec problem = gen_toy_problem(toy);
  const MethodDescriptor method = make_method(MethodName::SFBPlus, 5, problem.beta(), 2);

  ExperimentConfig cfg;
  cfg.iters = 25;
  cfg.seed = 2;
  cfg.record_timing = false;
  cfg.echo = {{"problem", "toy"}};
  cfg.out = dir / "a.csv";
  const RunReport a = run_experiment(method, problem, cfg);
  cfg.out = dir / "b.csv";
  run_experiment(method, problem, cfg);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));

  std::istringstream csv(slurp(dir / "a.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == a.iterations() + 1);

  const nlohmann::json side = nlohmann::json::parse(slurp(dir / "a.csv.json"));
  CHECK(side["method"] == "sfb+");
  CHECK(side["seed"] == 2);
  CHECK(side["iterations"] == a.iterations());
  CHECK(side["config"]["problem"] == "toy");
  CHECK(side["final"]["fp_residual"].get<double>() == a.records.back().fp_residual);
  CHECK(side["validation"]["passed"] == true);
  const SplittingParams back = params_from_json(side["params"]);
  CHECK(back.S == method.params.S);
  CHECK(back.gamma == method.params.gamma);

  cfg.out = dir / "missing" / "c.csv";
  ErrorKind kind = ErrorKind::Divergence;
  try {
    run_experiment(method, problem, cfg);
  } catch (const Error& e) {
    kind = e.kind();
  }
  CHECK(kind == ErrorKind::Io);
}

TEST_CASE("compare is reproducible and skips methods that do not fit") {
  CompareConfig cfg;
  cfg.suite = Suite::ToyHomo;
  cfg.methods = {MethodName::SFBPlus, MethodName::GFB, MethodName::DY};
  cfg.repeats = 2;
  cfg.iters = 300;
  cfg.reference_iters = 2000;
  cfg.threshold = 1e-3;
  cfg.out_dir = temp_dir("fsplit_compare");
  const CompareSummary s1 = compare(cfg);
  const CompareSummary s2 = compare(cfg);
  CHECK(s1.to_json() == s2.to_json());
  CHECK(s1.methods[0].runs == 2);
  CHECK(s1.methods[1].runs == 2);
  CHECK(s1.methods[2].runs == 0);
  CHECK_FALSE(s1.methods[2].skipped.empty());
  CHECK(s1.methods[0].median_iters > 0);
  CHECK(nlohmann::json::parse(slurp(cfg.out_dir / "summary.json")) == s1.to_json());

  cfg.suite = Suite::Portfolio;
  cfg.methods = {MethodName::SFBPlus, MethodName::AGFB};
  cfg.repeats = 1;
  cfg.out_dir.clear();
  const CompareSummary p = compare(cfg);
  CHECK(p.methods[0].runs == 1);
  CHECK(p.methods[1].runs == 1);

  CHECK(parse_suite("toy-hetero") == Suite::ToyHetero);
  CHECK_THROWS_AS(parse_suite("nope"), Error);
  cfg.methods.clear();
  CHECK_THROWS_AS(compare(cfg), Error);
}

}
