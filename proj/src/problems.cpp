#include "fsplit/problems.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fsplit/error.hpp"
#include "fsplit/ops.hpp"

namespace fsplit {

std::pair<int, int> row_block(int p, int m, int k) {
  const int base = p / m;
  const int extra = p % m;
  const int start = k * base + std::min(k, extra);
  return {start, base + (k < extra ? 1 : 0)};
}

ToyData gen_toy_data(const ToyProblemConfig& cfg) {
  if (cfg.n < 2 || cfg.d < 1 || cfg.p < 1)
    throw Error(ErrorKind::InvalidParameters, "toy problem needs n >= 2, d >= 1, p >= 1");
  // Draw order is fixed so that the data does not depend on m or the flag.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ToyData data;
  data.xi.resize(cfg.n, cfg.d);
  for (int i = 0; i < cfg.n; ++i)
    for (int k = 0; k < cfg.d; ++k) data.xi(i, k) = sym(rng);
  // Psi_rk ~ U(0, 1/sqrt(d)) keeps Psi x of order one; y_k ~ U(0, d/2).
  const double psi_scale = 1.0 / std::sqrt(static_cast<double>(cfg.d));
  data.Psi.resize(cfg.p, cfg.d);
  for (int r = 0; r < cfg.p; ++r)
    for (int k = 0; k < cfg.d; ++k) data.Psi(r, k) = psi_scale * unit(rng);
  data.y.resize(cfg.p);
  for (int r = 0; r < cfg.p; ++r) data.y(r) = 0.5 * cfg.d * unit(rng);

  std::vector<int> rows(static_cast<std::size_t>(cfg.p));
  for (int r = 0; r < cfg.p; ++r) rows[static_cast<std::size_t>(r)] = r;
  std::shuffle(rows.begin(), rows.end(), rng);
  if (cfg.hetero) {
    for (int k = 0; k < std::min(2, cfg.p); ++k) data.Psi.row(rows[static_cast<std::size_t>(k)]) *= 5.0;
  }
  return data;
}

ProblemSpec gen_toy_problem(const ToyProblemConfig& cfg) {
  if (cfg.m < 0 || cfg.m > cfg.p)
    throw Error(ErrorKind::InvalidParameters, "toy problem needs 0 <= m <= p");
  if (!(cfg.delta1 >= 0.0) || cfg.delta1 > cfg.delta2)
    throw Error(ErrorKind::InvalidParameters, "toy problem needs 0 <= delta1 <= delta2");
  const auto data = std::make_shared<const ToyData>(gen_toy_data(cfg));
  const double d1 = cfg.delta1;
  const double d2 = cfg.delta2;

  std::vector<ResolventOracle> resolvents;
  for (int i = 0; i < cfg.n; ++i) {
    resolvents.push_back({[data, i](double step, const Point& v) -> Point {
                            return prox_norm_offset(data->xi.row(i).transpose(), step, v);
                          },
                          "norm-distance " + std::to_string(i + 1)});
  }
  std::vector<ForwardOracle> forwards;
  for (int k = 0; k < cfg.m; ++k) {
    const auto [start, count] = row_block(cfg.p, cfg.m, k);
    const Eigen::MatrixXd block = data->Psi.middleRows(start, count);
    const double beta = spectral_norm(Eigen::MatrixXd(block * block.transpose()));
    forwards.push_back({[data, start = start, count = count, d1, d2](const Point& x) -> Point {
                          const auto block = data->Psi.middleRows(start, count);
                          const Eigen::VectorXd r = block * x - data->y.segment(start, count);
                          Eigen::VectorXd g(count);
                          for (int t = 0; t < count; ++t) g(t) = huber_value_grad(d1, d2, r(t)).second;
                          return block.transpose() * g;
                        },
                        beta, "huber block " + std::to_string(k + 1)});
  }
  auto objective = [data, d1, d2](const Point& x) {
    double value = 0.0;
    for (Eigen::Index i = 0; i < data->xi.rows(); ++i)
      value += (x - data->xi.row(i).transpose()).norm();
    const Eigen::VectorXd r = data->Psi * x - data->y;
    for (Eigen::Index t = 0; t < r.size(); ++t) value += huber_value_grad(d1, d2, r(t)).first;
    return value;
  };
  return ProblemSpec(cfg.d, std::move(resolvents), std::move(forwards), objective);
}

PortfolioData gen_portfolio_data(const PortfolioProblemConfig& cfg) {
  if (cfg.assets < 1 || cfg.chunks < 1)
    throw Error(ErrorKind::InvalidParameters, "portfolio needs assets >= 1 and chunks >= 1");
  for (double z : cfg.zeta)
    if (!(z >= 0.0 && z <= 1.0)) throw Error(ErrorKind::InvalidParameters, "zeta must lie in [0, 1]");

  PortfolioData data;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  if (cfg.data) {
    data.returns = read_returns_csv(*cfg.data);
    if (data.returns.cols() != cfg.assets) {
      throw Error(ErrorKind::Ingestion, "returns file has " + std::to_string(data.returns.cols()) +
                                            " columns, expected " + std::to_string(cfg.assets));
    }
  } else {
    if (cfg.days < 1) throw Error(ErrorKind::InvalidParameters, "portfolio needs days >= 1");
    Eigen::VectorXd mu(cfg.assets), sigma(cfg.assets);
    for (int a = 0; a < cfg.assets; ++a) {
      mu(a) = 0.1 * unit(rng);
      sigma(a) = 0.5 + 1.5 * unit(rng);
    }
    const auto [shock_start, shock_count] = row_block(cfg.days, std::max(cfg.chunks, 2), 1);
    data.returns.resize(cfg.days, cfg.assets);
    for (int t = 0; t < cfg.days; ++t) {
      const bool shock = t >= shock_start && t < shock_start + shock_count;
      const double market = normal(rng);
      for (int a = 0; a < cfg.assets; ++a) {
        const double noise = 0.6 * market + 0.8 * normal(rng);
        data.returns(t, a) = shock ? -0.3 + 3.0 * sigma(a) * noise : mu(a) + sigma(a) * noise;
      }
    }
  }

  const int d = static_cast<int>(data.returns.cols());
  data.x0 = Eigen::VectorXd::Constant(d, 1.0 / d);
  data.carbon.resize(3, d);
  for (int attempt = 0;; ++attempt) {
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < d; ++a) data.carbon(j, a) = 0.5 + 1.5 * unit(rng);
    for (int j = 0; j < 3; ++j)
      data.bounds(j) = (1.0 - cfg.zeta[static_cast<std::size_t>(j)]) * data.carbon.row(j).dot(data.x0);
    bool feasible = false;
    for (int a = 0; a < d && !feasible; ++a)
      feasible = (data.carbon.col(a).array() < 0.99 * data.bounds.array()).all();
    if (feasible) break;
    if (attempt > 1000)
      throw Error(ErrorKind::InvalidParameters, "could not sample feasible carbon indexes");
  }
  return data;
}

namespace {

bool parse_double(const std::string& field, double& out) {
  std::size_t begin = field.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return false;
  const std::size_t end = field.find_last_not_of(" \t\r");
  const std::string token = field.substr(begin, end - begin + 1);
  char* stop = nullptr;
  errno = 0;
  out = std::strtod(token.c_str(), &stop);
  return errno == 0 && stop == token.c_str() + token.size() && std::isfinite(out);
}

}  // namespace

Eigen::MatrixXd read_returns_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  std::size_t cols = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();

    std::vector<double> values(fields.size());
    std::size_t bad = fields.size();
    for (std::size_t c = 0; c < fields.size() && bad == fields.size(); ++c)
      if (!parse_double(fields[c], values[c])) bad = c;
    if (bad != fields.size()) {
      if (rows.empty() && cols == 0 && line_no == 1) {
        cols = fields.size();  // header
        continue;
      }
      throw Error(ErrorKind::Ingestion, path.string() + ": row " + std::to_string(line_no) +
                                            ", column " + std::to_string(bad + 1) +
                                            ": not a finite number");
    }
    if (cols == 0) cols = values.size();
    if (values.size() != cols) {
      throw Error(ErrorKind::Ingestion, path.string() + ": row " + std::to_string(line_no) +
                                            " has " + std::to_string(values.size()) +
                                            " columns, expected " + std::to_string(cols));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw Error(ErrorKind::Ingestion, path.string() + ": no data rows");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return out;
}

ProblemSpec portfolio_problem_from_data(const PortfolioData& data,
                                        const PortfolioProblemConfig& cfg) {
  const int days = static_cast<int>(data.returns.rows());
  const int d = static_cast<int>(data.returns.cols());
  const int chunks = cfg.chunks;
  if (chunks < 1 || days < 2 * chunks)
    throw Error(ErrorKind::InvalidParameters, "every chunk needs at least two trading days");
  if (!(cfg.turnover > 0.0))
    throw Error(ErrorKind::InvalidParameters, "turnover weight must be positive");

  const Eigen::VectorXd r_hat = data.returns.colwise().mean().transpose();
  const auto x0 = std::make_shared<const Eigen::VectorXd>(data.x0);
  const double w = cfg.turnover;

  std::vector<ResolventOracle> resolvents;
  resolvents.push_back({[x0, w](double step, const Point& v) -> Point {
                          return soft_threshold_offset(*x0, step * w, v);
                        },
                        "turnover"});
  resolvents.push_back(
      {[](double, const Point& v) -> Point { return project_simplex(v); }, "simplex"});
  for (int j = 0; j < 3; ++j) {
    const Eigen::VectorXd c = data.carbon.row(j).transpose();
    const double b = data.bounds(j);
    resolvents.push_back({[c, b](double, const Point& v) -> Point {
                            return project_halfspace(c, b, v);
                          },
                          "carbon scope " + std::to_string(j + 1)});
  }

  std::vector<ForwardOracle> forwards;
  Eigen::MatrixXd sigma_total = Eigen::MatrixXd::Zero(d, d);
  for (int k = 0; k < chunks; ++k) {
    const auto [start, count] = row_block(days, chunks, k);
    const Eigen::MatrixXd centered = center_columns(data.returns.middleRows(start, count));
    const Eigen::MatrixXd sigma =
        (centered.transpose() * centered) / (static_cast<double>(count - 1) * chunks);
    sigma_total += sigma;
    const Eigen::VectorXd r_part = r_hat / chunks;
    forwards.push_back({[sigma, r_part](const Point& x) -> Point {
                          return 2.0 * sigma * x - r_part;
                        },
                        2.0 * spectral_norm(sigma), "returns chunk " + std::to_string(k + 1)});
  }
  auto objective = [sigma_total, r_hat, x0, w](const Point& x) {
    return x.dot(sigma_total * x) - r_hat.dot(x) + w * (x - *x0).lpNorm<1>();
  };
  return ProblemSpec(d, std::move(resolvents), std::move(forwards), objective);
}

ProblemSpec gen_portfolio_problem(const PortfolioProblemConfig& cfg) {
  return portfolio_problem_from_data(gen_portfolio_data(cfg), cfg);
}

}  // namespace fsplit
