#include "fsplit/params_json.hpp"

#include <fstream>
#include <string>

#include "fsplit/error.hpp"

namespace fsplit {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& A) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < A.cols(); ++j) row.push_back(A(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, Eigen::Index n_rows,
                                 Eigen::Index n_cols) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n_rows) {
    throw Error(ErrorKind::InvalidParameters,
                "matrix: expected " + std::to_string(n_rows) + " rows");
  }
  if (n_cols < 0) n_cols = n_rows == 0 ? 0 : static_cast<Eigen::Index>(rows[0].size());
  Eigen::MatrixXd A(n_rows, n_cols);
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols) {
      throw Error(ErrorKind::InvalidParameters,
                  "matrix: row " + std::to_string(i) + " has the wrong length");
    }
    for (Eigen::Index j = 0; j < n_cols; ++j) {
      A(i, j) = row[static_cast<std::size_t>(j)].get<double>();
    }
  }
  return A;
}

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from_json(const json& arr) {
  const auto values = arr.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

}  // namespace

json params_to_json(const SplittingParams& params) {
  json doc;
  doc["n"] = params.n();
  doc["m"] = params.m();
  doc["F"] = params.causal ? params.causal->F.entries()
                           : std::vector<int>(static_cast<std::size_t>(params.n()), 0);
  doc["M"] = matrix_to_json(params.M);
  doc["P"] = matrix_to_json(params.P);
  doc["H"] = matrix_to_json(params.H());
  doc["K"] = matrix_to_json(params.K());
  doc["theta"] = params.theta;
  doc["beta"] = vector_to_json(params.beta);
  doc["laplacian"] = matrix_to_json(params.laplacian);
  doc["p_gram"] = matrix_to_json(params.p_gram);
  if (params.operator_form) {
    doc["gamma"] = vector_to_json(params.gamma);
    doc["L"] = matrix_to_json(params.L);
  }
  return doc;
}

SplittingParams params_from_json(const json& doc) {
  try {
    const auto n = doc.at("n").get<Eigen::Index>();
    const auto m = doc.at("m").get<Eigen::Index>();
    const Eigen::MatrixXd M = matrix_from_json(doc.at("M"), n, n - 1);
    const Eigen::MatrixXd P = matrix_from_json(doc.at("P"), n, -1);
    const Eigen::VectorXd beta = vector_from_json(doc.at("beta"));
    if (beta.size() != m) {
      throw Error(ErrorKind::InvalidParameters, "beta must have m entries");
    }
    const double theta = doc.at("theta").get<double>();
    std::optional<CausalPair> causal;
    if (m > 0) {
      NondecreasingVector F(doc.at("F").get<std::vector<int>>(), static_cast<int>(m));
      causal = CausalPair{matrix_from_json(doc.at("H"), n, m),
                          matrix_from_json(doc.at("K"), m, n), std::move(F)};
    }
    if (doc.contains("gamma") && doc.contains("L")) {
      return from_operator_form(M, vector_from_json(doc.at("gamma")),
                                matrix_from_json(doc.at("L"), n, n), causal, beta,
                                theta);
    }
    const Eigen::MatrixXd laplacian = doc.contains("laplacian")
                                          ? matrix_from_json(doc.at("laplacian"), n, n)
                                          : Eigen::MatrixXd(M * M.transpose());
    const Eigen::MatrixXd p_gram = doc.contains("p_gram")
                                       ? matrix_from_json(doc.at("p_gram"), n, n)
                                       : Eigen::MatrixXd(P * P.transpose());
    return assemble_with_grams(M, laplacian, P, p_gram, causal, beta, theta);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidParameters,
                std::string("malformed parameter document: ") + e.what());
  }
}

json report_to_json(const ValidationReport& report) {
  json doc;
  doc["passed"] = report.passed();
  doc["conditions"] = {
      {"null_space", report.null_space_ok},
      {"strictly_lower_encoding", report.lower_triangular_ok},
      {"causal", report.causal_ok},
      {"lmi", report.psd_ok},
      {"theta", report.theta_ok},
  };
  doc["lmi_min_eigenvalue"] = report.lmi_min_eigenvalue;
  doc["lmi_scale"] = report.lmi_scale;
  doc["rank_ratio"] = report.rank_ratio;
  doc["null_space_residuals"] = report.null_space_residuals;
  doc["row_sum_residuals"] = report.row_sum_residuals;
  return doc;
}

SplittingParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidParameters,
                "cannot parse " + path.string() + ": " + e.what());
  }
  return params_from_json(doc);
}

void save_params(const SplittingParams& params, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << params_to_json(params).dump(2) << '\n';
}

}  // namespace fsplit
