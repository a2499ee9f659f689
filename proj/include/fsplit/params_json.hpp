#pragma once

#include <json.hpp>

#include <filesystem>

#include "fsplit/params.hpp"

namespace fsplit {

/// Fields: n, m, F, M, P, H, K (row-major nested arrays), theta, beta, plus
/// laplacian and p_gram so that derived quantities rebuild bit-exactly.
/// Operator-form parameters additionally carry gamma and L.
nlohmann::json params_to_json(const SplittingParams& params);
SplittingParams params_from_json(const nlohmann::json& doc);

nlohmann::json report_to_json(const ValidationReport& report);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& A);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows, Eigen::Index n_rows,
                                 Eigen::Index n_cols);

SplittingParams load_params(const std::filesystem::path& path);
void save_params(const SplittingParams& params, const std::filesystem::path& path);

}  // namespace fsplit
