#pragma once

#include "rpls/baselines.hpp"
#include "rpls/metrics.hpp"
#include "rpls/rpls.hpp"

#include "json.hpp"

#include <filesystem>

namespace rpls {

/// Value of the "schema" field in every model document.
inline constexpr std::string_view kModelSchema = "rpls-model/1";

enum class ModelKind { kRpls, kLinear };

// Matrices are {"rows": r, "cols": c, "data": [row-major entries]}. Doubles
// are written in shortest round-trip form, so a save/load cycle is exact.
nlohmann::json matrix_to_json(const DenseMatrix &m);
DenseMatrix matrix_from_json(const nlohmann::json &j);

nlohmann::json to_json(const RplsConfig &cfg);
RplsConfig config_from_json(const nlohmann::json &j);
/// Reads the subset of config keys present (used for --config files).
RplsOverrides overrides_from_json(const nlohmann::json &j);

nlohmann::json to_json(const RplsModel &model);
RplsModel rpls_model_from_json(const nlohmann::json &j);

nlohmann::json to_json(const LinearModel &model);
LinearModel linear_model_from_json(const nlohmann::json &j);

/// Throws ParseError unless the document carries a known schema and kind.
ModelKind model_kind(const nlohmann::json &j);

nlohmann::json to_json(const ExperimentReport &report);

nlohmann::json load_json(const std::filesystem::path &path);
void save_json(const std::filesystem::path &path, const nlohmann::json &j);

} // namespace rpls
