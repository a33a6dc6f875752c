#pragma once

#include "treesmooth/forest.hpp"

#include <json.hpp>

#include <string>

namespace treesmooth {

// Model documents carry a schema_version; loaders reject anything else.
inline constexpr int kModelSchemaVersion = 1;

nlohmann::ordered_json regularizer_to_json(const RegularizerSpec& spec);
RegularizerSpec regularizer_from_json(const nlohmann::json& j);

nlohmann::ordered_json tree_to_json(const Tree& tree);
Tree tree_from_json(const nlohmann::json& j, std::size_t n_features);

nlohmann::ordered_json forest_to_json(const FittedForest& forest);
FittedForest forest_from_json(const nlohmann::json& j);

void save_forest(const FittedForest& forest, const std::string& path);
FittedForest load_forest(const std::string& path);

} // namespace treesmooth
