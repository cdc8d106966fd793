#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "ufi/forest.hpp"
#include "ufi/importance.hpp"
#include "ufi/tree.hpp"

namespace ufi {

inline constexpr std::string_view kTreeFormat = "ufitree/1";
inline constexpr std::string_view kForestFormat = "ufiforest/1";

/// {"format": "ufitree/1", "task", "criterion", "n_features", "n_classes",
///  "nodes": [{"id", "depth", "n", "weight", "impurity", "class_counts" |
///             "mean"/"sum_sq"/"sse"/"abs_dev", "split": {"feature",
///             "threshold"} | null, "left", "right", "train_decrease"}]}
nlohmann::json tree_to_json(const Tree& tree);
Tree tree_from_json(const nlohmann::json& doc);

nlohmann::json forest_config_to_json(const ForestConfig& config);
ForestConfig forest_config_from_json(const nlohmann::json& doc);

/// {"format": "ufiforest/1", "config", "n_train_rows", "trees": [...],
///  "in_bag": [[...]], "oob": [[...]]}
nlohmann::json forest_to_json(const Forest& forest);
Forest forest_from_json(const nlohmann::json& doc);

/// {"method", "features", "scores", "sd", "skipped_nodes", "n_trees"}
nlohmann::json report_to_json(const ImportanceReport& report);

/// Header "feature,score,sd", one row per feature.
std::string report_to_csv(const ImportanceReport& report);

/// Quotes a CSV field when it holds a comma, quote or line break.
std::string csv_field(const std::string& text);

/// Shortest decimal text that reads back to the same double.
std::string format_real(double value);

}  // namespace ufi
