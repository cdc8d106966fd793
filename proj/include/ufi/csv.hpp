#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ufi/dataset.hpp"

namespace ufi {

/// Column typing for a CSV file. Columns not named in `kinds` are read as
/// continuous; columns in `drop` are ignored.
struct Schema {
  std::string target;
  Task task = Task::classification;
  std::map<std::string, FeatureKind::Tag> kinds;
  /// Optional fixed level order for categorical/binary columns.
  std::map<std::string, std::vector<std::string>> levels;
  /// Optional fixed class label order (classification). When empty, labels
  /// are sorted (numerically if all numeric, else lexicographically).
  std::vector<std::string> classes;
  std::vector<std::string> drop;
};

/// Reads a schema sidecar:
///   {"target": "y", "task": "classification",
///    "columns": {"age": "continuous", "sex": "binary",
///                "color": {"kind": "categorical", "levels": ["r","g"]}},
///    "classes": ["no", "yes"], "drop": ["id"]}
Schema load_schema(const std::filesystem::path& path);
Schema parse_schema(const std::string& json_text);

FeatureKind::Tag parse_kind(const std::string& text);

struct LoadedData {
  Dataset data;
  /// Class label text for each dense class index (classification only).
  std::vector<std::string> class_labels;
};

/// Level tables from a previously loaded dataset; lets a test file share the
/// training file's category codes and class indices.
struct CsvReference {
  std::vector<std::string> feature_names;
  std::vector<FeatureKind> kinds;
  std::vector<std::vector<std::string>> levels;
  std::vector<std::string> class_labels;
};

CsvReference make_reference(const LoadedData& loaded);

/// Comma-separated, header row first, '.' decimal separator. Empty cells and
/// the tokens NA, NaN and ? count as missing and are rejected. Errors carry
/// the 1-based data row and the column name.
LoadedData load_csv(const std::filesystem::path& path, const Schema& schema,
                    const CsvReference* reference = nullptr);
LoadedData parse_csv(const std::string& text, const Schema& schema,
                     const CsvReference* reference = nullptr);

}  // namespace ufi
