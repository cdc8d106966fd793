#include "ufi/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace ufi {

namespace {

using json = nlohmann::json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record. Supports double-quoted fields with "" escapes.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(trim(field));
  return fields;
}

bool is_missing(const std::string& cell) {
  return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" ||
         cell == "?";
}

std::optional<double> parse_number(const std::string& cell) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::string where(std::size_t row, const std::string& column) {
  return "row " + std::to_string(row) + ", column '" + column + "'";
}

// Assigns dense codes to category labels, either from a fixed table or by
// first appearance.
class LevelTable {
 public:
  explicit LevelTable(std::vector<std::string> fixed)
      : labels_(std::move(fixed)), frozen_(!labels_.empty()) {
    for (std::size_t i = 0; i < labels_.size(); ++i) codes_[labels_[i]] = i;
  }

  std::optional<std::size_t> code(const std::string& label) {
    if (auto it = codes_.find(label); it != codes_.end()) return it->second;
    if (frozen_) return std::nullopt;
    codes_[label] = labels_.size();
    labels_.push_back(label);
    return labels_.size() - 1;
  }

  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> codes_;
  bool frozen_;
};

std::vector<std::string> default_class_order(
    const std::vector<std::string>& cells) {
  std::set<std::string> distinct(cells.begin(), cells.end());
  std::vector<std::string> labels(distinct.begin(), distinct.end());
  const bool numeric = std::all_of(labels.begin(), labels.end(), [](auto& s) {
    return parse_number(s).has_value();
  });
  if (numeric) {
    std::stable_sort(labels.begin(), labels.end(), [](auto& a, auto& b) {
      return *parse_number(a) < *parse_number(b);
    });
  }
  return labels;
}

}  // namespace

FeatureKind::Tag parse_kind(const std::string& text) {
  if (text == "continuous") return FeatureKind::Tag::continuous;
  if (text == "binary") return FeatureKind::Tag::binary;
  if (text == "categorical") return FeatureKind::Tag::categorical;
  if (text == "ordinal") return FeatureKind::Tag::ordinal;
  throw UsageError("unknown column kind '" + text + "'");
}

Schema parse_schema(const std::string& json_text) {
  Schema schema;
  try {
    const auto doc = json::parse(json_text);
    schema.target = doc.at("target").get<std::string>();
    if (doc.contains("task")) {
      schema.task = parse_task(doc["task"].get<std::string>());
    }
    if (doc.contains("columns")) {
      for (const auto& [name, spec] : doc["columns"].items()) {
        if (spec.is_string()) {
          schema.kinds[name] = parse_kind(spec.get<std::string>());
        } else {
          schema.kinds[name] = parse_kind(spec.at("kind").get<std::string>());
          if (spec.contains("levels")) {
            schema.levels[name] =
                spec["levels"].get<std::vector<std::string>>();
          }
        }
      }
    }
    if (doc.contains("classes")) {
      schema.classes = doc["classes"].get<std::vector<std::string>>();
    }
    if (doc.contains("drop")) {
      schema.drop = doc["drop"].get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("invalid schema: ") + e.what());
  }
  return schema;
}

Schema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open schema file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_schema(buffer.str());
}

CsvReference make_reference(const LoadedData& loaded) {
  return {loaded.data.names(), loaded.data.kinds(), loaded.data.levels(),
          loaded.class_labels};
}

LoadedData parse_csv(const std::string& text, const Schema& schema,
                     const CsvReference* reference) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError("CSV file is empty");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  const auto header = split_record(line);

  std::size_t target_col = header.size();
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == schema.target) {
      target_col = c;
    } else if (std::find(schema.drop.begin(), schema.drop.end(), header[c]) ==
               schema.drop.end()) {
      feature_cols.push_back(c);
    }
  }
  if (target_col == header.size()) {
    throw DataError("target column '" + schema.target + "' not in header");
  }
  for (const auto& [name, kind] : schema.kinds) {
    if (std::find(header.begin(), header.end(), name) == header.end()) {
      throw DataError("schema column '" + name + "' not in header");
    }
  }

  const std::size_t p = feature_cols.size();
  std::vector<std::string> names(p);
  std::vector<FeatureKind::Tag> tags(p);
  std::vector<LevelTable> tables;
  tables.reserve(p);
  for (std::size_t f = 0; f < p; ++f) {
    names[f] = header[feature_cols[f]];
    auto it = schema.kinds.find(names[f]);
    tags[f] = it == schema.kinds.end() ? FeatureKind::Tag::continuous
                                       : it->second;
    std::vector<std::string> fixed;
    if (reference) {
      if (reference->feature_names.size() != p ||
          reference->feature_names[f] != names[f]) {
        throw DataError("columns do not match the reference dataset");
      }
      fixed = reference->levels[f];
    } else if (auto lv = schema.levels.find(names[f]);
               lv != schema.levels.end()) {
      fixed = lv->second;
    }
    tables.emplace_back(std::move(fixed));
  }

  std::vector<std::vector<double>> cols(p);
  std::vector<std::string> target_cells;
  std::vector<double> target;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split_record(line);
    if (cells.size() != header.size()) {
      throw DataError("row " + std::to_string(row) + " has " +
                      std::to_string(cells.size()) + " fields, expected " +
                      std::to_string(header.size()));
    }
    for (std::size_t f = 0; f < p; ++f) {
      const auto& cell = cells[feature_cols[f]];
      if (is_missing(cell)) {
        throw DataError("missing value at " + where(row, names[f]));
      }
      double value = 0.0;
      switch (tags[f]) {
        case FeatureKind::Tag::continuous:
        case FeatureKind::Tag::ordinal: {
          const auto number = parse_number(cell);
          if (!number) {
            throw DataError("cannot parse '" + cell + "' as a number at " +
                            where(row, names[f]));
          }
          value = *number;
          break;
        }
        case FeatureKind::Tag::binary:
        case FeatureKind::Tag::categorical: {
          // A 0/1-coded binary column keeps its numeric meaning.
          if (row == 1 && tags[f] == FeatureKind::Tag::binary &&
              tables[f].labels().empty()) {
            if (cell == "0" || cell == "1") tables[f] = LevelTable({"0", "1"});
          }
          const auto code = tables[f].code(cell);
          if (!code) {
            throw DataError("unknown category '" + cell + "' at " +
                            where(row, names[f]));
          }
          if (tags[f] == FeatureKind::Tag::binary && *code > 1) {
            throw DataError("binary column has more than two levels at " +
                            where(row, names[f]));
          }
          value = static_cast<double>(*code);
          break;
        }
      }
      cols[f].push_back(value);
    }
    const auto& ycell = cells[target_col];
    if (is_missing(ycell)) {
      throw DataError("missing value at " + where(row, schema.target));
    }
    if (schema.task == Task::regression) {
      const auto number = parse_number(ycell);
      if (!number) {
        throw DataError("cannot parse target '" + ycell + "' at " +
                        where(row, schema.target));
      }
      target.push_back(*number);
    } else {
      target_cells.push_back(ycell);
    }
  }
  if (row == 0) throw DataError("CSV file has no data rows");

  std::vector<std::string> class_labels;
  if (schema.task == Task::classification) {
    class_labels = reference && !reference->class_labels.empty()
                       ? reference->class_labels
                   : !schema.classes.empty() ? schema.classes
                                             : default_class_order(target_cells);
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < class_labels.size(); ++k) {
      index[class_labels[k]] = k;
    }
    for (std::size_t i = 0; i < target_cells.size(); ++i) {
      auto it = index.find(target_cells[i]);
      if (it == index.end()) {
        throw DataError("unknown class label '" + target_cells[i] + "' at " +
                        where(i + 1, schema.target));
      }
      target.push_back(static_cast<double>(it->second));
    }
  }

  std::vector<FeatureKind> kinds(p);
  std::vector<std::vector<std::string>> levels(p);
  for (std::size_t f = 0; f < p; ++f) {
    switch (tags[f]) {
      case FeatureKind::Tag::continuous:
        kinds[f] = FeatureKind::continuous();
        break;
      case FeatureKind::Tag::ordinal:
        kinds[f] = FeatureKind::ordinal();
        break;
      case FeatureKind::Tag::binary:
        kinds[f] = FeatureKind::binary();
        levels[f] = tables[f].labels();
        break;
      case FeatureKind::Tag::categorical: {
        const auto k = static_cast<int>(tables[f].labels().size());
        if (k < 2) {
          throw DataError("categorical column '" + names[f] +
                          "' has fewer than 2 levels");
        }
        kinds[f] = FeatureKind::categorical(k);
        levels[f] = tables[f].labels();
        break;
      }
    }
  }
  const int n_classes = static_cast<int>(class_labels.size());
  return {Dataset(std::move(cols), std::move(target), std::move(names),
                  std::move(kinds), schema.task, n_classes, std::move(levels)),
          std::move(class_labels)};
}

LoadedData load_csv(const std::filesystem::path& path, const Schema& schema,
                    const CsvReference* reference) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open data file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), schema, reference);
}

}  // namespace ufi
