#include "ufi/serialize.hpp"

#include <charconv>
#include <cmath>

namespace ufi {

using nlohmann::json;

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

json tree_to_json(const Tree& tree) {
  json nodes = json::array();
  for (std::size_t id = 0; id < tree.size(); ++id) {
    const auto& node = tree.node(id);
    json j;
    j["id"] = id;
    j["depth"] = node.depth;
    j["n"] = node.stats.n;
    j["weight"] = node.stats.weight;
    j["impurity"] = impurity(node.stats, tree.criterion());
    if (tree.task() == Task::classification) {
      j["class_counts"] = node.stats.class_counts;
    } else {
      j["mean"] = node.stats.mean;
      j["sum_sq"] = node.stats.sum_sq;
      j["sse"] = node.stats.sse;
      j["abs_dev"] = node.stats.abs_dev;
    }
    if (node.split) {
      j["split"] = {{"feature", node.split->feature},
                    {"threshold", node.split->threshold}};
    } else {
      j["split"] = nullptr;
    }
    j["left"] = node.left;
    j["right"] = node.right;
    j["train_decrease"] = node.train_decrease;
    nodes.push_back(std::move(j));
  }
  return {{"format", kTreeFormat},
          {"task", to_string(tree.task())},
          {"criterion", to_string(tree.criterion())},
          {"n_features", tree.n_features()},
          {"n_classes", tree.n_classes()},
          {"nodes", std::move(nodes)}};
}

Tree tree_from_json(const json& doc) {
  try {
    if (doc.at("format").get<std::string>() != kTreeFormat) {
      throw DataError("unsupported tree format " + doc["format"].dump());
    }
    const auto task = parse_task(doc.at("task").get<std::string>());
    const auto criterion =
        parse_criterion(doc.at("criterion").get<std::string>());
    std::vector<TreeNode> nodes;
    for (const auto& j : doc.at("nodes")) {
      TreeNode node;
      node.depth = j.at("depth").get<int>();
      node.stats.n = j.at("n").get<std::size_t>();
      node.stats.weight = j.at("weight").get<double>();
      if (task == Task::classification) {
        node.stats.class_counts =
            j.at("class_counts").get<std::vector<std::int64_t>>();
      } else {
        node.stats.mean = j.at("mean").get<double>();
        node.stats.sum_sq = j.at("sum_sq").get<double>();
        node.stats.sse = j.at("sse").get<double>();
        node.stats.abs_dev = j.at("abs_dev").get<double>();
      }
      if (!j.at("split").is_null()) {
        node.split = Split{j["split"].at("feature").get<std::size_t>(),
                           j["split"].at("threshold").get<double>()};
      }
      node.left = j.at("left").get<std::int32_t>();
      node.right = j.at("right").get<std::int32_t>();
      node.train_decrease = j.at("train_decrease").get<double>();
      nodes.push_back(std::move(node));
    }
    return Tree(task, doc.at("n_classes").get<int>(),
                doc.at("n_features").get<std::size_t>(), criterion,
                std::move(nodes));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed tree JSON: ") + e.what());
  }
}

json forest_config_to_json(const ForestConfig& config) {
  json max_depth = nullptr;
  if (config.tree.max_depth) max_depth = *config.tree.max_depth;
  return {{"n_trees", config.n_trees},
          {"bootstrap", config.bootstrap},
          {"seed", config.seed},
          {"criterion", to_string(config.tree.criterion)},
          {"max_depth", max_depth},
          {"min_samples_split", config.tree.min_samples_split},
          {"min_samples_leaf", config.tree.min_samples_leaf},
          {"max_features", config.tree.max_features.to_string()}};
}

ForestConfig forest_config_from_json(const json& doc) {
  ForestConfig config;
  config.n_trees = doc.at("n_trees").get<std::size_t>();
  config.bootstrap = doc.at("bootstrap").get<bool>();
  config.seed = doc.at("seed").get<std::uint64_t>();
  config.tree.criterion =
      parse_criterion(doc.at("criterion").get<std::string>());
  if (!doc.at("max_depth").is_null()) {
    config.tree.max_depth = doc["max_depth"].get<int>();
  }
  config.tree.min_samples_split = doc.at("min_samples_split").get<int>();
  config.tree.min_samples_leaf = doc.at("min_samples_leaf").get<int>();
  config.tree.max_features =
      MaxFeatures::parse(doc.at("max_features").get<std::string>());
  return config;
}

json forest_to_json(const Forest& forest) {
  json trees = json::array();
  for (const auto& t : forest.trees()) trees.push_back(tree_to_json(t));
  json in_bag = json::array();
  json oob = json::array();
  for (std::size_t b = 0; b < forest.size(); ++b) {
    in_bag.push_back(forest.in_bag(b));
    oob.push_back(forest.oob(b));
  }
  return {{"format", kForestFormat},
          {"config", forest_config_to_json(forest.config())},
          {"n_train_rows", forest.n_train_rows()},
          {"trees", std::move(trees)},
          {"in_bag", std::move(in_bag)},
          {"oob", std::move(oob)}};
}

Forest forest_from_json(const json& doc) {
  try {
    if (doc.at("format").get<std::string>() != kForestFormat) {
      throw DataError("unsupported model format " + doc["format"].dump());
    }
    std::vector<Tree> trees;
    for (const auto& t : doc.at("trees")) trees.push_back(tree_from_json(t));
    return Forest(
        forest_config_from_json(doc.at("config")), std::move(trees),
        doc.at("in_bag").get<std::vector<std::vector<std::size_t>>>(),
        doc.at("oob").get<std::vector<std::vector<std::size_t>>>(),
        doc.at("n_train_rows").get<std::size_t>());
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model JSON: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("malformed model JSON: ") + e.what());
  }
}

json report_to_json(const ImportanceReport& report) {
  return {{"method", to_string(report.method)},
          {"features", report.feature_names},
          {"scores", report.scores},
          {"sd", report.sd_across_trees()},
          {"skipped_nodes", report.skipped_nodes},
          {"n_trees", report.n_trees}};
}

std::string report_to_csv(const ImportanceReport& report) {
  const auto sd = report.sd_across_trees();
  std::string out = "feature,score,sd\n";
  for (std::size_t j = 0; j < report.scores.size(); ++j) {
    out += csv_field(report.feature_names[j]);
    out += ',';
    out += format_real(report.scores[j]);
    out += ',';
    out += format_real(sd[j]);
    out += '\n';
  }
  return out;
}

}  // namespace ufi
