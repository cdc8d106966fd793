#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ufi/common.hpp"
#include "ufi/csv.hpp"
#include "ufi/dataset.hpp"
#include "ufi/forest.hpp"
#include "ufi/importance.hpp"
#include "ufi/serialize.hpp"
#include "ufi/simulation.hpp"

namespace ufi::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kModelFile = "model.json";
constexpr const char* kManifestFile = "manifest.json";

// ---------------------------------------------------------------------------
// flag groups

struct DataFlags {
  std::string data;
  std::string schema;
  std::string target;
  std::string task;
  std::vector<std::string> categorical;
  std::vector<std::string> binary;
  std::vector<std::string> ordinal;
  std::vector<std::string> drop;
  std::string encoding = "dummy";
  bool inject_random = false;
};

struct ForestFlags {
  std::size_t trees = 100;
  std::string max_depth = "none";
  std::string max_features;  // empty: task default
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  std::string criterion;  // empty: task default
  bool bootstrap = true;
  std::uint64_t seed = 0;
  int threads = 1;
};

void add_data_flags(CLI::App* cmd, DataFlags& f) {
  cmd->add_option("--data", f.data, "Training CSV file");
  cmd->add_option("--schema", f.schema, "Schema JSON sidecar");
  cmd->add_option("--target", f.target, "Target column (overrides schema)");
  cmd->add_option("--categorical", f.categorical, "Categorical columns")
      ->delimiter(',');
  cmd->add_option("--binary", f.binary, "Binary columns")->delimiter(',');
  cmd->add_option("--ordinal", f.ordinal, "Ordinal columns")->delimiter(',');
  cmd->add_option("--drop", f.drop, "Columns to ignore")->delimiter(',');
  cmd->add_option("--encoding", f.encoding, "dummy or ordinal")
      ->check(CLI::IsMember({"dummy", "ordinal"}));
  cmd->add_flag("--inject-random", f.inject_random,
                "Append an N(0,1) column named 'random'");
}

void add_forest_flags(CLI::App* cmd, ForestFlags& f) {
  cmd->add_option("--trees", f.trees, "Number of trees")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-depth", f.max_depth, "Depth limit or 'none'");
  cmd->add_option("--max-features", f.max_features,
                  "all, sqrt, a fraction in (0,1] or a count");
  cmd->add_option("--min-samples-split", f.min_samples_split)
      ->check(CLI::PositiveNumber);
  cmd->add_option("--min-samples-leaf", f.min_samples_leaf)
      ->check(CLI::PositiveNumber);
  cmd->add_option("--criterion", f.criterion,
                  "gini, entropy, misclassification, mse or mae");
  cmd->add_option("--bootstrap", f.bootstrap, "true or false");
  cmd->add_option("--seed", f.seed, "Master seed (drawn when absent)");
  cmd->add_option("--threads", f.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
}

ForestConfig resolve_forest(const ForestFlags& f, Task task,
                            std::uint64_t seed) {
  ForestConfig config = default_forest_config(task);
  config.n_trees = f.trees;
  config.bootstrap = f.bootstrap;
  config.seed = seed;
  if (f.max_depth != "none") {
    try {
      std::size_t used = 0;
      const int depth = std::stoi(f.max_depth, &used);
      if (used != f.max_depth.size() || depth < 0) throw std::exception();
      config.tree.max_depth = depth;
    } catch (const std::exception&) {
      throw UsageError("--max-depth must be a non-negative integer or 'none'");
    }
  }
  if (!f.max_features.empty()) {
    config.tree.max_features = MaxFeatures::parse(f.max_features);
  }
  if (!f.criterion.empty()) {
    config.tree.criterion = parse_criterion(f.criterion);
    if (task_of(config.tree.criterion) != task) {
      throw UsageError("criterion '" + f.criterion + "' does not fit task " +
                       std::string(to_string(task)));
    }
  }
  config.tree.min_samples_split = f.min_samples_split;
  config.tree.min_samples_leaf = f.min_samples_leaf;
  return config;
}

std::uint64_t resolve_seed(const CLI::App* cmd, std::uint64_t flag) {
  if (cmd->count("--seed") > 0) return flag;
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

// ---------------------------------------------------------------------------
// data handling

std::string kind_name(FeatureKind::Tag tag) {
  switch (tag) {
    case FeatureKind::Tag::continuous:
      return "continuous";
    case FeatureKind::Tag::binary:
      return "binary";
    case FeatureKind::Tag::categorical:
      return "categorical";
    case FeatureKind::Tag::ordinal:
      return "ordinal";
  }
  return "continuous";
}

Schema resolve_schema(const DataFlags& f, std::optional<Task> task) {
  Schema schema;
  if (!f.schema.empty()) {
    schema = load_schema(f.schema);
    if (!task) task = schema.task;
  }
  if (!f.target.empty()) schema.target = f.target;
  if (schema.target.empty()) {
    throw UsageError("no target column: pass --target or a schema");
  }
  if (!task) throw UsageError("--task is required");
  schema.task = *task;
  for (const auto& c : f.categorical) {
    schema.kinds[c] = FeatureKind::Tag::categorical;
  }
  for (const auto& c : f.binary) schema.kinds[c] = FeatureKind::Tag::binary;
  for (const auto& c : f.ordinal) schema.kinds[c] = FeatureKind::Tag::ordinal;
  for (const auto& c : f.drop) schema.drop.push_back(c);
  return schema;
}

// Schema that reloads any CSV with the training file's level codes and class
// indices.
json frozen_schema(const Schema& schema, const LoadedData& loaded) {
  const auto& data = loaded.data;
  json columns = json::object();
  for (std::size_t j = 0; j < data.n_features(); ++j) {
    const auto& kind = data.kinds()[j];
    if (kind.tag == FeatureKind::Tag::binary ||
        kind.tag == FeatureKind::Tag::categorical) {
      columns[data.names()[j]] = {{"kind", kind_name(kind.tag)},
                                  {"levels", data.levels()[j]}};
    } else {
      columns[data.names()[j]] = kind_name(kind.tag);
    }
  }
  json doc = {{"target", schema.target},
              {"task", to_string(schema.task)},
              {"columns", columns},
              {"drop", schema.drop}};
  if (schema.task == Task::classification) doc["classes"] = loaded.class_labels;
  return doc;
}

struct Prepared {
  LoadedData loaded;
  Dataset data;  // encoded, probe appended
  DummyGroupMap map;
};

Prepared prepare(LoadedData loaded, Encoding encoding,
                 std::optional<std::uint64_t> random_seed) {
  DummyGroupMap map;
  Dataset data = loaded.data;
  if (encoding == Encoding::dummy) {
    auto encoded = dummy_encode(loaded.data);
    data = std::move(encoded.first);
    map = std::move(encoded.second);
  } else {
    data = as_ordinal(loaded.data);
  }
  if (random_seed) data = inject_random_feature(data, *random_seed);
  return {std::move(loaded), std::move(data), std::move(map)};
}

json groups_to_json(const DummyGroupMap& map) {
  json groups = json::array();
  for (const auto& [name, cols] : map.groups) {
    groups.push_back({{"name", name}, {"columns", cols}});
  }
  return groups;
}

DummyGroupMap groups_from_json(const json& doc) {
  DummyGroupMap map;
  for (const auto& g : doc) {
    map.groups.emplace_back(g.at("name").get<std::string>(),
                            g.at("columns").get<std::vector<std::size_t>>());
  }
  return map;
}

json fingerprint_json(const Dataset& data) {
  std::ostringstream hash;
  hash << std::hex << data.fingerprint();
  return {{"rows", data.n_rows()},
          {"columns", data.n_features()},
          {"hash", hash.str()}};
}

// ---------------------------------------------------------------------------
// output

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

void write_json(const fs::path& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + out);
  return dir;
}

class Manifest {
 public:
  Manifest(std::string command, int argc, const char* const* argv)
      : start_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    json args = json::array();
    for (int i = 0; i < argc; ++i) args.push_back(argv[i]);
    doc_["argv"] = std::move(args);
    doc_["version"] = std::string(kVersion);
  }

  json& operator[](const char* key) { return doc_[key]; }

  void write(const fs::path& dir) {
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start_;
    doc_["duration_seconds"] = elapsed.count();
    write_json(dir / kManifestFile, doc_);
  }

 private:
  json doc_;
  std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------------------
// train

struct TrainFlags {
  DataFlags data;
  ForestFlags forest;
  std::string out;
};

struct TrainedModel {
  Forest forest;
  Prepared prepared;
  json model;  // forest JSON plus data block
  std::uint64_t seed = 0;
};

std::optional<Task> task_flag(const DataFlags& f) {
  if (f.task.empty()) return std::nullopt;
  return parse_task(f.task);
}

TrainedModel train_model(const DataFlags& df, const ForestFlags& ff,
                         std::uint64_t seed) {
  if (df.data.empty()) throw UsageError("--data is required");
  const Schema schema = resolve_schema(df, task_flag(df));
  LoadedData loaded = load_csv(df.data, schema);
  const Encoding encoding = parse_encoding(df.encoding);
  std::optional<std::uint64_t> random_seed;
  if (df.inject_random) random_seed = derive_seed(seed, kProbeStream, 0);
  json frozen = frozen_schema(schema, loaded);
  Prepared prepared = prepare(std::move(loaded), encoding, random_seed);

  const ForestConfig config = resolve_forest(ff, schema.task, seed);
  config.tree.validate(prepared.data.n_features());
  Forest forest = fit(prepared.data, config, ff.threads);

  json model = forest_to_json(forest);
  json random = nullptr;
  if (random_seed) random = *random_seed;
  model["data"] = {{"schema", std::move(frozen)},
                   {"feature_names", prepared.loaded.data.names()},
                   {"encoding", std::string(to_string(encoding))},
                   {"encoded_names", prepared.data.names()},
                   {"groups", groups_to_json(prepared.map)},
                   {"random_seed", random},
                   {"class_labels", prepared.loaded.class_labels},
                   {"fingerprint", fingerprint_json(prepared.data)}};
  return {std::move(forest), std::move(prepared), std::move(model), seed};
}

int cmd_train(const CLI::App* cmd, const TrainFlags& flags, int argc,
              const char* const* argv, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(cmd, flags.forest.seed);
  Manifest manifest("train", argc, argv);
  auto trained = train_model(flags.data, flags.forest, seed);
  const fs::path dir = prepare_out_dir(flags.out);
  write_json(dir / kModelFile, trained.model);

  manifest["seed"] = seed;
  manifest["config"] = {
      {"forest", forest_config_to_json(trained.forest.config())},
      {"data", flags.data.data},
      {"schema", trained.model["data"]["schema"]},
      {"encoding", flags.data.encoding},
      {"inject_random", flags.data.inject_random},
      {"threads", flags.forest.threads}};
  manifest["dataset"] = trained.model["data"]["fingerprint"];
  manifest["class_labels"] = trained.prepared.loaded.class_labels;
  manifest["outputs"] = {kModelFile};
  manifest.write(dir);
  out << "wrote " << (dir / kModelFile).string() << " ("
      << trained.forest.size() << " trees)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// importance

struct ImportanceFlags {
  DataFlags data;
  ForestFlags forest;
  std::string model;
  std::string method = "ufi";
  std::string test = "oob";
  bool fold_dummies = false;
  std::size_t reps = 1;
  int permutation_repeats = 1;
  std::string out;
};

struct ModelBundle {
  Forest forest;
  Prepared prepared;  // training data as the model saw it
  std::optional<Prepared> test;
  std::uint64_t seed = 0;
};

Prepared load_with_model(const json& data_block, const std::string& path) {
  const Schema schema = parse_schema(data_block.at("schema").dump());
  LoadedData loaded = load_csv(path, schema);
  const auto names = data_block.at("feature_names").get<std::vector<std::string>>();
  if (loaded.data.names() != names) {
    throw DataError("columns of " + path + " do not match the model");
  }
  std::optional<std::uint64_t> random_seed;
  if (!data_block.at("random_seed").is_null()) {
    random_seed = data_block["random_seed"].get<std::uint64_t>();
  }
  return prepare(std::move(loaded),
                 parse_encoding(data_block.at("encoding").get<std::string>()),
                 random_seed);
}

// Test rows get their own probe draws, derived from the training probe seed.
Prepared load_test(const std::vector<std::string>& feature_names,
                   const std::string& path, const json& frozen_schema_doc,
                   Encoding encoding,
                   std::optional<std::uint64_t> train_random_seed) {
  const Schema schema = parse_schema(frozen_schema_doc.dump());
  LoadedData loaded = load_csv(path, schema);
  std::optional<std::uint64_t> random_seed;
  if (train_random_seed) {
    random_seed = derive_seed(*train_random_seed, kProbeStream, 1);
  }
  if (loaded.data.names() != feature_names) {
    throw DataError("columns of " + path + " do not match the training data");
  }
  return prepare(std::move(loaded), encoding, random_seed);
}

ImportanceReport score(const ModelBundle& bundle, ImportanceMethod method,
                       int permutation_repeats, std::uint64_t seed) {
  const auto& names = bundle.prepared.data.names();
  switch (method) {
    case ImportanceMethod::si:
      return si_forest(bundle.forest, names);
    case ImportanceMethod::ufi:
      return bundle.test ? ufi_forest_test(bundle.forest, bundle.test->data)
                         : ufi_forest_oob(bundle.forest, bundle.prepared.data);
    case ImportanceMethod::permutation: {
      PermutationOptions options;
      options.repeats = permutation_repeats;
      options.seed = derive_seed(seed, kPermutationStream, 0);
      if (bundle.test) {
        options.mode = PermutationMode::test_set;
        return permutation_importance(bundle.forest, bundle.test->data, names,
                                      options);
      }
      return permutation_importance(bundle.forest, bundle.prepared.data, names,
                                    options);
    }
  }
  throw UsageError("unknown method");
}

int cmd_importance(const CLI::App* cmd, const ImportanceFlags& flags, int argc,
                   const char* const* argv, std::ostream& out) {
  const ImportanceMethod method = parse_method(flags.method);
  const bool oob = flags.test == "oob";
  Manifest manifest("importance", argc, argv);
  std::vector<ImportanceReport> reports;
  std::vector<std::string> class_labels;
  json dataset_json;
  json config;
  std::uint64_t seed = 0;
  std::optional<DummyGroupMap> map;

  if (!flags.model.empty()) {
    for (const char* flag : {"--trees", "--max-depth", "--max-features",
                             "--criterion", "--bootstrap", "--seed",
                             "--inject-random", "--reps", "--encoding"}) {
      if (cmd->count(flag) > 0) {
        throw UsageError(std::string(flag) + " cannot be combined with --model");
      }
    }
    std::ifstream in(flags.model, std::ios::binary);
    if (!in) throw DataError("cannot open model file " + flags.model);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw DataError(std::string("malformed model file: ") + e.what());
    }
    Forest forest = forest_from_json(doc);
    if (!doc.contains("data")) throw DataError("model file lacks a data block");
    const json& block = doc["data"];
    seed = forest.config().seed;
    if (method != ImportanceMethod::si && oob && flags.data.data.empty()) {
      throw UsageError("--test oob with --model needs the training --data");
    }
    std::optional<Prepared> train;
    if (!flags.data.data.empty()) {
      train = load_with_model(block, flags.data.data);
      if (fingerprint_json(train->data) != block.at("fingerprint")) {
        throw DataError("--data differs from the data the model was fit on");
      }
    } else {
      // SI needs only the names and groups stored in the model.
      const auto names = block.at("encoded_names").get<std::vector<std::string>>();
      std::vector<std::vector<double>> zeros(names.size(),
                                             std::vector<double>(1, 0.0));
      std::vector<FeatureKind> kinds(names.size(), FeatureKind::continuous());
      const Task task = forest.task();
      Dataset placeholder(std::move(zeros), {0.0}, names, kinds, task,
                          task == Task::classification ? forest.n_classes() : 0);
      train = Prepared{LoadedData{placeholder, {}}, placeholder,
                       groups_from_json(block.at("groups"))};
    }
    map = groups_from_json(block.at("groups"));
    ModelBundle bundle{std::move(forest), std::move(*train), std::nullopt, seed};
    if (!oob) {
      std::optional<std::uint64_t> random_seed;
      if (!block.at("random_seed").is_null()) {
        random_seed = block["random_seed"].get<std::uint64_t>();
      }
      Prepared test = load_test(
          block.at("feature_names").get<std::vector<std::string>>(),
          flags.test, block.at("schema"),
                                parse_encoding(block.at("encoding").get<std::string>()),
                                random_seed);
      bundle.test = std::move(test);
    }
    reports.push_back(score(bundle, method, flags.permutation_repeats, seed));
    class_labels = block.at("class_labels").get<std::vector<std::string>>();
    dataset_json = block.at("fingerprint");
    config = {{"model", flags.model},
              {"forest", doc.at("config")},
              {"data_block", block.at("schema")}};
  } else {
    seed = resolve_seed(cmd, flags.forest.seed);
    if (flags.data.task.empty() && flags.data.schema.empty()) {
      throw UsageError("--task is required");
    }
    for (std::size_t rep = 0; rep < flags.reps; ++rep) {
      const std::uint64_t rep_seed =
          flags.reps == 1 ? seed : derive_seed(seed, kRepStream, rep);
      auto trained = train_model(flags.data, flags.forest, rep_seed);
      ModelBundle bundle{std::move(trained.forest), std::move(trained.prepared),
                         std::nullopt, rep_seed};
      if (!oob) {
        std::optional<std::uint64_t> random_seed;
        if (!trained.model["data"]["random_seed"].is_null()) {
          random_seed = trained.model["data"]["random_seed"].get<std::uint64_t>();
        }
        bundle.test = load_test(bundle.prepared.loaded.data.names(), flags.test,
                                trained.model["data"]["schema"],
                                parse_encoding(flags.data.encoding), random_seed);
      }
      reports.push_back(score(bundle, method, flags.permutation_repeats, rep_seed));
      if (rep == 0) {
        map = bundle.prepared.map;
        class_labels = bundle.prepared.loaded.class_labels;
        dataset_json = trained.model["data"]["fingerprint"];
        config = {{"forest", forest_config_to_json(bundle.forest.config())},
                  {"data", flags.data.data},
                  {"schema", trained.model["data"]["schema"]},
                  {"encoding", flags.data.encoding},
                  {"inject_random", flags.data.inject_random},
                  {"reps", flags.reps}};
      }
    }
  }

  if (flags.fold_dummies && map) {
    for (auto& r : reports) r = r.folded(*map);
  }

  // Across repetitions the reported spread is the SD over reps; a single run
  // reports the SD over trees.
  ImportanceReport summary = reports.front();
  if (reports.size() > 1) {
    summary.per_tree.clear();
    for (const auto& r : reports) summary.per_tree.push_back(r.scores);
    std::fill(summary.scores.begin(), summary.scores.end(), 0.0);
    summary.skipped_nodes = 0;
    for (const auto& r : reports) {
      for (std::size_t j = 0; j < r.scores.size(); ++j) {
        summary.scores[j] += r.scores[j];
      }
      summary.skipped_nodes += r.skipped_nodes;
    }
    for (auto& s : summary.scores) s /= static_cast<double>(reports.size());
  }

  const fs::path dir = prepare_out_dir(flags.out);
  write_text(dir / "importance.csv", report_to_csv(summary));
  json report_json = report_to_json(summary);
  report_json["test"] = oob ? "oob" : "file";
  report_json["reps"] = reports.size();
  report_json["folded"] = flags.fold_dummies && map.has_value();
  write_json(dir / "importance.json", report_json);
  std::vector<std::string> outputs = {"importance.csv", "importance.json"};
  if (reports.size() > 1) {
    std::string tidy = "rep,feature,score\n";
    for (std::size_t rep = 0; rep < reports.size(); ++rep) {
      const auto& r = reports[rep];
      for (std::size_t j = 0; j < r.scores.size(); ++j) {
        tidy += std::to_string(rep) + "," + csv_field(r.feature_names[j]) +
                "," + format_real(r.scores[j]) + "\n";
      }
    }
    write_text(dir / "importance_reps.csv", tidy);
    outputs.emplace_back("importance_reps.csv");
  }

  config["method"] = flags.method;
  config["test"] = flags.test;
  config["fold_dummies"] = flags.fold_dummies;
  config["permutation_repeats"] = flags.permutation_repeats;
  config["threads"] = flags.forest.threads;
  manifest["seed"] = seed;
  manifest["config"] = config;
  manifest["dataset"] = dataset_json;
  manifest["class_labels"] = class_labels;
  manifest["outputs"] = outputs;
  manifest.write(dir);

  out << "feature,score\n";
  for (std::size_t j = 0; j < summary.scores.size(); ++j) {
    out << summary.feature_names[j] << ',' << format_real(summary.scores[j])
        << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateFlags {
  ForestFlags forest;
  std::string scenario = "null-mixed";
  double rho = 0.0;
  std::string task = "classification";
  std::size_t reps = 100;
  std::size_t n = 1000;
  std::string encoding = "dummy";
  std::vector<std::string> methods = {"si", "ufi"};
  std::string out;
};

int cmd_simulate(const CLI::App* cmd, const SimulateFlags& flags, int argc,
                 const char* const* argv, std::ostream& out) {
  SimSetting setting;
  setting.scenario = parse_scenario(flags.scenario);
  setting.rho = flags.rho;
  setting.task = parse_task(flags.task);
  setting.encoding = parse_encoding(flags.encoding);
  setting.n = flags.n;
  setting.reps = flags.reps;
  setting.seed = resolve_seed(cmd, flags.forest.seed);
  setting.validate();
  std::vector<ImportanceMethod> methods;
  for (const auto& m : flags.methods) methods.push_back(parse_method(m));
  const ForestConfig config =
      resolve_forest(flags.forest, setting.task, setting.seed);

  Manifest manifest("simulate", argc, argv);
  const auto results =
      run_experiment(setting, config, methods, flags.forest.threads);

  const fs::path dir = prepare_out_dir(flags.out);
  std::string tidy = "rep,method,feature,score\n";
  json summary = json::object();
  for (const auto& r : results) {
    const std::string method(to_string(r.method));
    for (std::size_t rep = 0; rep < r.scores.size(); ++rep) {
      for (std::size_t j = 0; j < r.features.size(); ++j) {
        tidy += std::to_string(rep) + "," + method + "," +
                csv_field(r.features[j]) + "," + format_real(r.scores[rep][j]) +
                "\n";
      }
    }
    summary[method] = {{"features", r.features},
                       {"mean", r.mean},
                       {"sd", r.sd},
                       {"se", r.standard_error()},
                       {"avg_rank", r.avg_rank}};
  }
  write_text(dir / "scores.csv", tidy);
  json setting_json = {{"scenario", flags.scenario},
                       {"rho", setting.rho},
                       {"task", flags.task},
                       {"encoding", flags.encoding},
                       {"n", setting.n},
                       {"reps", setting.reps},
                       {"seed", setting.seed},
                       {"methods", flags.methods}};
  write_json(dir / "summary.json",
             {{"setting", setting_json}, {"methods", summary}});

  manifest["seed"] = setting.seed;
  manifest["config"] = {{"setting", setting_json},
                        {"forest", forest_config_to_json(config)},
                        {"threads", flags.forest.threads}};
  manifest["dataset"] = nullptr;
  manifest["class_labels"] =
      setting.task == Task::classification ? json{"0", "1"} : json::array();
  manifest["outputs"] = {"scores.csv", "summary.json"};
  manifest.write(dir);

  for (const auto& r : results) {
    out << to_string(r.method) << " avg_rank:";
    for (std::size_t j = 0; j < r.features.size(); ++j) {
      out << ' ' << r.features[j] << '=' << format_real(r.avg_rank[j]);
    }
    out << '\n';
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Random forests with bias-corrected split-improvement importance",
               "ufi"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  TrainFlags train;
  train.forest.threads = default_threads();
  auto* train_cmd = app.add_subcommand("train", "Fit a forest on a CSV file");
  add_data_flags(train_cmd, train.data);
  train_cmd->add_option("--task", train.data.task, "classification or regression")
      ->required();
  add_forest_flags(train_cmd, train.forest);
  train_cmd->add_option("--out", train.out, "Output directory")->required();

  ImportanceFlags imp;
  imp.forest.threads = default_threads();
  auto* imp_cmd =
      app.add_subcommand("importance", "Compute feature importance scores");
  imp_cmd->add_option("--model", imp.model, "Model file written by train");
  add_data_flags(imp_cmd, imp.data);
  imp_cmd->add_option("--task", imp.data.task, "classification or regression");
  add_forest_flags(imp_cmd, imp.forest);
  imp_cmd->add_option("--method", imp.method, "si, ufi or permutation")
      ->check(CLI::IsMember({"si", "ufi", "permutation"}));
  imp_cmd->add_option("--test", imp.test, "'oob' or a held-out CSV file");
  imp_cmd->add_flag("--fold-dummies", imp.fold_dummies,
                    "Sum dummy-column scores per original feature");
  imp_cmd->add_option("--reps", imp.reps, "Refit with this many seeds")
      ->check(CLI::PositiveNumber);
  imp_cmd->add_option("--permutation-repeats", imp.permutation_repeats)
      ->check(CLI::PositiveNumber);
  imp_cmd->add_option("--out", imp.out, "Output directory")->required();

  SimulateFlags sim;
  sim.forest.threads = default_threads();
  auto* sim_cmd =
      app.add_subcommand("simulate", "Run a synthetic importance experiment");
  sim_cmd->add_option("--scenario", sim.scenario)
      ->check(CLI::IsMember({"null-mixed", "signal", "discrete10", "probe"}));
  sim_cmd->add_option("--rho", sim.rho, "Signal strength in [0, 1]")
      ->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--task", sim.task)
      ->check(CLI::IsMember({"classification", "regression"}));
  sim_cmd->add_option("--reps", sim.reps)->check(CLI::PositiveNumber);
  sim_cmd->add_option("--n", sim.n)->check(CLI::Range(10, 100000000));
  sim_cmd->add_option("--encoding", sim.encoding)
      ->check(CLI::IsMember({"dummy", "ordinal"}));
  sim_cmd->add_option("--methods", sim.methods, "Comma-separated methods")
      ->delimiter(',')
      ->check(CLI::IsMember({"si", "ufi", "permutation"}));
  add_forest_flags(sim_cmd, sim.forest);
  sim_cmd->add_option("--out", sim.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (train_cmd->parsed()) {
      return cmd_train(train_cmd, train, argc, argv, out);
    }
    if (imp_cmd->parsed()) {
      return cmd_importance(imp_cmd, imp, argc, argv, out);
    }
    return cmd_simulate(sim_cmd, sim, argc, argv, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ufi::cli
