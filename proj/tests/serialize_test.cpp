#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "oracle.hpp"
#include "ufi/serialize.hpp"

using namespace ufi;

TEST(Serialize, TreeRoundTrip) {
  std::mt19937_64 gen(1);
  for (Task task : {Task::classification, Task::regression}) {
    const auto d = oracle::random_dataset(gen, 120, 3, task);
    std::vector<std::size_t> rows(d.n_rows());
    std::iota(rows.begin(), rows.end(), 0);
    TreeConfig c;
    c.criterion = default_criterion(task);
    const Tree t = grow(d, rows, c);
    const auto doc = tree_to_json(t);
    EXPECT_EQ(doc["format"], "ufitree/1");
    EXPECT_EQ(tree_from_json(doc), t);
    EXPECT_EQ(tree_from_json(nlohmann::json::parse(doc.dump())), t);
  }
}

TEST(Serialize, ForestRoundTrip) {
  std::mt19937_64 gen(2);
  const auto d = oracle::random_dataset(gen, 100, 4, Task::classification, 3);
  ForestConfig c;
  c.n_trees = 5;
  c.tree.max_depth = 3;
  c.tree.max_features = MaxFeatures::of_fraction(0.5);
  c.seed = 42;
  const Forest f = fit(d, c);
  const auto text = forest_to_json(f).dump();
  const Forest back = forest_from_json(nlohmann::json::parse(text));
  EXPECT_EQ(back, f);
  EXPECT_EQ(forest_to_json(back).dump(), text);
}

TEST(Serialize, MalformedInputIsDataError) {
  EXPECT_THROW(tree_from_json(nlohmann::json{{"format", "other"}}), DataError);
  EXPECT_THROW(forest_from_json(nlohmann::json{{"format", "ufiforest/1"}}),
               DataError);
}

TEST(Serialize, ReportFormats) {
  ImportanceReport r;
  r.method = ImportanceMethod::ufi;
  r.feature_names = {"a", "b,c"};
  r.scores = {0.25, -0.1};
  r.per_tree = {{0.0, 0.0}, {0.5, -0.2}};
  r.skipped_nodes = 3;
  r.n_trees = 2;
  const auto csv = report_to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "feature,score,sd");
  EXPECT_NE(csv.find("\"b,c\",-0.1,"), std::string::npos);
  const auto doc = report_to_json(r);
  EXPECT_EQ(doc["method"], "ufi");
  EXPECT_EQ(doc["skipped_nodes"], 3);
  EXPECT_EQ(doc["n_trees"], 2);
}

TEST(Serialize, RealFormattingRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678}) {
    EXPECT_EQ(std::stod(format_real(v)), v);
  }
  EXPECT_EQ(format_real(0.5), "0.5");
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a\"b"), "\"a\"\"b\"");
}
