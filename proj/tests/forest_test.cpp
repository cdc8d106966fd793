#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracle.hpp"
#include "ufi/forest.hpp"
#include "ufi/simulation.hpp"

using namespace ufi;

namespace {

Tree leaf_tree(Task task, std::vector<std::int64_t> counts, double mean) {
  TreeNode node;
  node.stats.weight = 1.0;
  if (task == Task::classification) {
    node.stats.class_counts = counts;
    node.stats.n = static_cast<std::size_t>(
        std::accumulate(counts.begin(), counts.end(), std::int64_t{0}));
  } else {
    node.stats.n = 1;
    node.stats.mean = mean;
  }
  const int k = task == Task::classification ? static_cast<int>(counts.size()) : 0;
  return Tree(task, k, 1,
              task == Task::classification ? Criterion::gini : Criterion::mse,
              {node});
}

}  // namespace

TEST(Bootstrap, SingleRow) {
  std::mt19937_64 rng(1);
  const auto s = bootstrap_indices(1, rng);
  EXPECT_EQ(s.in_bag, (std::vector<std::size_t>{0}));
  EXPECT_TRUE(s.oob.empty());
}

TEST(Bootstrap, OutOfBagFractionNearClosedForm) {
  constexpr std::size_t n = 1000;
  std::mt19937_64 rng(77);
  double total = 0.0;
  for (int draw = 0; draw < 200; ++draw) {
    total += static_cast<double>(bootstrap_indices(n, rng).oob.size()) / n;
  }
  const double expected = std::pow(1.0 - 1.0 / n, static_cast<double>(n));
  EXPECT_NEAR(total / 200.0, expected, 0.01);
  EXPECT_NEAR(expected, std::exp(-1.0), 1e-3);
}

TEST(Bootstrap, PartitionAndDeterminism) {
  std::mt19937_64 a(5), b(5);
  const auto s = bootstrap_indices(50, a);
  const auto t = bootstrap_indices(50, b);
  EXPECT_EQ(s.in_bag, t.in_bag);
  EXPECT_EQ(s.in_bag.size(), 50u);
  EXPECT_TRUE(std::is_sorted(s.in_bag.begin(), s.in_bag.end()));
  std::vector<int> seen(50, 0);
  for (auto i : s.in_bag) seen[i] = 1;
  for (auto i : s.oob) {
    EXPECT_EQ(seen[i], 0);
    seen[i] = 1;
  }
  for (int v : seen) EXPECT_EQ(v, 1);
}

TEST(Fit, SingleTreeWithoutBootstrapEqualsGrow) {
  std::mt19937_64 gen(2);
  const auto d = oracle::random_dataset(gen, 120, 4, Task::classification);
  ForestConfig c;
  c.n_trees = 1;
  c.bootstrap = false;
  c.tree.max_features = MaxFeatures::all();
  const Forest f = fit(d, c);
  std::vector<std::size_t> rows(d.n_rows());
  std::iota(rows.begin(), rows.end(), 0);
  EXPECT_EQ(f.tree(0), grow(d, rows, c.tree));
  EXPECT_EQ(f.in_bag(0), rows);
  EXPECT_TRUE(f.oob(0).empty());
}

TEST(Fit, NullDesignHasOutOfBagRowsEverywhere) {
  SimSetting s;
  s.seed = 9;
  const auto raw = generate_rep(s, 0);
  const auto d = dummy_encode(raw).first;
  ForestConfig c = default_forest_config(Task::classification);
  c.n_trees = 100;
  c.tree.max_depth = 5;
  const Forest f = fit(d, c, 4);
  ASSERT_EQ(f.size(), 100u);
  for (std::size_t b = 0; b < f.size(); ++b) EXPECT_FALSE(f.oob(b).empty());
}

TEST(Fit, IndependentOfThreadCount) {
  std::mt19937_64 gen(4);
  const auto d = oracle::random_dataset(gen, 300, 5, Task::regression);
  ForestConfig c = default_forest_config(Task::regression);
  c.n_trees = 24;
  c.tree.max_features = MaxFeatures::of_count(2);
  c.seed = 123;
  const Forest serial = fit(d, c, 1);
  EXPECT_EQ(serial, fit(d, c, 3));
  EXPECT_EQ(serial, fit(d, c, 8));
  c.seed = 124;
  EXPECT_FALSE(serial == fit(d, c, 1));
}

TEST(ForestPredict, IdenticalLeavesAndMeans) {
  Dataset x({{0.0}}, {0}, {"x"}, {FeatureKind::continuous()},
            Task::classification, 2);
  std::vector<Tree> trees(3, leaf_tree(Task::classification, {1, 3}, 0));
  Forest f(ForestConfig{}, trees, {{0}, {0}, {0}}, {{}, {}, {}}, 1);
  const auto p = predict(f, x);
  EXPECT_DOUBLE_EQ(p.probabilities[0][0], 0.25);
  EXPECT_DOUBLE_EQ(p.probabilities[0][1], 0.75);
  EXPECT_EQ(p.values[0], 1.0);

  Dataset r({{0.0}}, {0.0}, {"x"}, {FeatureKind::continuous()}, Task::regression);
  ForestConfig rc = default_forest_config(Task::regression);
  Forest g(rc, {leaf_tree(Task::regression, {}, 0.0),
                leaf_tree(Task::regression, {}, 2.0)},
           {{0}, {0}}, {{}, {}}, 1);
  EXPECT_DOUBLE_EQ(predict(g, r).values[0], 1.0);
}

TEST(ForestPredict, ProbabilitiesFormSimplex) {
  std::mt19937_64 gen(6);
  const auto d = oracle::random_dataset(gen, 200, 3, Task::classification, 3);
  ForestConfig c;
  c.n_trees = 15;
  c.tree.max_depth = 4;
  const auto p = predict(fit(d, c), d);
  for (const auto& row : p.probabilities) {
    EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);
  }
}
