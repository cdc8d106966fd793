#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "oracle.hpp"
#include "ufi/tree.hpp"

using namespace ufi;

namespace {

Dataset one_feature(std::vector<double> x, std::vector<double> y, Task task) {
  const int k = task == Task::classification ? 2 : 0;
  return Dataset({std::move(x)}, std::move(y), {"x"},
                 {FeatureKind::continuous()}, task, k);
}

std::vector<std::size_t> all_rows(const Dataset& d) {
  std::vector<std::size_t> rows(d.n_rows());
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

NodeStats counts_stats(std::vector<std::int64_t> counts) {
  NodeStats s;
  s.n = static_cast<std::size_t>(std::accumulate(counts.begin(), counts.end(),
                                                 std::int64_t{0}));
  s.weight = 1.0;
  s.class_counts = std::move(counts);
  return s;
}

}  // namespace

TEST(Impurity, GiniExamples) {
  EXPECT_DOUBLE_EQ(impurity(counts_stats({5, 5}), Criterion::gini), 0.5);
  EXPECT_DOUBLE_EQ(impurity(counts_stats({8, 0}), Criterion::gini), 0.0);
  EXPECT_DOUBLE_EQ(impurity(counts_stats({3, 1}), Criterion::gini),
                   1.0 - (0.75 * 0.75 + 0.25 * 0.25));
}

TEST(Impurity, EntropyAndMisclassification) {
  EXPECT_NEAR(impurity(counts_stats({5, 5}), Criterion::entropy), std::log(2.0),
              1e-15);
  EXPECT_DOUBLE_EQ(impurity(counts_stats({4, 0}), Criterion::entropy), 0.0);
  EXPECT_DOUBLE_EQ(impurity(counts_stats({3, 1}), Criterion::misclassification),
                   0.25);
}

TEST(Impurity, MseExamples) {
  auto flat = one_feature({0, 1, 2}, {1, 1, 1}, Task::regression);
  EXPECT_DOUBLE_EQ(
      impurity(make_node_stats(flat, all_rows(flat), 3), Criterion::mse), 0.0);
  auto pair = one_feature({0, 1}, {0, 2}, Task::regression);
  EXPECT_DOUBLE_EQ(
      impurity(make_node_stats(pair, all_rows(pair), 2), Criterion::mse), 1.0);
}

TEST(Impurity, MaeUsesMedian) {
  auto d = one_feature({0, 1, 2, 3}, {0, 1, 2, 10}, Task::regression);
  // median 1.5: |0-1.5|+|1-1.5|+|2-1.5|+|10-1.5| = 11
  EXPECT_DOUBLE_EQ(impurity(make_node_stats(d, all_rows(d), 4), Criterion::mae),
                   11.0 / 4.0);
}

TEST(Impurity, EmptyNodeThrows) {
  NodeStats empty;
  empty.class_counts = {0, 0};
  EXPECT_THROW(impurity(empty, Criterion::gini), UsageError);
}

TEST(CandidateThresholds, Midpoints) {
  const std::vector<double> a = {1, 2, 4};
  EXPECT_EQ(candidate_thresholds(a), (std::vector<double>{1.5, 3.0}));
  const std::vector<double> b = {7};
  EXPECT_TRUE(candidate_thresholds(b).empty());
  const std::vector<double> c = {0, 1};
  EXPECT_EQ(candidate_thresholds(c), (std::vector<double>{0.5}));
}

TEST(EvaluateSplit, FourPointClassification) {
  auto d = one_feature({1, 2, 3, 4}, {0, 0, 1, 1}, Task::classification);
  auto ev = evaluate_split(d, all_rows(d), Split{0, 2.5}, Criterion::gini, 4);
  ASSERT_TRUE(ev);
  EXPECT_DOUBLE_EQ(ev->loss, 0.0);
  EXPECT_DOUBLE_EQ(ev->decrease, 0.5);
}

TEST(EvaluateSplit, PureNodeHasNoDecrease) {
  auto d = one_feature({1, 2, 3, 4}, {1, 1, 1, 1}, Task::classification);
  auto ev = evaluate_split(d, all_rows(d), Split{0, 2.5}, Criterion::gini, 4);
  ASSERT_TRUE(ev);
  EXPECT_EQ(ev->decrease, 0.0);
}

TEST(EvaluateSplit, RegressionHandValue) {
  auto d = one_feature({1, 2, 3, 4}, {0, 0, 2, 2}, Task::regression);
  auto ev = evaluate_split(d, all_rows(d), Split{0, 2.5}, Criterion::mse, 4);
  ASSERT_TRUE(ev);
  EXPECT_DOUBLE_EQ(ev->decrease, 1.0);
  EXPECT_DOUBLE_EQ(ev->loss, 0.0);
}

TEST(EvaluateSplit, SmallChildRejected) {
  auto d = one_feature({1, 2, 3, 4}, {0, 0, 1, 1}, Task::classification);
  EXPECT_FALSE(
      evaluate_split(d, all_rows(d), Split{0, 1.5}, Criterion::gini, 4, 2));
  EXPECT_FALSE(
      evaluate_split(d, all_rows(d), Split{0, 9.0}, Criterion::gini, 4, 1));
}

TEST(BestSplit, FourPointExample) {
  auto d = one_feature({1, 2, 3, 4}, {0, 0, 1, 1}, Task::classification);
  const std::vector<std::size_t> feats = {0};
  auto best = best_split(d, all_rows(d), feats, Criterion::gini, 1, 4);
  ASSERT_TRUE(best);
  EXPECT_EQ(best->split, (Split{0, 2.5}));
  EXPECT_DOUBLE_EQ(best->decrease, 0.5);
}

TEST(BestSplit, ConstantFeaturesGiveNone) {
  Dataset d({{3, 3, 3, 3}, {1, 1, 1, 1}}, {0, 1, 0, 1}, {"a", "b"},
            {FeatureKind::continuous(), FeatureKind::continuous()},
            Task::classification, 2);
  const std::vector<std::size_t> feats = {0, 1};
  EXPECT_FALSE(best_split(d, all_rows(d), feats, Criterion::gini, 1, 4));
}

TEST(BestSplit, TieGoesToLowerFeatureIndex) {
  Dataset d({{1, 2, 3, 4}, {1, 2, 3, 4}}, {0, 0, 1, 1}, {"a", "b"},
            {FeatureKind::continuous(), FeatureKind::continuous()},
            Task::classification, 2);
  const std::vector<std::size_t> feats = {1, 0};
  auto best = best_split(d, all_rows(d), feats, Criterion::gini, 1, 4);
  ASSERT_TRUE(best);
  EXPECT_EQ(best->split.feature, 0u);
}

TEST(BestSplit, TieGoesToLowerThreshold) {
  // Splitting off either end point yields the same loss.
  auto d = one_feature({1, 2, 3}, {0, 1, 0}, Task::classification);
  const std::vector<std::size_t> feats = {0};
  auto best = best_split(d, all_rows(d), feats, Criterion::gini, 1, 3);
  ASSERT_TRUE(best);
  EXPECT_DOUBLE_EQ(best->split.threshold, 1.5);
}

TEST(BestSplit, MatchesBruteForceOnRandomInstances) {
  std::mt19937_64 rng(20240611);
  const Criterion criteria[] = {Criterion::gini, Criterion::entropy,
                                Criterion::misclassification, Criterion::mse,
                                Criterion::mae};
  for (int trial = 0; trial < 200; ++trial) {
    const Criterion c = criteria[trial % 5];
    const Task task = task_of(c);
    std::uniform_int_distribution<std::size_t> n_draw(2, 50), p_draw(1, 5);
    const auto d = oracle::random_dataset(rng, n_draw(rng), p_draw(rng), task,
                                          trial % 3 == 0 ? 3 : 2);
    const auto rows = all_rows(d);
    std::vector<std::size_t> feats(d.n_features());
    std::iota(feats.begin(), feats.end(), 0);
    const int min_leaf = 1 + trial % 3;
    const auto got = best_split(d, rows, feats, c, min_leaf, rows.size());
    const auto want = oracle::brute_force_split(
        d, rows, feats, c, min_leaf, oracle::tolerance_for(d, rows, c));
    ASSERT_EQ(got.has_value(), want.has_value()) << "trial " << trial;
    if (got) {
      EXPECT_EQ(got->split.feature, want->feature) << "trial " << trial;
      EXPECT_EQ(got->split.threshold, want->threshold) << "trial " << trial;
      EXPECT_NEAR(got->loss, want->loss, 1e-12) << "trial " << trial;
    }
  }
}

TEST(MaxFeatures, ParseAndResolve) {
  EXPECT_EQ(MaxFeatures::parse("all").resolve(37), 37u);
  EXPECT_EQ(MaxFeatures::parse("sqrt").resolve(37), 6u);
  EXPECT_EQ(MaxFeatures::parse("0.5").resolve(10), 5u);
  EXPECT_EQ(MaxFeatures::parse("3").resolve(10), 3u);
  EXPECT_EQ(MaxFeatures::parse("sqrt").resolve(1), 1u);
  EXPECT_THROW(MaxFeatures::parse("lots"), UsageError);
}

TEST(TreeConfig, ValidateRejectsBadValues) {
  TreeConfig c;
  c.min_samples_split = 1;
  EXPECT_THROW(c.validate(3), UsageError);
  c = TreeConfig{};
  c.max_features = MaxFeatures::of_count(4);
  EXPECT_THROW(c.validate(3), UsageError);
  c = TreeConfig{};
  c.max_features = MaxFeatures::of_fraction(1.5);
  EXPECT_THROW(c.validate(3), UsageError);
}

TEST(Grow, DepthZeroIsSingleLeaf) {
  auto d = one_feature({1, 2, 3}, {0, 0, 1}, Task::classification);
  TreeConfig c;
  c.max_depth = 0;
  const Tree t = grow(d, all_rows(d), c);
  ASSERT_EQ(t.size(), 1u);
  const auto p = t.leaf_value(0);
  EXPECT_DOUBLE_EQ(p[0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(p[1], 1.0 / 3.0);
  EXPECT_EQ(predict(t, d).values, (std::vector<double>{0, 0, 0}));
}

TEST(Grow, RegressionSingleLeafPredictsMean) {
  auto d = one_feature({1, 2}, {1, 3}, Task::regression);
  TreeConfig c;
  c.criterion = Criterion::mse;
  c.max_depth = 0;
  EXPECT_EQ(predict(grow(d, all_rows(d), c), d).values,
            (std::vector<double>{2, 2}));
}

TEST(Grow, UnlimitedDepthInterpolatesDistinctRows) {
  std::mt19937_64 rng(5);
  for (Task task : {Task::classification, Task::regression}) {
    std::normal_distribution<double> normal;
    std::vector<double> x(60), y(60);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = normal(rng);
      y[i] = task == Task::classification ? static_cast<double>(rng() % 2)
                                          : normal(rng);
    }
    auto d = one_feature(x, y, task);
    TreeConfig c;
    c.criterion = default_criterion(task);
    const Tree t = grow(d, all_rows(d), c);
    EXPECT_EQ(predict(t, d).values, y);
  }
}

TEST(Grow, FourPointTreeSeparatesExactly) {
  auto d = one_feature({1, 2, 3, 4}, {0, 0, 1, 1}, Task::classification);
  const Tree t = grow(d, all_rows(d), TreeConfig{});
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t.node(0).split, (Split{0, 2.5}));
  EXPECT_EQ(predict(t, d).values, (std::vector<double>{0, 0, 1, 1}));
}

TEST(Grow, SameSeedSameTree) {
  std::mt19937_64 gen(11);
  const auto d = oracle::random_dataset(gen, 200, 5, Task::classification);
  TreeConfig c;
  c.max_features = MaxFeatures::of_count(2);
  std::mt19937_64 a(99), b(99);
  EXPECT_EQ(grow(d, all_rows(d), c, a), grow(d, all_rows(d), c, b));
}

TEST(Grow, FallsBackToAllFeaturesWhenSubsetIsConstant) {
  // Only feature 1 is informative; a subset of size 1 drawn as {0} must still
  // split on feature 1.
  Dataset d({{5, 5, 5, 5}, {1, 2, 3, 4}}, {0, 0, 1, 1}, {"c", "x"},
            {FeatureKind::continuous(), FeatureKind::continuous()},
            Task::classification, 2);
  TreeConfig c;
  c.max_features = MaxFeatures::of_count(1);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    std::mt19937_64 rng(seed);
    const Tree t = grow(d, all_rows(d), c, rng);
    ASSERT_TRUE(t.node(0).split);
    EXPECT_EQ(t.node(0).split->feature, 1u);
  }
}

TEST(Grow, RejectsMismatchedCriterionAndEmptyRows) {
  auto d = one_feature({1, 2}, {0, 1}, Task::classification);
  TreeConfig c;
  c.criterion = Criterion::mse;
  EXPECT_THROW(grow(d, all_rows(d), c), UsageError);
  EXPECT_THROW(grow(d, std::vector<std::size_t>{}, TreeConfig{}), UsageError);
}

TEST(Grow, StructuralInvariants) {
  std::mt19937_64 gen(3);
  for (Task task : {Task::classification, Task::regression}) {
    const auto d = oracle::random_dataset(gen, 300, 4, task, 3);
    std::vector<std::size_t> rows;
    std::uniform_int_distribution<std::size_t> pick(0, d.n_rows() - 1);
    for (std::size_t i = 0; i < d.n_rows(); ++i) rows.push_back(pick(gen));
    std::sort(rows.begin(), rows.end());
    TreeConfig c;
    c.criterion = default_criterion(task);
    const Tree t = grow(d, rows, c);
    double total = 0.0, leaves = 0.0;
    for (const auto& node : t.nodes()) {
      if (node.is_leaf()) {
        leaves += node.stats.weight * impurity(node.stats, c.criterion);
        continue;
      }
      const auto& l = t.node(static_cast<std::size_t>(node.left)).stats;
      const auto& r = t.node(static_cast<std::size_t>(node.right)).stats;
      EXPECT_EQ(node.stats.n, l.n + r.n);
      EXPECT_GE(node.train_decrease, 0.0);
      total += node.train_decrease;
      if (task == Task::classification) {
        for (std::size_t k = 0; k < 3; ++k) {
          EXPECT_EQ(node.stats.class_counts[k],
                    l.class_counts[k] + r.class_counts[k]);
        }
      }
    }
    EXPECT_DOUBLE_EQ(t.node(0).stats.weight, 1.0);
    EXPECT_NEAR(total,
                impurity(t.node(0).stats, c.criterion) - leaves, 1e-10);
  }
}

TEST(Route, TrainingRowsReproduceCounts) {
  std::mt19937_64 gen(8);
  const auto d = oracle::random_dataset(gen, 150, 3, Task::classification);
  const auto rows = all_rows(d);
  const Tree t = grow(d, rows, TreeConfig{});
  const auto routed = route(t, d);
  for (std::size_t id = 0; id < t.size(); ++id) {
    EXPECT_EQ(routed[id].size(), t.node(id).stats.n);
  }
  const std::vector<std::size_t> none;
  for (const auto& list : route(t, d, none)) EXPECT_TRUE(list.empty());

  const std::vector<std::size_t> one = {7};
  const auto single = route(t, d, one);
  std::size_t leaves_hit = 0;
  for (std::size_t id = 0; id < t.size(); ++id) {
    if (t.node(id).is_leaf() && !single[id].empty()) ++leaves_hit;
  }
  EXPECT_EQ(leaves_hit, 1u);
  EXPECT_EQ(single[t.leaf(d, 7)].size(), 1u);
  EXPECT_EQ(single[0].size(), 1u);
}

TEST(Route, ColumnMismatchIsDataError) {
  auto d = one_feature({1, 2, 3, 4}, {0, 0, 1, 1}, Task::classification);
  const Tree t = grow(d, all_rows(d), TreeConfig{});
  Dataset wide({{1, 2}, {3, 4}}, {0, 1}, {"a", "b"},
               {FeatureKind::continuous(), FeatureKind::continuous()},
               Task::classification, 2);
  EXPECT_THROW(route(t, wide), DataError);
}

TEST(Argmax, TiesGoLow) {
  const std::vector<double> v = {0.5, 0.5};
  EXPECT_EQ(argmax(v), 0u);
}
