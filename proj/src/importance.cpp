#include "ufi/importance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ufi {

std::string_view to_string(ImportanceMethod method) {
  switch (method) {
    case ImportanceMethod::si:
      return "si";
    case ImportanceMethod::ufi:
      return "ufi";
    case ImportanceMethod::permutation:
      return "permutation";
  }
  return "unknown";
}

ImportanceMethod parse_method(std::string_view text) {
  if (text == "si") return ImportanceMethod::si;
  if (text == "ufi") return ImportanceMethod::ufi;
  if (text == "permutation") return ImportanceMethod::permutation;
  throw UsageError("unknown importance method '" + std::string(text) +
                   "' (expected si, ufi or permutation)");
}

std::vector<double> ImportanceReport::sd_across_trees() const {
  std::vector<double> sd(scores.size(), 0.0);
  if (per_tree.size() < 2) return sd;
  const auto rows = static_cast<double>(per_tree.size());
  for (std::size_t j = 0; j < sd.size(); ++j) {
    double mean = 0.0;
    for (const auto& row : per_tree) mean += row[j];
    mean /= rows;
    double ss = 0.0;
    for (const auto& row : per_tree) ss += (row[j] - mean) * (row[j] - mean);
    sd[j] = std::sqrt(ss / (rows - 1.0));
  }
  return sd;
}

ImportanceReport ImportanceReport::folded(const DummyGroupMap& map) const {
  ImportanceReport out = *this;
  auto top = fold_importances(scores, feature_names, map);
  out.feature_names = std::move(top.names);
  out.scores = std::move(top.scores);
  for (auto& row : out.per_tree) {
    row = fold_importances(row, feature_names, map).scores;
  }
  return out;
}

namespace {

// Column means of a B x p matrix, summed in tree order.
std::vector<double> column_means(const std::vector<std::vector<double>>& rows,
                                 std::size_t p) {
  std::vector<double> mean(p, 0.0);
  if (rows.empty()) return mean;
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < p; ++j) mean[j] += row[j];
  }
  for (auto& m : mean) m /= static_cast<double>(rows.size());
  return mean;
}

void check_names(std::span<const std::string> names, std::size_t p) {
  if (names.size() != p) {
    throw UsageError(std::to_string(names.size()) +
                     " feature names given for " + std::to_string(p) +
                     " features");
  }
}

}  // namespace

std::vector<double> si_tree(const Tree& tree) {
  std::vector<double> vi(tree.n_features(), 0.0);
  for (const auto& node : tree.nodes()) {
    if (!node.is_leaf()) vi[node.split->feature] += node.train_decrease;
  }
  return vi;
}

ImportanceReport si_forest(const Forest& forest,
                           std::span<const std::string> feature_names) {
  check_names(feature_names, forest.n_features());
  ImportanceReport report;
  report.method = ImportanceMethod::si;
  report.feature_names.assign(feature_names.begin(), feature_names.end());
  report.n_trees = forest.size();
  for (const auto& tree : forest.trees()) report.per_tree.push_back(si_tree(tree));
  report.scores = column_means(report.per_tree, forest.n_features());
  return report;
}

std::vector<double> NodeTestStats::proportions() const {
  std::vector<double> p(class_counts.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = static_cast<double>(class_counts[k]) / static_cast<double>(n_test);
  }
  return p;
}

std::vector<NodeTestStats> node_test_stats(const Tree& tree,
                                           const Dataset& test,
                                           std::span<const std::size_t> rows) {
  if (test.n_features() != tree.n_features()) {
    throw DataError("test samples have " + std::to_string(test.n_features()) +
                    " columns, tree expects " +
                    std::to_string(tree.n_features()));
  }
  if (test.task() != tree.task()) {
    throw DataError("test data task does not match the tree");
  }
  const bool classification = tree.task() == Task::classification;
  std::vector<NodeTestStats> stats(tree.size());
  if (classification) {
    for (auto& s : stats) {
      s.class_counts.assign(static_cast<std::size_t>(tree.n_classes()), 0);
    }
  }
  const auto y = test.target();
  for (auto r : rows) {
    if (classification && y[r] >= tree.n_classes()) {
      throw DataError("test label outside the tree's classes");
    }
    std::size_t id = 0;
    for (;;) {
      auto& s = stats[id];
      const auto& node = tree.node(id);
      ++s.n_test;
      if (classification) {
        ++s.class_counts[static_cast<std::size_t>(y[r])];
      } else {
        s.sum += y[r];
        const double d = y[r] - node.stats.mean;
        s.sse += d * d;
      }
      if (node.is_leaf()) break;
      id = static_cast<std::size_t>(
          node.split->goes_left(test.value(r, node.split->feature))
              ? node.left
              : node.right);
    }
  }
  return stats;
}

double predictive_impurity(const Tree& tree, std::size_t node_id,
                           const NodeTestStats& test) {
  if (test.n_test == 0) throw UsageError("predictive impurity of empty node");
  const auto& train = tree.node(node_id).stats;
  if (tree.task() == Task::classification) {
    return predictive_gini(train.proportions(), test.proportions());
  }
  return test.sse / static_cast<double>(test.n_test);
}

std::optional<double> predictive_decrease(
    const Tree& tree, std::size_t node_id,
    std::span<const NodeTestStats> test_stats) {
  const auto& node = tree.node(node_id);
  if (node.is_leaf()) return std::nullopt;
  const auto l = static_cast<std::size_t>(node.left);
  const auto r = static_cast<std::size_t>(node.right);
  if (test_stats[node_id].n_test == 0 || test_stats[l].n_test == 0 ||
      test_stats[r].n_test == 0) {
    return std::nullopt;
  }
  return weighted_decrease(tree.node(l).stats.weight,
                           tree.node(r).stats.weight,
                           predictive_impurity(tree, node_id, test_stats[node_id]),
                           predictive_impurity(tree, l, test_stats[l]),
                           predictive_impurity(tree, r, test_stats[r]));
}

namespace {

TreeUfi ufi_tree_impl(const Tree& tree, const Dataset& test,
                      std::span<const std::size_t> rows, bool add_train) {
  const auto stats = node_test_stats(tree, test, rows);
  TreeUfi out;
  out.scores.assign(tree.n_features(), 0.0);
  for (std::size_t id = 0; id < tree.size(); ++id) {
    const auto& node = tree.node(id);
    if (node.is_leaf()) continue;
    const auto delta_test = predictive_decrease(tree, id, stats);
    if (!delta_test) {
      ++out.skipped;
      continue;
    }
    out.scores[node.split->feature] +=
        add_train ? node.train_decrease + *delta_test : *delta_test;
  }
  return out;
}

}  // namespace

TreeUfi ufi_tree_classification(const Tree& tree, const Dataset& test,
                                std::span<const std::size_t> rows) {
  if (tree.criterion() != Criterion::gini) {
    throw UsageError("classification UFI requires a Gini tree");
  }
  return ufi_tree_impl(tree, test, rows, false);
}

TreeUfi ufi_tree_regression(const Tree& tree, const Dataset& test,
                            std::span<const std::size_t> rows) {
  if (tree.criterion() != Criterion::mse) {
    throw UsageError("regression UFI requires an MSE tree");
  }
  return ufi_tree_impl(tree, test, rows, true);
}

TreeUfi ufi_tree(const Tree& tree, const Dataset& test,
                 std::span<const std::size_t> rows) {
  return tree.task() == Task::classification
             ? ufi_tree_classification(tree, test, rows)
             : ufi_tree_regression(tree, test, rows);
}

namespace {

template <typename RowsFor>
ImportanceReport ufi_forest_impl(const Forest& forest, const Dataset& data,
                                 RowsFor rows_for) {
  ImportanceReport report;
  report.method = ImportanceMethod::ufi;
  report.feature_names = data.names();
  report.n_trees = forest.size();
  for (std::size_t b = 0; b < forest.size(); ++b) {
    auto tree_ufi = ufi_tree(forest.tree(b), data, rows_for(b));
    report.skipped_nodes += tree_ufi.skipped;
    report.per_tree.push_back(std::move(tree_ufi.scores));
  }
  report.scores = column_means(report.per_tree, forest.n_features());
  return report;
}

}  // namespace

ImportanceReport ufi_forest_oob(const Forest& forest, const Dataset& train) {
  if (!forest.config().bootstrap) {
    throw UsageError("out-of-bag UFI needs a forest trained with bootstrap");
  }
  if (train.n_rows() != forest.n_train_rows()) {
    throw DataError("training data has " + std::to_string(train.n_rows()) +
                    " rows, forest was fit on " +
                    std::to_string(forest.n_train_rows()));
  }
  return ufi_forest_impl(forest, train, [&](std::size_t b) {
    return std::span<const std::size_t>(forest.oob(b));
  });
}

ImportanceReport ufi_forest_test(const Forest& forest, const Dataset& test) {
  std::vector<std::size_t> all(test.n_rows());
  std::iota(all.begin(), all.end(), 0);
  return ufi_forest_impl(forest, test, [&](std::size_t) {
    return std::span<const std::size_t>(all);
  });
}

namespace {

double sample_loss(std::span<const double> output, double y,
                   PermutationLoss loss) {
  if (loss == PermutationLoss::zero_one) {
    return static_cast<double>(argmax(output)) == y ? 0.0 : 1.0;
  }
  const double d = output[0] - y;
  return d * d;
}

PermutationLoss resolve_loss(const PermutationOptions& options, Task task) {
  const auto loss = options.loss.value_or(
      task == Task::classification ? PermutationLoss::zero_one
                                   : PermutationLoss::mse);
  if (loss == PermutationLoss::zero_one && task != Task::classification) {
    throw UsageError("zero-one loss needs a classification forest");
  }
  if (loss == PermutationLoss::mse && task != Task::regression) {
    throw UsageError("mse loss needs a regression forest");
  }
  return loss;
}

std::vector<std::size_t> draw_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

std::vector<double> row_vector(const Dataset& data, std::size_t row) {
  std::vector<double> x(data.n_features());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = data.value(row, j);
  return x;
}

}  // namespace

double permuted_loss_increase(const Tree& tree, const Dataset& data,
                              std::span<const std::size_t> rows,
                              std::size_t feature,
                              std::span<const std::size_t> permutation,
                              PermutationLoss loss) {
  if (rows.empty()) return 0.0;
  if (permutation.size() != rows.size()) {
    throw UsageError("permutation length does not match row count");
  }
  const auto y = data.target();
  double base = 0.0;
  double permuted = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto x = row_vector(data, rows[i]);
    base += sample_loss(tree.leaf_value(tree.leaf(x)), y[rows[i]], loss);
    x[feature] = data.value(rows[permutation[i]], feature);
    permuted += sample_loss(tree.leaf_value(tree.leaf(x)), y[rows[i]], loss);
  }
  return (permuted - base) / static_cast<double>(rows.size());
}

ImportanceReport permutation_importance(
    const Forest& forest, const Dataset& data,
    std::span<const std::string> feature_names,
    const PermutationOptions& options) {
  check_names(feature_names, forest.n_features());
  if (data.n_features() != forest.n_features()) {
    throw DataError("data columns do not match the forest");
  }
  if (options.repeats < 1) throw UsageError("repeats must be >= 1");
  const auto loss = resolve_loss(options, forest.task());
  const std::size_t p = forest.n_features();
  const auto reps = static_cast<double>(options.repeats);

  ImportanceReport report;
  report.method = ImportanceMethod::permutation;
  report.feature_names.assign(feature_names.begin(), feature_names.end());
  report.n_trees = forest.size();

  if (options.mode == PermutationMode::oob_per_tree) {
    if (!forest.config().bootstrap) {
      throw UsageError("out-of-bag permutation needs a bootstrap forest");
    }
    if (data.n_rows() != forest.n_train_rows()) {
      throw DataError("training data does not match the forest");
    }
    for (std::size_t b = 0; b < forest.size(); ++b) {
      const auto& rows = forest.oob(b);
      if (rows.empty()) continue;
      const auto& tree = forest.tree(b);
      std::vector<char> used(p, 0);
      for (const auto& node : tree.nodes()) {
        if (!node.is_leaf()) used[node.split->feature] = 1;
      }
      std::vector<double> row(p, 0.0);
      for (std::size_t j = 0; j < p; ++j) {
        if (!used[j]) continue;  // predictions cannot change
        for (int rep = 0; rep < options.repeats; ++rep) {
          const auto perm = draw_permutation(
              rows.size(),
              derive_seed(options.seed, kPermutationStream,
                          (b * p + j) * static_cast<std::size_t>(
                                            options.repeats) +
                              static_cast<std::size_t>(rep)));
          row[j] += permuted_loss_increase(tree, data, rows, j, perm, loss);
        }
        row[j] /= reps;
      }
      report.per_tree.push_back(std::move(row));
    }
    report.scores = column_means(report.per_tree, p);
    return report;
  }

  // Whole-forest evaluation on a fixed test set.
  const std::size_t n = data.n_rows();
  const auto y = data.target();
  auto forest_output = [&](const std::vector<double>& x) {
    std::vector<double> sum;
    for (const auto& tree : forest.trees()) {
      const auto v = tree.leaf_value(tree.leaf(x));
      if (sum.empty()) sum.assign(v.size(), 0.0);
      for (std::size_t k = 0; k < v.size(); ++k) sum[k] += v[k];
    }
    for (auto& s : sum) s /= static_cast<double>(forest.size());
    return sum;
  };
  double base = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    base += sample_loss(forest_output(row_vector(data, i)), y[i], loss);
  }
  std::vector<char> used(p, 0);
  for (const auto& tree : forest.trees()) {
    for (const auto& node : tree.nodes()) {
      if (!node.is_leaf()) used[node.split->feature] = 1;
    }
  }
  report.scores.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    if (!used[j]) continue;
    for (int rep = 0; rep < options.repeats; ++rep) {
      const auto perm = draw_permutation(
          n, derive_seed(options.seed, kPermutationStream,
                         j * static_cast<std::size_t>(options.repeats) +
                             static_cast<std::size_t>(rep)));
      double permuted = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        auto x = row_vector(data, i);
        x[j] = data.value(perm[i], j);
        permuted += sample_loss(forest_output(x), y[i], loss);
      }
      report.scores[j] += (permuted - base) / static_cast<double>(n);
    }
    report.scores[j] /= reps;
  }
  return report;
}

}  // namespace ufi
