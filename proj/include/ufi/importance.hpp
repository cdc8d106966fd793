#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ufi/dataset.hpp"
#include "ufi/forest.hpp"
#include "ufi/tree.hpp"

namespace ufi {

enum class ImportanceMethod { si, ufi, permutation };

std::string_view to_string(ImportanceMethod method);
ImportanceMethod parse_method(std::string_view text);

struct ImportanceReport {
  ImportanceMethod method = ImportanceMethod::si;
  std::vector<std::string> feature_names;
  std::vector<double> scores;
  /// UFI only: internal nodes left out because the test data missed the node
  /// or one of its children.
  std::size_t skipped_nodes = 0;
  std::size_t n_trees = 0;
  /// Optional B x p matrix of per-tree scores; `scores` is its column mean.
  std::vector<std::vector<double>> per_tree;

  /// Sample standard deviation of each column of per_tree (0 when fewer than
  /// two rows).
  std::vector<double> sd_across_trees() const;

  /// Sums dummy groups in scores and per_tree.
  ImportanceReport folded(const DummyGroupMap& map) const;
};

// --- split-improvement ------------------------------------------------------

/// Sum of recorded training decreases per split feature.
std::vector<double> si_tree(const Tree& tree);

/// Per-feature mean of si_tree over the forest.
ImportanceReport si_forest(const Forest& forest,
                           std::span<const std::string> feature_names);

// --- out-of-sample corrected split-improvement ------------------------------

/// Test-sample summary of one node, measured against the tree's training
/// statistics.
struct NodeTestStats {
  std::size_t n_test = 0;
  std::vector<std::int64_t> class_counts;  // classification
  double sum = 0.0;                        // regression: sum of test y
  double sse = 0.0;  // regression: sum of (y' - training node mean)^2

  std::vector<double> proportions() const;
};

/// Routes `rows` of `test` through the tree, accumulating at every node on
/// each path. Accumulation follows the order of `rows`.
std::vector<NodeTestStats> node_test_stats(const Tree& tree,
                                           const Dataset& test,
                                           std::span<const std::size_t> rows);

/// H'(m): predictive Gini 1 - sum_k p_mk p'_mk (classification) or the test
/// mean squared error around the training mean (regression). Requires
/// n_test > 0.
double predictive_impurity(const Tree& tree, std::size_t node_id,
                           const NodeTestStats& test);

/// Delta'(m) = w_m H'(m) - (w_l H'(l) + w_r H'(r)) with training weights.
/// nullopt for leaves and for nodes where the test data leaves the node or
/// either child empty.
std::optional<double> predictive_decrease(
    const Tree& tree, std::size_t node_id,
    std::span<const NodeTestStats> test_stats);

struct TreeUfi {
  std::vector<double> scores;
  std::size_t skipped = 0;
};

/// Sum of Delta' over nodes splitting on each feature (Gini trees).
TreeUfi ufi_tree_classification(const Tree& tree, const Dataset& test,
                                std::span<const std::size_t> rows);
/// Sum of Delta + Delta' over nodes splitting on each feature (MSE trees).
TreeUfi ufi_tree_regression(const Tree& tree, const Dataset& test,
                            std::span<const std::size_t> rows);
/// Dispatches on the tree's task.
TreeUfi ufi_tree(const Tree& tree, const Dataset& test,
                 std::span<const std::size_t> rows);

/// Each tree scored on its own out-of-bag rows of the training data.
ImportanceReport ufi_forest_oob(const Forest& forest, const Dataset& train);
/// Every tree scored on the same explicit test set.
ImportanceReport ufi_forest_test(const Forest& forest, const Dataset& test);

// --- permutation ------------------------------------------------------------

enum class PermutationLoss { zero_one, mse };
enum class PermutationMode { oob_per_tree, test_set };

struct PermutationOptions {
  PermutationMode mode = PermutationMode::oob_per_tree;
  std::optional<PermutationLoss> loss;  // default: by task
  int repeats = 1;
  std::uint64_t seed = 0;
};

/// Mean per-sample loss of `tree` on `rows` after replacing column `feature`
/// at rows[i] by its value at rows[permutation[i]], minus the unpermuted mean
/// loss.
double permuted_loss_increase(const Tree& tree, const Dataset& data,
                              std::span<const std::size_t> rows,
                              std::size_t feature,
                              std::span<const std::size_t> permutation,
                              PermutationLoss loss);

/// oob_per_tree: permute within each tree's OOB rows of `data` (the training
/// set) and average per-tree increases over trees with a non-empty OOB set.
/// test_set: permute across all rows of `data` and score the whole forest.
/// Each (tree, feature, repeat) draws its own permutation stream from seed.
ImportanceReport permutation_importance(
    const Forest& forest, const Dataset& data,
    std::span<const std::string> feature_names,
    const PermutationOptions& options);

}  // namespace ufi
