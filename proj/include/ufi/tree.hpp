#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ufi/dataset.hpp"

namespace ufi {

enum class Criterion { gini, entropy, misclassification, mse, mae };

std::string_view to_string(Criterion criterion);
Criterion parse_criterion(std::string_view text);
Task task_of(Criterion criterion);
Criterion default_criterion(Task task);

/// Number of candidate features drawn at each node (p0).
struct MaxFeatures {
  enum class Kind { all, sqrt, fraction, count };

  Kind kind = Kind::all;
  double fraction = 1.0;
  std::size_t count = 0;

  static MaxFeatures all() { return {Kind::all, 1.0, 0}; }
  static MaxFeatures sqrt() { return {Kind::sqrt, 1.0, 0}; }
  static MaxFeatures of_fraction(double f) { return {Kind::fraction, f, 0}; }
  static MaxFeatures of_count(std::size_t k) { return {Kind::count, 1.0, k}; }

  /// "all", "sqrt", a fraction in (0,1) written with a decimal point, or an
  /// integer count.
  static MaxFeatures parse(std::string_view text);
  std::string to_string() const;

  /// Resolved p0 for p features; at least 1.
  std::size_t resolve(std::size_t n_features) const;

  bool operator==(const MaxFeatures&) const = default;
};

struct TreeConfig {
  Criterion criterion = Criterion::gini;
  std::optional<int> max_depth;  // root has depth 0
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  MaxFeatures max_features = MaxFeatures::all();
  std::uint64_t seed = 0;

  /// Throws UsageError when a field is out of range for p features.
  void validate(std::size_t n_features) const;

  bool operator==(const TreeConfig&) const = default;
};

/// Routing rule: x[feature] <= threshold goes left, otherwise right.
struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;

  bool goes_left(double value) const { return value <= threshold; }
  bool operator==(const Split&) const = default;
};

/// Training-sample summary of a node. `weight` is n / n_root.
struct NodeStats {
  std::size_t n = 0;
  double weight = 0.0;
  std::vector<std::int64_t> class_counts;  // classification
  double mean = 0.0;     // regression: training mean
  double sum_sq = 0.0;   // regression: sum of y^2
  double sse = 0.0;      // regression: sum of (y - mean)^2
  double abs_dev = 0.0;  // regression: sum of |y - median|

  double proportion(std::size_t k) const {
    return static_cast<double>(class_counts[k]) / static_cast<double>(n);
  }
  std::vector<double> proportions() const;
  bool operator==(const NodeStats&) const = default;
};

/// Summarises the targets of `rows` for a node whose tree root holds n_root
/// training samples. Sums run in the order given by `rows`.
NodeStats make_node_stats(const Dataset& data,
                          std::span<const std::size_t> rows,
                          std::size_t n_root);

/// H(m). Gini 1 - sum p^2, entropy -sum p ln p, misclassification 1 - max p,
/// MSE mean squared deviation from the node mean, MAE mean absolute deviation
/// from the median. Throws UsageError on an empty node.
double impurity(const NodeStats& stats, Criterion criterion);

/// 1 - sum_k p_k * q_k. Equals the Gini index when q == p.
double predictive_gini(std::span<const double> train_proportions,
                       std::span<const double> test_proportions);

/// Weighted impurity decrease of a split given the three node impurities and
/// training weights. Evaluated as w_l (H_m - H_l) + w_r (H_m - H_r), which is
/// w_m H_m - (w_l H_l + w_r H_r) because w_m = w_l + w_r; this form is exactly
/// zero whenever the children reproduce the parent's impurity.
double weighted_decrease(double weight_left, double weight_right,
                         double parent_impurity, double left_impurity,
                         double right_impurity);

/// Midpoints between consecutive values of a strictly ascending list.
std::vector<double> candidate_thresholds(std::span<const double> sorted_values);

struct SplitEvaluation {
  double loss = 0.0;      // L = (n_l H_l + n_r H_r) / n_m
  double decrease = 0.0;  // weighted decrease with weights n / n_root
  NodeStats parent, left, right;
};

/// Evaluates a fixed split of `rows`. Returns nullopt when either child would
/// hold fewer than min_samples_leaf samples.
std::optional<SplitEvaluation> evaluate_split(const Dataset& data,
                                              std::span<const std::size_t> rows,
                                              const Split& split,
                                              Criterion criterion,
                                              std::size_t n_root,
                                              int min_samples_leaf = 1);

struct SplitCandidate {
  Split split;
  double loss = 0.0;
  double decrease = 0.0;  // weight of the node times (H_m - loss)
};

/// Relative tolerance under which two losses count as tied, and under which
/// an impurity decrease counts as zero.
inline constexpr double kTieTolerance = 1e-12;

/// Absolute tie tolerance for a node: kTieTolerance times H_m
/// (classification) or times the second moment sum_sq / n (regression).
double tie_tolerance(const NodeStats& parent, Criterion criterion);

/// Exhaustive scan over `features` (any order) and all midpoint thresholds.
/// Picks the smallest loss; ties go to the smaller feature index, then the
/// smaller threshold. Returns nullopt when no candidate is admissible or no
/// candidate decreases impurity.
std::optional<SplitCandidate> best_split(const Dataset& data,
                                         std::span<const std::size_t> rows,
                                         std::span<const std::size_t> features,
                                         Criterion criterion,
                                         int min_samples_leaf,
                                         std::size_t n_root);

struct TreeNode {
  NodeStats stats;
  int depth = 0;
  std::optional<Split> split;  // empty for leaves
  std::int32_t left = -1;
  std::int32_t right = -1;
  double train_decrease = 0.0;

  bool is_leaf() const { return !split.has_value(); }
  bool operator==(const TreeNode&) const = default;
};

/// Immutable grown tree. Node 0 is the root; the two children of a node get
/// consecutive ids greater than the parent's.
class Tree {
 public:
  Tree(Task task, int n_classes, std::size_t n_features, Criterion criterion,
       std::vector<TreeNode> nodes);

  Task task() const { return task_; }
  int n_classes() const { return n_classes_; }
  std::size_t n_features() const { return n_features_; }
  Criterion criterion() const { return criterion_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(std::size_t id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t n_internal() const;

  /// Leaf reached by row `row` of `data`.
  std::size_t leaf(const Dataset& data, std::size_t row) const;
  /// Leaf reached by a full feature vector.
  std::size_t leaf(std::span<const double> x) const;

  /// Leaf class proportions (classification) or {mean} (regression).
  std::vector<double> leaf_value(std::size_t leaf_id) const;

  bool operator==(const Tree&) const = default;

 private:
  Task task_;
  int n_classes_;
  std::size_t n_features_;
  Criterion criterion_;
  std::vector<TreeNode> nodes_;
};

/// Grows a tree on `rows` (duplicates allowed, as in a bootstrap sample).
/// At each node max_features columns are drawn without replacement; if none
/// of them admits a split, all columns are scanned before declaring a leaf.
Tree grow(const Dataset& data, std::span<const std::size_t> rows,
          const TreeConfig& config);
/// Same, drawing feature subsets from a caller-owned stream.
Tree grow(const Dataset& data, std::span<const std::size_t> rows,
          const TreeConfig& config, std::mt19937_64& rng);

/// Per-node lists of the given rows: a row appears at every node on its
/// root-to-leaf path, in the order of `rows`.
std::vector<std::vector<std::size_t>> route(const Tree& tree,
                                            const Dataset& samples,
                                            std::span<const std::size_t> rows);
std::vector<std::vector<std::size_t>> route(const Tree& tree,
                                            const Dataset& samples);

struct Predictions {
  /// Class label (as a real) or regression mean, one per sample.
  std::vector<double> values;
  /// Classification only: one probability vector per sample.
  std::vector<std::vector<double>> probabilities;
};

Predictions predict(const Tree& tree, const Dataset& samples);

/// Index of the largest entry; ties go to the smaller index.
std::size_t argmax(std::span<const double> values);

}  // namespace ufi
