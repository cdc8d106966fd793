#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "ufi/dataset.hpp"
#include "ufi/tree.hpp"

namespace ufi {

struct ForestConfig {
  std::size_t n_trees = 100;
  /// The tree seed field is ignored; per-tree seeds derive from `seed`.
  TreeConfig tree;
  bool bootstrap = true;
  std::uint64_t seed = 0;

  bool operator==(const ForestConfig&) const = default;
};

/// Library defaults for a task: Gini + sqrt(p) candidate features for
/// classification, MSE + all features for regression.
ForestConfig default_forest_config(Task task);

struct BootstrapSample {
  std::vector<std::size_t> in_bag;  // sorted, with repeats
  std::vector<std::size_t> oob;     // sorted, rows never drawn
};

/// n draws with replacement from [0, n).
BootstrapSample bootstrap_indices(std::size_t n, std::mt19937_64& rng);

/// Seed for tree `index` under master seed `seed`.
std::uint64_t tree_seed(std::uint64_t seed, std::size_t index);

class Forest {
 public:
  Forest(ForestConfig config, std::vector<Tree> trees,
         std::vector<std::vector<std::size_t>> in_bag,
         std::vector<std::vector<std::size_t>> oob, std::size_t n_train_rows);

  const ForestConfig& config() const { return config_; }
  const std::vector<Tree>& trees() const { return trees_; }
  const Tree& tree(std::size_t b) const { return trees_[b]; }
  std::size_t size() const { return trees_.size(); }
  const std::vector<std::size_t>& in_bag(std::size_t b) const {
    return in_bag_[b];
  }
  const std::vector<std::size_t>& oob(std::size_t b) const { return oob_[b]; }
  std::size_t n_train_rows() const { return n_train_rows_; }
  Task task() const { return trees_.front().task(); }
  int n_classes() const { return trees_.front().n_classes(); }
  std::size_t n_features() const { return trees_.front().n_features(); }

  bool operator==(const Forest&) const = default;

 private:
  ForestConfig config_;
  std::vector<Tree> trees_;
  std::vector<std::vector<std::size_t>> in_bag_;
  std::vector<std::vector<std::size_t>> oob_;
  std::size_t n_train_rows_;
};

/// Fits B trees. Tree b draws its bootstrap sample and feature subsets from
/// its own stream seeded by tree_seed(config.seed, b), so the result does not
/// depend on `threads`.
Forest fit(const Dataset& data, const ForestConfig& config, int threads = 1);

/// Mean of tree outputs: regression value, or averaged class probabilities
/// with argmax label (ties to the smaller class).
Predictions predict(const Forest& forest, const Dataset& samples);

}  // namespace ufi
