#include "ufi/forest.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace ufi {

ForestConfig default_forest_config(Task task) {
  ForestConfig config;
  config.tree.criterion = default_criterion(task);
  config.tree.max_features = task == Task::classification
                                 ? MaxFeatures::sqrt()
                                 : MaxFeatures::all();
  return config;
}

BootstrapSample bootstrap_indices(std::size_t n, std::mt19937_64& rng) {
  if (n == 0) throw UsageError("bootstrap of an empty dataset");
  BootstrapSample sample;
  sample.in_bag.resize(n);
  std::uniform_int_distribution<std::size_t> draw(0, n - 1);
  std::vector<char> seen(n, 0);
  for (auto& idx : sample.in_bag) {
    idx = draw(rng);
    seen[idx] = 1;
  }
  std::sort(sample.in_bag.begin(), sample.in_bag.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i]) sample.oob.push_back(i);
  }
  return sample;
}

std::uint64_t tree_seed(std::uint64_t seed, std::size_t index) {
  return derive_seed(seed, kTreeStream, index);
}

Forest::Forest(ForestConfig config, std::vector<Tree> trees,
               std::vector<std::vector<std::size_t>> in_bag,
               std::vector<std::vector<std::size_t>> oob,
               std::size_t n_train_rows)
    : config_(std::move(config)),
      trees_(std::move(trees)),
      in_bag_(std::move(in_bag)),
      oob_(std::move(oob)),
      n_train_rows_(n_train_rows) {
  if (trees_.empty()) throw DataError("forest has no trees");
  if (in_bag_.size() != trees_.size() || oob_.size() != trees_.size()) {
    throw DataError("forest bookkeeping does not match tree count");
  }
  for (const auto& t : trees_) {
    if (t.task() != trees_.front().task() ||
        t.n_features() != trees_.front().n_features()) {
      throw DataError("forest trees disagree on task or feature count");
    }
  }
}

Forest fit(const Dataset& data, const ForestConfig& config, int threads) {
  if (config.n_trees < 1) throw UsageError("n_trees must be >= 1");
  config.tree.validate(data.n_features());
  const std::size_t n = data.n_rows();
  const std::size_t count = config.n_trees;

  std::vector<std::optional<Tree>> trees(count);
  std::vector<std::vector<std::size_t>> in_bag(count), oob(count);
  parallel_for(count, threads, [&](std::size_t b) {
    std::mt19937_64 rng(tree_seed(config.seed, b));
    if (config.bootstrap) {
      auto sample = bootstrap_indices(n, rng);
      in_bag[b] = std::move(sample.in_bag);
      oob[b] = std::move(sample.oob);
    } else {
      in_bag[b].resize(n);
      std::iota(in_bag[b].begin(), in_bag[b].end(), 0);
    }
    trees[b].emplace(grow(data, in_bag[b], config.tree, rng));
  });

  std::vector<Tree> grown;
  grown.reserve(count);
  for (auto& t : trees) grown.push_back(std::move(*t));
  return Forest(config, std::move(grown), std::move(in_bag), std::move(oob),
                n);
}

Predictions predict(const Forest& forest, const Dataset& samples) {
  if (samples.n_features() != forest.n_features()) {
    throw DataError("samples have " + std::to_string(samples.n_features()) +
                    " columns, forest expects " +
                    std::to_string(forest.n_features()));
  }
  const auto trees = static_cast<double>(forest.size());
  Predictions out;
  out.values.assign(samples.n_rows(), 0.0);
  if (forest.task() == Task::classification) {
    out.probabilities.assign(
        samples.n_rows(),
        std::vector<double>(static_cast<std::size_t>(forest.n_classes()), 0.0));
  }
  for (std::size_t i = 0; i < samples.n_rows(); ++i) {
    for (const auto& tree : forest.trees()) {
      const auto value = tree.leaf_value(tree.leaf(samples, i));
      if (forest.task() == Task::classification) {
        for (std::size_t k = 0; k < value.size(); ++k) {
          out.probabilities[i][k] += value[k];
        }
      } else {
        out.values[i] += value[0];
      }
    }
    if (forest.task() == Task::classification) {
      for (auto& p : out.probabilities[i]) p /= trees;
      out.values[i] = static_cast<double>(argmax(out.probabilities[i]));
    } else {
      out.values[i] /= trees;
    }
  }
  return out;
}

}  // namespace ufi
