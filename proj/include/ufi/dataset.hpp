#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ufi/common.hpp"

namespace ufi {

struct FeatureKind {
  enum class Tag { continuous, binary, categorical, ordinal };

  Tag tag = Tag::continuous;
  int cardinality = 0;  // categorical only; binary reports 2

  static FeatureKind continuous() { return {Tag::continuous, 0}; }
  static FeatureKind binary() { return {Tag::binary, 2}; }
  static FeatureKind ordinal() { return {Tag::ordinal, 0}; }
  static FeatureKind categorical(int levels);

  bool is_categorical() const { return tag == Tag::categorical; }
  bool operator==(const FeatureKind&) const = default;
};

std::string to_string(const FeatureKind& kind);

/// Column-major numeric table plus response. Immutable once constructed; the
/// constructor validates every invariant and throws DataError otherwise.
///
/// Categorical columns hold integer level codes in [0, cardinality). The
/// optional level labels map codes back to the strings seen in the source.
class Dataset {
 public:
  Dataset(std::vector<std::vector<double>> columns, std::vector<double> target,
          std::vector<std::string> names, std::vector<FeatureKind> kinds,
          Task task, int n_classes = 0,
          std::vector<std::vector<std::string>> levels = {});

  std::size_t n_rows() const { return target_.size(); }
  std::size_t n_features() const { return columns_.size(); }
  Task task() const { return task_; }
  int n_classes() const { return n_classes_; }

  double value(std::size_t row, std::size_t feature) const {
    return columns_[feature][row];
  }
  std::span<const double> column(std::size_t feature) const {
    return columns_[feature];
  }
  std::span<const double> target() const { return target_; }
  int label(std::size_t row) const { return static_cast<int>(target_[row]); }

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<FeatureKind>& kinds() const { return kinds_; }
  const std::vector<std::vector<std::string>>& levels() const {
    return levels_;
  }

  /// Copy restricted to the given rows (in the given order; duplicates kept).
  Dataset subset(std::span<const std::size_t> rows) const;

  /// Copy with one extra feature column appended.
  Dataset with_column(std::vector<double> values, std::string name,
                      FeatureKind kind) const;

  /// Order-sensitive 64-bit hash over shape, names, values and target.
  std::uint64_t fingerprint() const;

 private:
  std::vector<std::vector<double>> columns_;
  std::vector<double> target_;
  std::vector<std::string> names_;
  std::vector<FeatureKind> kinds_;
  std::vector<std::vector<std::string>> levels_;
  Task task_;
  int n_classes_;
};

/// Provenance of dummy-encoded columns: original feature name -> encoded
/// column indices. Groups are kept in order of their first encoded column.
struct DummyGroupMap {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;

  bool empty() const { return groups.empty(); }
};

/// Replaces every categorical(k) column by k indicator columns named
/// "feature=level" (level order = code order, i.e. first appearance in the
/// source file). Other kinds pass through unchanged.
std::pair<Dataset, DummyGroupMap> dummy_encode(const Dataset& data);

/// Sums scores over each dummy group; ungrouped columns pass through. Output
/// order follows the first encoded column of each original feature.
struct FoldedScores {
  std::vector<std::string> names;
  std::vector<double> scores;
};
FoldedScores fold_importances(std::span<const double> scores,
                              std::span<const std::string> encoded_names,
                              const DummyGroupMap& map);

/// Appends an i.i.d. N(0,1) column named "random".
Dataset inject_random_feature(const Dataset& data, std::uint64_t seed);

}  // namespace ufi
