#include "ufi/dataset.hpp"

#include <bit>
#include <cmath>
#include <random>

namespace ufi {

FeatureKind FeatureKind::categorical(int levels) {
  if (levels < 2) {
    throw UsageError("categorical feature needs at least 2 levels, got " +
                     std::to_string(levels));
  }
  return {Tag::categorical, levels};
}

std::string to_string(const FeatureKind& kind) {
  switch (kind.tag) {
    case FeatureKind::Tag::continuous:
      return "continuous";
    case FeatureKind::Tag::binary:
      return "binary";
    case FeatureKind::Tag::ordinal:
      return "ordinal";
    case FeatureKind::Tag::categorical:
      return "categorical(" + std::to_string(kind.cardinality) + ")";
  }
  return "unknown";
}

Dataset::Dataset(std::vector<std::vector<double>> columns,
                 std::vector<double> target, std::vector<std::string> names,
                 std::vector<FeatureKind> kinds, Task task, int n_classes,
                 std::vector<std::vector<std::string>> levels)
    : columns_(std::move(columns)),
      target_(std::move(target)),
      names_(std::move(names)),
      kinds_(std::move(kinds)),
      levels_(std::move(levels)),
      task_(task),
      n_classes_(task == Task::classification ? n_classes : 0) {
  const std::size_t p = columns_.size();
  const std::size_t n = target_.size();
  if (n == 0) throw DataError("dataset has no rows");
  if (p == 0) throw DataError("dataset has no feature columns");
  if (names_.size() != p || kinds_.size() != p) {
    throw DataError("feature names/kinds do not match column count");
  }
  if (levels_.empty()) levels_.resize(p);
  if (levels_.size() != p) throw DataError("level table size mismatch");
  if (task_ == Task::classification && n_classes_ < 1) {
    throw DataError("classification dataset needs n_classes >= 1");
  }
  for (std::size_t j = 0; j < p; ++j) {
    if (columns_[j].size() != n) {
      throw DataError("column '" + names_[j] + "' has " +
                      std::to_string(columns_[j].size()) + " rows, expected " +
                      std::to_string(n));
    }
    const auto& kind = kinds_[j];
    for (std::size_t i = 0; i < n; ++i) {
      const double v = columns_[j][i];
      if (!std::isfinite(v)) {
        throw DataError("non-finite value at row " + std::to_string(i) +
                        ", column '" + names_[j] + "'");
      }
      if (kind.is_categorical() &&
          (v != std::floor(v) || v < 0 || v >= kind.cardinality)) {
        throw DataError("categorical code out of range at row " +
                        std::to_string(i) + ", column '" + names_[j] + "'");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double y = target_[i];
    if (!std::isfinite(y)) {
      throw DataError("non-finite target at row " + std::to_string(i));
    }
    if (task_ == Task::classification &&
        (y != std::floor(y) || y < 0 || y >= n_classes_)) {
      throw DataError("class label at row " + std::to_string(i) +
                      " is not an integer in [0, " +
                      std::to_string(n_classes_) + ")");
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<std::vector<double>> cols(n_features());
  for (std::size_t j = 0; j < n_features(); ++j) {
    cols[j].reserve(rows.size());
    for (auto r : rows) cols[j].push_back(columns_[j][r]);
  }
  std::vector<double> y;
  y.reserve(rows.size());
  for (auto r : rows) y.push_back(target_[r]);
  return Dataset(std::move(cols), std::move(y), names_, kinds_, task_,
                 n_classes_, levels_);
}

Dataset Dataset::with_column(std::vector<double> values, std::string name,
                             FeatureKind kind) const {
  auto cols = columns_;
  auto names = names_;
  auto kinds = kinds_;
  auto levels = levels_;
  cols.push_back(std::move(values));
  names.push_back(std::move(name));
  kinds.push_back(kind);
  levels.emplace_back();
  return Dataset(std::move(cols), target_, std::move(names), std::move(kinds),
                 task_, n_classes_, std::move(levels));
}

namespace {

// FNV-1a, 64 bit.
class Hasher {
 public:
  void bytes(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ULL;
    }
  }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void real(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void text(const std::string& s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::uint64_t Dataset::fingerprint() const {
  Hasher h;
  h.u64(n_rows());
  h.u64(n_features());
  h.u64(static_cast<std::uint64_t>(task_));
  for (std::size_t j = 0; j < n_features(); ++j) {
    h.text(names_[j]);
    for (double v : columns_[j]) h.real(v);
  }
  for (double y : target_) h.real(y);
  return h.value();
}

std::pair<Dataset, DummyGroupMap> dummy_encode(const Dataset& data) {
  std::vector<std::vector<double>> cols;
  std::vector<std::string> names;
  std::vector<FeatureKind> kinds;
  std::vector<std::vector<std::string>> levels;
  DummyGroupMap map;

  for (std::size_t j = 0; j < data.n_features(); ++j) {
    const auto& kind = data.kinds()[j];
    const auto column = data.column(j);
    if (!kind.is_categorical()) {
      cols.emplace_back(column.begin(), column.end());
      names.push_back(data.names()[j]);
      kinds.push_back(kind);
      levels.push_back(data.levels()[j]);
      continue;
    }
    std::vector<std::size_t> members;
    const auto& labels = data.levels()[j];
    for (int level = 0; level < kind.cardinality; ++level) {
      std::vector<double> indicator(data.n_rows());
      for (std::size_t i = 0; i < data.n_rows(); ++i) {
        indicator[i] = column[i] == level ? 1.0 : 0.0;
      }
      const std::string label =
          static_cast<std::size_t>(level) < labels.size()
              ? labels[static_cast<std::size_t>(level)]
              : std::to_string(level);
      members.push_back(cols.size());
      cols.push_back(std::move(indicator));
      names.push_back(data.names()[j] + "=" + label);
      kinds.push_back(FeatureKind::binary());
      levels.emplace_back();
    }
    map.groups.emplace_back(data.names()[j], std::move(members));
  }
  std::vector<double> target(data.target().begin(), data.target().end());
  Dataset encoded(std::move(cols), std::move(target), std::move(names),
                  std::move(kinds), data.task(), data.n_classes(),
                  std::move(levels));
  return {std::move(encoded), std::move(map)};
}

FoldedScores fold_importances(std::span<const double> scores,
                              std::span<const std::string> encoded_names,
                              const DummyGroupMap& map) {
  if (scores.size() != encoded_names.size()) {
    throw UsageError("score vector length " + std::to_string(scores.size()) +
                     " does not match " +
                     std::to_string(encoded_names.size()) + " column names");
  }
  // owner[c] = group index for grouped columns, -1 otherwise.
  std::vector<long> owner(scores.size(), -1);
  for (std::size_t g = 0; g < map.groups.size(); ++g) {
    for (auto c : map.groups[g].second) {
      if (c >= scores.size() || owner[c] != -1) {
        throw UsageError("dummy group map does not partition the columns");
      }
      owner[c] = static_cast<long>(g);
    }
  }
  FoldedScores out;
  std::vector<long> slot_of_group(map.groups.size(), -1);
  for (std::size_t c = 0; c < scores.size(); ++c) {
    if (owner[c] < 0) {
      out.names.push_back(encoded_names[c]);
      out.scores.push_back(scores[c]);
      continue;
    }
    auto& slot = slot_of_group[static_cast<std::size_t>(owner[c])];
    if (slot < 0) {
      slot = static_cast<long>(out.scores.size());
      out.names.push_back(map.groups[static_cast<std::size_t>(owner[c])].first);
      out.scores.push_back(0.0);
    }
    out.scores[static_cast<std::size_t>(slot)] += scores[c];
  }
  return out;
}

Dataset inject_random_feature(const Dataset& data, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> values(data.n_rows());
  for (auto& v : values) v = normal(rng);
  return data.with_column(std::move(values), "random",
                          FeatureKind::continuous());
}

}  // namespace ufi
