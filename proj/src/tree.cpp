#include "ufi/tree.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace ufi {

std::string_view to_string(Criterion criterion) {
  switch (criterion) {
    case Criterion::gini:
      return "gini";
    case Criterion::entropy:
      return "entropy";
    case Criterion::misclassification:
      return "misclassification";
    case Criterion::mse:
      return "mse";
    case Criterion::mae:
      return "mae";
  }
  return "unknown";
}

Criterion parse_criterion(std::string_view text) {
  for (auto c : {Criterion::gini, Criterion::entropy,
                 Criterion::misclassification, Criterion::mse,
                 Criterion::mae}) {
    if (to_string(c) == text) return c;
  }
  throw UsageError("unknown criterion '" + std::string(text) + "'");
}

Task task_of(Criterion criterion) {
  return criterion == Criterion::mse || criterion == Criterion::mae
             ? Task::regression
             : Task::classification;
}

Criterion default_criterion(Task task) {
  return task == Task::classification ? Criterion::gini : Criterion::mse;
}

MaxFeatures MaxFeatures::parse(std::string_view text) {
  if (text == "all") return all();
  if (text == "sqrt") return sqrt();
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (text.find('.') != std::string_view::npos) {
    double f = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, f);
    if (ec != std::errc() || ptr != end || !(f > 0.0) || f > 1.0) {
      throw UsageError("max_features fraction must be in (0, 1], got '" +
                       std::string(text) + "'");
    }
    return of_fraction(f);
  }
  std::size_t k = 0;
  auto [ptr, ec] = std::from_chars(begin, end, k);
  if (ec != std::errc() || ptr != end || k == 0) {
    throw UsageError("invalid max_features '" + std::string(text) + "'");
  }
  return of_count(k);
}

std::string MaxFeatures::to_string() const {
  switch (kind) {
    case Kind::all:
      return "all";
    case Kind::sqrt:
      return "sqrt";
    case Kind::fraction: {
      char buf[32];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, fraction);
      std::string s(buf, ptr);
      if (s.find('.') == std::string::npos) s += ".0";
      return s;
    }
    case Kind::count:
      return std::to_string(count);
  }
  return "all";
}

std::size_t MaxFeatures::resolve(std::size_t n_features) const {
  std::size_t k = n_features;
  switch (kind) {
    case Kind::all:
      break;
    case Kind::sqrt:
      k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n_features)));
      break;
    case Kind::fraction:
      k = static_cast<std::size_t>(fraction * static_cast<double>(n_features));
      break;
    case Kind::count:
      k = count;
      break;
  }
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(n_features, 1));
}

void TreeConfig::validate(std::size_t n_features) const {
  if (max_depth && *max_depth < 0) throw UsageError("max_depth must be >= 0");
  if (min_samples_split < 2) throw UsageError("min_samples_split must be >= 2");
  if (min_samples_leaf < 1) throw UsageError("min_samples_leaf must be >= 1");
  if (max_features.kind == MaxFeatures::Kind::count &&
      (max_features.count < 1 || max_features.count > n_features)) {
    throw UsageError("max_features count " +
                     std::to_string(max_features.count) + " exceeds p = " +
                     std::to_string(n_features));
  }
  if (max_features.kind == MaxFeatures::Kind::fraction &&
      !(max_features.fraction > 0.0 && max_features.fraction <= 1.0)) {
    throw UsageError("max_features fraction must be in (0, 1]");
  }
}

std::vector<double> NodeStats::proportions() const {
  std::vector<double> p(class_counts.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = proportion(k);
  return p;
}

namespace {

double sum_abs_dev_from_median(std::vector<double> ys) {
  if (ys.empty()) return 0.0;
  auto mid = ys.begin() + static_cast<std::ptrdiff_t>((ys.size() - 1) / 2);
  std::nth_element(ys.begin(), mid, ys.end());
  const double median = *mid;
  double total = 0.0;
  for (double y : ys) total += std::abs(y - median);
  return total;
}

}  // namespace

NodeStats make_node_stats(const Dataset& data,
                          std::span<const std::size_t> rows,
                          std::size_t n_root) {
  NodeStats s;
  s.n = rows.size();
  s.weight = static_cast<double>(s.n) / static_cast<double>(n_root);
  const auto y = data.target();
  if (data.task() == Task::classification) {
    s.class_counts.assign(static_cast<std::size_t>(data.n_classes()), 0);
    for (auto r : rows) ++s.class_counts[static_cast<std::size_t>(y[r])];
    return s;
  }
  if (s.n == 0) return s;
  double sum = 0.0;
  for (auto r : rows) {
    sum += y[r];
    s.sum_sq += y[r] * y[r];
  }
  s.mean = sum / static_cast<double>(s.n);
  for (auto r : rows) {
    const double d = y[r] - s.mean;
    s.sse += d * d;
  }
  std::vector<double> ys;
  ys.reserve(s.n);
  for (auto r : rows) ys.push_back(y[r]);
  s.abs_dev = sum_abs_dev_from_median(std::move(ys));
  return s;
}

double predictive_gini(std::span<const double> train_proportions,
                       std::span<const double> test_proportions) {
  double dot = 0.0;
  for (std::size_t k = 0; k < train_proportions.size(); ++k) {
    dot += train_proportions[k] * test_proportions[k];
  }
  return 1.0 - dot;
}

double impurity(const NodeStats& stats, Criterion criterion) {
  if (stats.n == 0) throw UsageError("impurity of an empty node");
  const auto n = static_cast<double>(stats.n);
  switch (criterion) {
    case Criterion::gini: {
      const auto p = stats.proportions();
      return predictive_gini(p, p);
    }
    case Criterion::entropy: {
      double h = 0.0;
      for (std::size_t k = 0; k < stats.class_counts.size(); ++k) {
        if (stats.class_counts[k] > 0) {
          const double p = stats.proportion(k);
          h -= p * std::log(p);
        }
      }
      return h;
    }
    case Criterion::misclassification: {
      const auto top =
          *std::max_element(stats.class_counts.begin(), stats.class_counts.end());
      return 1.0 - static_cast<double>(top) / n;
    }
    case Criterion::mse:
      return stats.sse / n;
    case Criterion::mae:
      return stats.abs_dev / n;
  }
  return 0.0;
}

double weighted_decrease(double weight_left, double weight_right,
                         double parent_impurity, double left_impurity,
                         double right_impurity) {
  return weight_left * (parent_impurity - left_impurity) +
         weight_right * (parent_impurity - right_impurity);
}

std::vector<double> candidate_thresholds(
    std::span<const double> sorted_values) {
  std::vector<double> out;
  for (std::size_t i = 1; i < sorted_values.size(); ++i) {
    out.push_back(std::midpoint(sorted_values[i - 1], sorted_values[i]));
  }
  return out;
}

std::optional<SplitEvaluation> evaluate_split(const Dataset& data,
                                              std::span<const std::size_t> rows,
                                              const Split& split,
                                              Criterion criterion,
                                              std::size_t n_root,
                                              int min_samples_leaf) {
  std::vector<std::size_t> left, right;
  const auto column = data.column(split.feature);
  for (auto r : rows) {
    (split.goes_left(column[r]) ? left : right).push_back(r);
  }
  const auto min_leaf = static_cast<std::size_t>(min_samples_leaf);
  if (left.size() < min_leaf || right.size() < min_leaf || left.empty() ||
      right.empty()) {
    return std::nullopt;
  }
  SplitEvaluation e;
  e.parent = make_node_stats(data, rows, n_root);
  e.left = make_node_stats(data, left, n_root);
  e.right = make_node_stats(data, right, n_root);
  const double hm = impurity(e.parent, criterion);
  const double hl = impurity(e.left, criterion);
  const double hr = impurity(e.right, criterion);
  const auto nm = static_cast<double>(e.parent.n);
  e.loss = (static_cast<double>(e.left.n) * hl +
            static_cast<double>(e.right.n) * hr) /
           nm;
  e.decrease = weighted_decrease(e.left.weight, e.right.weight, hm, hl, hr);
  return e;
}

double tie_tolerance(const NodeStats& parent, Criterion criterion) {
  if (task_of(criterion) == Task::regression) {
    return kTieTolerance * parent.sum_sq / static_cast<double>(parent.n);
  }
  return kTieTolerance * impurity(parent, criterion);
}

namespace {

// Impurity from class counts for the count-based criteria.
double count_impurity(std::span<const std::int64_t> counts, std::int64_t n,
                      Criterion criterion) {
  const auto dn = static_cast<double>(n);
  double h = 0.0;
  switch (criterion) {
    case Criterion::gini: {
      double sq = 0.0;
      for (auto c : counts) sq += (c / dn) * (c / dn);
      return 1.0 - sq;
    }
    case Criterion::entropy:
      for (auto c : counts) {
        if (c > 0) h -= (c / dn) * std::log(c / dn);
      }
      return h;
    case Criterion::misclassification:
      return 1.0 - static_cast<double>(
                       *std::max_element(counts.begin(), counts.end())) /
                       dn;
    default:
      return 0.0;
  }
}

// Sweeps candidate thresholds of one node and keeps the running best.
class SplitScanner {
 public:
  SplitScanner(const Dataset& data, std::span<const std::size_t> rows,
               Criterion criterion, int min_samples_leaf, std::size_t n_root)
      : data_(data),
        rows_(rows),
        criterion_(criterion),
        min_leaf_(static_cast<std::int64_t>(min_samples_leaf)),
        parent_(make_node_stats(data, rows, n_root)),
        n_(static_cast<std::int64_t>(rows.size())),
        classes_(data.task() == Task::classification
                     ? static_cast<std::size_t>(data.n_classes())
                     : 0) {
    parent_impurity_ = impurity(parent_, criterion);
    tolerance_ = tie_tolerance(parent_, criterion);
    const auto y = data.target();
    ys_.reserve(rows.size());
    for (auto r : rows) ys_.push_back(y[r]);
    total_sum_ = 0.0;
    for (double v : ys_) total_sum_ += v;
  }

  void scan(std::size_t feature) {
    if (parent_impurity_ <= 0.0 || n_ < 2 * min_leaf_) return;
    const auto column = data_.column(feature);
    if (criterion_ != Criterion::mae && small_integer_column(column)) {
      scan_binned(feature, column);
    } else {
      scan_sorted(feature, column);
    }
  }

  std::optional<SplitCandidate> result() const {
    if (!found_) return std::nullopt;
    SplitCandidate c;
    c.split = best_split_;
    c.loss = parent_impurity_ - best_gain_;
    c.decrease = parent_.weight * best_gain_;
    return c;
  }

 private:
  static constexpr int kMaxBins = 256;

  bool small_integer_column(std::span<const double> column) {
    int top = 0;
    for (auto r : rows_) {
      const double v = column[r];
      if (!(v >= 0.0 && v < kMaxBins)) return false;
      const int iv = static_cast<int>(v);
      if (iv != v) return false;
      top = std::max(top, iv);
    }
    bins_ = top + 1;
    return true;
  }

  // H_m - L for a left child described by the running accumulators.
  double gain(std::int64_t n_left, std::span<const std::int64_t> left_counts,
              double left_sum, const std::vector<double>* left_values,
              std::size_t split_pos) const {
    const std::int64_t n_right = n_ - n_left;
    const auto nl = static_cast<double>(n_left);
    const auto nr = static_cast<double>(n_right);
    const auto nm = static_cast<double>(n_);
    switch (criterion_) {
      case Criterion::gini: {
        double s = 0.0;
        for (std::size_t k = 0; k < classes_; ++k) {
          const double d = left_counts[k] / nl -
                           (parent_.class_counts[k] - left_counts[k]) / nr;
          s += d * d;
        }
        return nl * nr / (nm * nm) * s;
      }
      case Criterion::entropy:
      case Criterion::misclassification: {
        right_counts_.resize(classes_);
        for (std::size_t k = 0; k < classes_; ++k) {
          right_counts_[k] = parent_.class_counts[k] - left_counts[k];
        }
        const double hl = count_impurity(left_counts, n_left, criterion_);
        const double hr = count_impurity(right_counts_, n_right, criterion_);
        return parent_impurity_ - (nl * hl + nr * hr) / nm;
      }
      case Criterion::mse: {
        const double d = left_sum / nl - (total_sum_ - left_sum) / nr;
        return nl * nr / (nm * nm) * d * d;
      }
      case Criterion::mae: {
        const auto& v = *left_values;
        std::vector<double> left(v.begin(), v.begin() + split_pos);
        std::vector<double> right(v.begin() + split_pos, v.end());
        const double al = sum_abs_dev_from_median(std::move(left));
        const double ar = sum_abs_dev_from_median(std::move(right));
        return parent_impurity_ - (al + ar) / nm;
      }
    }
    return 0.0;
  }

  void offer(std::size_t feature, double threshold, double g) {
    if (!(g > tolerance_)) return;
    if (found_ && !(g > best_gain_ + tolerance_)) return;
    found_ = true;
    best_gain_ = g;
    best_split_ = {feature, threshold};
  }

  bool admissible(std::int64_t n_left) const {
    return n_left >= min_leaf_ && n_ - n_left >= min_leaf_;
  }

  void scan_binned(std::size_t feature, std::span<const double> column) {
    const auto nb = static_cast<std::size_t>(bins_);
    bin_n_.assign(nb, 0);
    if (classes_ > 0) {
      bin_counts_.assign(nb * classes_, 0);
    } else {
      bin_sum_.assign(nb, 0.0);
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const auto b = static_cast<std::size_t>(column[rows_[i]]);
      ++bin_n_[b];
      if (classes_ > 0) {
        ++bin_counts_[b * classes_ + static_cast<std::size_t>(ys_[i])];
      } else {
        bin_sum_[b] += ys_[i];
      }
    }
    left_counts_.assign(classes_, 0);
    double left_sum = 0.0;
    std::int64_t n_left = 0;
    std::size_t prev = nb;  // last non-empty bin
    for (std::size_t b = 0; b < nb; ++b) {
      if (bin_n_[b] == 0) continue;
      if (prev != nb && admissible(n_left)) {
        const double threshold = std::midpoint(static_cast<double>(prev),
                                               static_cast<double>(b));
        offer(feature, threshold,
              gain(n_left, left_counts_, left_sum, nullptr, 0));
      }
      n_left += bin_n_[b];
      if (classes_ > 0) {
        for (std::size_t k = 0; k < classes_; ++k) {
          left_counts_[k] += bin_counts_[b * classes_ + k];
        }
      } else {
        left_sum += bin_sum_[b];
      }
      prev = b;
    }
  }

  void scan_sorted(std::size_t feature, std::span<const double> column) {
    order_.resize(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      order_[i] = {column[rows_[i]], i};
    }
    std::sort(order_.begin(), order_.end());
    std::vector<double> sorted_y;
    if (criterion_ == Criterion::mae) {
      sorted_y.reserve(order_.size());
      for (auto& [v, i] : order_) sorted_y.push_back(ys_[i]);
    }
    left_counts_.assign(classes_, 0);
    double left_sum = 0.0;
    for (std::size_t pos = 0; pos + 1 < order_.size(); ++pos) {
      const std::size_t i = order_[pos].second;
      if (classes_ > 0) {
        ++left_counts_[static_cast<std::size_t>(ys_[i])];
      } else {
        left_sum += ys_[i];
      }
      const double here = order_[pos].first;
      const double next = order_[pos + 1].first;
      const auto n_left = static_cast<std::int64_t>(pos + 1);
      if (here == next || !admissible(n_left)) continue;
      offer(feature, std::midpoint(here, next),
            gain(n_left, left_counts_, left_sum, &sorted_y, pos + 1));
    }
  }

  const Dataset& data_;
  std::span<const std::size_t> rows_;
  Criterion criterion_;
  std::int64_t min_leaf_;
  NodeStats parent_;
  std::int64_t n_;
  std::size_t classes_;
  double parent_impurity_ = 0.0;
  double tolerance_ = 0.0;
  double total_sum_ = 0.0;
  std::vector<double> ys_;

  bool found_ = false;
  double best_gain_ = 0.0;
  Split best_split_;

  int bins_ = 0;
  std::vector<std::int64_t> bin_n_;
  std::vector<std::int64_t> bin_counts_;
  std::vector<double> bin_sum_;
  std::vector<std::int64_t> left_counts_;
  mutable std::vector<std::int64_t> right_counts_;
  std::vector<std::pair<double, std::size_t>> order_;
};

}  // namespace

std::optional<SplitCandidate> best_split(const Dataset& data,
                                         std::span<const std::size_t> rows,
                                         std::span<const std::size_t> features,
                                         Criterion criterion,
                                         int min_samples_leaf,
                                         std::size_t n_root) {
  if (rows.empty()) return std::nullopt;
  std::vector<std::size_t> ordered(features.begin(), features.end());
  std::sort(ordered.begin(), ordered.end());
  SplitScanner scanner(data, rows, criterion, min_samples_leaf, n_root);
  for (auto j : ordered) scanner.scan(j);
  return scanner.result();
}

Tree::Tree(Task task, int n_classes, std::size_t n_features,
           Criterion criterion, std::vector<TreeNode> nodes)
    : task_(task),
      n_classes_(task == Task::classification ? n_classes : 0),
      n_features_(n_features),
      criterion_(criterion),
      nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw DataError("tree has no nodes");
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const auto& node = nodes_[id];
    if (node.is_leaf()) continue;
    const auto size = static_cast<std::int32_t>(nodes_.size());
    if (node.left <= static_cast<std::int32_t>(id) || node.left >= size ||
        node.right <= static_cast<std::int32_t>(id) || node.right >= size ||
        node.split->feature >= n_features_) {
      throw DataError("malformed tree node " + std::to_string(id));
    }
  }
}

std::size_t Tree::n_internal() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](auto& n) { return !n.is_leaf(); }));
}

std::size_t Tree::leaf(const Dataset& data, std::size_t row) const {
  std::size_t id = 0;
  while (!nodes_[id].is_leaf()) {
    const auto& node = nodes_[id];
    id = static_cast<std::size_t>(
        node.split->goes_left(data.value(row, node.split->feature))
            ? node.left
            : node.right);
  }
  return id;
}

std::size_t Tree::leaf(std::span<const double> x) const {
  std::size_t id = 0;
  while (!nodes_[id].is_leaf()) {
    const auto& node = nodes_[id];
    id = static_cast<std::size_t>(
        node.split->goes_left(x[node.split->feature]) ? node.left
                                                       : node.right);
  }
  return id;
}

std::vector<double> Tree::leaf_value(std::size_t leaf_id) const {
  const auto& stats = nodes_[leaf_id].stats;
  if (task_ == Task::classification) return stats.proportions();
  return {stats.mean};
}

Tree grow(const Dataset& data, std::span<const std::size_t> rows,
          const TreeConfig& config) {
  std::mt19937_64 rng(config.seed);
  return grow(data, rows, config, rng);
}

Tree grow(const Dataset& data, std::span<const std::size_t> rows,
          const TreeConfig& config, std::mt19937_64& rng) {
  const std::size_t p = data.n_features();
  config.validate(p);
  if (task_of(config.criterion) != data.task()) {
    throw UsageError("criterion " + std::string(to_string(config.criterion)) +
                     " does not fit a " + std::string(to_string(data.task())) +
                     " dataset");
  }
  if (rows.empty()) throw UsageError("cannot grow a tree on zero samples");
  for (auto r : rows) {
    if (r >= data.n_rows()) throw UsageError("row index out of range");
  }

  const std::size_t n_root = rows.size();
  const std::size_t subset_size = config.max_features.resolve(p);
  std::vector<std::size_t> all_features(p);
  std::iota(all_features.begin(), all_features.end(), 0);
  std::vector<std::size_t> pool = all_features;
  std::vector<std::size_t> subset;

  std::vector<TreeNode> nodes;
  nodes.push_back({make_node_stats(data, rows, n_root), 0, {}, -1, -1, 0.0});

  struct Work {
    std::size_t id;
    std::vector<std::size_t> rows;
  };
  std::vector<Work> stack;
  stack.push_back({0, {rows.begin(), rows.end()}});

  while (!stack.empty()) {
    Work work = std::move(stack.back());
    stack.pop_back();
    const int depth = nodes[work.id].depth;
    const double h = impurity(nodes[work.id].stats, config.criterion);
    if ((config.max_depth && depth >= *config.max_depth) ||
        work.rows.size() < static_cast<std::size_t>(config.min_samples_split) ||
        h <= 0.0) {
      continue;
    }

    std::optional<SplitCandidate> best;
    if (subset_size < p) {
      for (std::size_t i = 0; i < subset_size; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, p - 1);
        std::swap(pool[i], pool[pick(rng)]);
      }
      subset.assign(pool.begin(),
                    pool.begin() + static_cast<std::ptrdiff_t>(subset_size));
      best = best_split(data, work.rows, subset, config.criterion,
                        config.min_samples_leaf, n_root);
    }
    if (!best) {
      best = best_split(data, work.rows, all_features, config.criterion,
                        config.min_samples_leaf, n_root);
    }
    if (!best) continue;

    std::vector<std::size_t> left_rows, right_rows;
    const auto column = data.column(best->split.feature);
    for (auto r : work.rows) {
      (best->split.goes_left(column[r]) ? left_rows : right_rows).push_back(r);
    }
    auto left_stats = make_node_stats(data, left_rows, n_root);
    auto right_stats = make_node_stats(data, right_rows, n_root);

    const auto left_id = static_cast<std::int32_t>(nodes.size());
    auto& parent = nodes[work.id];
    parent.split = best->split;
    parent.left = left_id;
    parent.right = left_id + 1;
    parent.train_decrease = weighted_decrease(
        left_stats.weight, right_stats.weight, h,
        impurity(left_stats, config.criterion),
        impurity(right_stats, config.criterion));
    nodes.push_back({std::move(left_stats), depth + 1, {}, -1, -1, 0.0});
    nodes.push_back({std::move(right_stats), depth + 1, {}, -1, -1, 0.0});

    stack.push_back({static_cast<std::size_t>(left_id) + 1,
                     std::move(right_rows)});
    stack.push_back({static_cast<std::size_t>(left_id), std::move(left_rows)});
  }
  return Tree(data.task(), data.n_classes(), p, config.criterion,
              std::move(nodes));
}

std::vector<std::vector<std::size_t>> route(const Tree& tree,
                                            const Dataset& samples,
                                            std::span<const std::size_t> rows) {
  if (samples.n_features() != tree.n_features()) {
    throw DataError("samples have " + std::to_string(samples.n_features()) +
                    " columns, tree expects " +
                    std::to_string(tree.n_features()));
  }
  std::vector<std::vector<std::size_t>> lists(tree.size());
  for (auto r : rows) {
    std::size_t id = 0;
    for (;;) {
      lists[id].push_back(r);
      const auto& node = tree.node(id);
      if (node.is_leaf()) break;
      id = static_cast<std::size_t>(
          node.split->goes_left(samples.value(r, node.split->feature))
              ? node.left
              : node.right);
    }
  }
  return lists;
}

std::vector<std::vector<std::size_t>> route(const Tree& tree,
                                            const Dataset& samples) {
  std::vector<std::size_t> rows(samples.n_rows());
  std::iota(rows.begin(), rows.end(), 0);
  return route(tree, samples, rows);
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[best]) best = k;
  }
  return best;
}

Predictions predict(const Tree& tree, const Dataset& samples) {
  if (samples.n_features() != tree.n_features()) {
    throw DataError("samples have " + std::to_string(samples.n_features()) +
                    " columns, tree expects " +
                    std::to_string(tree.n_features()));
  }
  Predictions out;
  out.values.reserve(samples.n_rows());
  for (std::size_t i = 0; i < samples.n_rows(); ++i) {
    auto value = tree.leaf_value(tree.leaf(samples, i));
    if (tree.task() == Task::classification) {
      out.values.push_back(static_cast<double>(argmax(value)));
      out.probabilities.push_back(std::move(value));
    } else {
      out.values.push_back(value[0]);
    }
  }
  return out;
}

}  // namespace ufi
