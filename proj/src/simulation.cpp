#include "ufi/simulation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace ufi {

std::string_view to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::null_mixed:
      return "null-mixed";
    case Scenario::signal:
      return "signal";
    case Scenario::discrete10:
      return "discrete10";
    case Scenario::probe:
      return "probe";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view text) {
  for (auto s : {Scenario::null_mixed, Scenario::signal, Scenario::discrete10,
                 Scenario::probe}) {
    if (to_string(s) == text) return s;
  }
  throw UsageError("unknown scenario '" + std::string(text) + "'");
}

std::string_view to_string(Encoding encoding) {
  return encoding == Encoding::dummy ? "dummy" : "ordinal";
}

Encoding parse_encoding(std::string_view text) {
  if (text == "dummy") return Encoding::dummy;
  if (text == "ordinal") return Encoding::ordinal;
  throw UsageError("unknown encoding '" + std::string(text) + "'");
}

void SimSetting::validate() const {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw UsageError("rho must lie in [0, 1]");
  }
  if (n < 10) throw UsageError("n must be >= 10");
  if (reps < 1) throw UsageError("reps must be >= 1");
}

namespace {

constexpr std::array<int, 4> kMixedLevels = {2, 4, 10, 20};

// Shared feature block of the null and signal scenarios.
struct MixedFeatures {
  std::vector<std::vector<double>> columns;
  std::vector<std::string> names;
  std::vector<FeatureKind> kinds;
};

MixedFeatures draw_mixed_features(std::size_t n, std::mt19937_64& rng) {
  MixedFeatures f;
  f.columns.assign(1 + kMixedLevels.size(), std::vector<double>(n));
  f.names = {"X1", "X2", "X3", "X4", "X5"};
  f.kinds.push_back(FeatureKind::continuous());
  for (int levels : kMixedLevels) {
    f.kinds.push_back(FeatureKind::categorical(levels));
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    f.columns[0][i] = normal(rng);
    for (std::size_t c = 0; c < kMixedLevels.size(); ++c) {
      std::uniform_int_distribution<int> level(0, kMixedLevels[c] - 1);
      f.columns[c + 1][i] = level(rng);
    }
  }
  return f;
}

}  // namespace

Dataset gen_null_mixed(std::size_t n, Task task, std::mt19937_64& rng) {
  auto f = draw_mixed_features(n, rng);
  std::vector<double> y(n);
  if (task == Task::classification) {
    std::bernoulli_distribution coin(0.5);
    for (auto& v : y) v = coin(rng) ? 1.0 : 0.0;
  } else {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& v : y) v = normal(rng);
  }
  return Dataset(std::move(f.columns), std::move(y), std::move(f.names),
                 std::move(f.kinds), task, task == Task::classification ? 2 : 0);
}

Dataset gen_signal(std::size_t n, double rho, Task task, std::mt19937_64& rng) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw UsageError("rho must lie in [0, 1]");
  auto f = draw_mixed_features(n, rng);
  const auto& x2 = f.columns[1];
  std::vector<double> y(n);
  if (task == Task::classification) {
    std::bernoulli_distribution flip((1.0 - rho) / 2.0);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = flip(rng) ? 1.0 - x2[i] : x2[i];
    }
  } else {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) y[i] = rho * x2[i] + normal(rng);
  }
  return Dataset(std::move(f.columns), std::move(y), std::move(f.names),
                 std::move(f.kinds), task, task == Task::classification ? 2 : 0);
}

Dataset gen_discrete10(std::size_t n, Task task, std::mt19937_64& rng) {
  constexpr int kFeatures = 10;
  std::vector<std::vector<double>> cols(kFeatures, std::vector<double>(n));
  std::vector<std::string> names;
  for (int i = 1; i <= kFeatures; ++i) names.push_back("X" + std::to_string(i));
  std::vector<FeatureKind> kinds(kFeatures, FeatureKind::ordinal());
  std::vector<double> y(n);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (int i = 1; i <= kFeatures; ++i) {
      std::uniform_int_distribution<int> value(0, std::max(i, 2) - 1);
      cols[static_cast<std::size_t>(i - 1)][r] = value(rng);
    }
    const double x1 = cols[0][r];
    if (task == Task::regression) {
      y[r] = x1 + 5.0 * normal(rng);
    } else {
      std::bernoulli_distribution positive(x1 == 1.0 ? 0.55 : 0.45);
      y[r] = positive(rng) ? 1.0 : 0.0;
    }
  }
  return Dataset(std::move(cols), std::move(y), std::move(names),
                 std::move(kinds), task, task == Task::classification ? 2 : 0);
}

Dataset gen_probe_mixed(std::size_t n, Task task, std::mt19937_64& rng) {
  struct Categorical {
    const char* name;
    int levels;
    double strength;  // effect range across levels
  };
  static constexpr std::array<Categorical, 5> kCategoricals = {{
      {"workclass", 7, 0.2},
      {"education", 16, 0.8},
      {"marital", 7, 1.6},
      {"occupation", 14, 0.8},
      {"race", 5, 0.1},
  }};
  constexpr double kAgeEffect = 0.8;
  constexpr double kSexEffect = 0.3;

  std::vector<std::vector<double>> cols;
  std::vector<std::string> names = {"age", "sex"};
  std::vector<FeatureKind> kinds = {FeatureKind::continuous(),
                                    FeatureKind::binary()};
  for (const auto& c : kCategoricals) {
    names.emplace_back(c.name);
    kinds.push_back(FeatureKind::categorical(c.levels));
  }
  cols.assign(names.size(), std::vector<double>(n));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    cols[0][i] = normal(rng);
    cols[1][i] = coin(rng) ? 1.0 : 0.0;
    double eta = kAgeEffect * cols[0][i] + kSexEffect * (cols[1][i] - 0.5);
    for (std::size_t c = 0; c < kCategoricals.size(); ++c) {
      const auto& spec = kCategoricals[c];
      std::uniform_int_distribution<int> level(0, spec.levels - 1);
      const int k = level(rng);
      cols[c + 2][i] = k;
      // Alternating level effects spread evenly over [-strength/2, strength/2].
      const double position =
          static_cast<double>((k * 3) % spec.levels) / (spec.levels - 1);
      eta += spec.strength * (position - 0.5);
    }
    if (task == Task::classification) {
      std::bernoulli_distribution positive(1.0 / (1.0 + std::exp(-eta)));
      y[i] = positive(rng) ? 1.0 : 0.0;
    } else {
      y[i] = eta + normal(rng);
    }
  }
  Dataset base(std::move(cols), std::move(y), std::move(names),
               std::move(kinds), task, task == Task::classification ? 2 : 0);
  std::uniform_int_distribution<std::uint64_t> seed_draw;
  return inject_random_feature(base, seed_draw(rng));
}

Dataset as_ordinal(const Dataset& data) {
  auto kinds = data.kinds();
  for (auto& k : kinds) {
    if (k.is_categorical()) k = FeatureKind::ordinal();
  }
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < data.n_features(); ++j) {
    cols.emplace_back(data.column(j).begin(), data.column(j).end());
  }
  return Dataset(std::move(cols),
                 std::vector<double>(data.target().begin(), data.target().end()),
                 data.names(), std::move(kinds), data.task(), data.n_classes(),
                 data.levels());
}

std::vector<double> rank_descending(std::span<const double> scores) {
  const std::size_t p = scores.size();
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return scores[a] > scores[b];
  });
  std::vector<double> ranks(p);
  std::size_t i = 0;
  while (i < p) {
    std::size_t j = i;
    while (j + 1 < p && scores[order[j + 1]] == scores[order[i]]) ++j;
    // positions i..j (0-based) share ranks i+1..j+1
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

std::vector<double> average_rank(
    const std::vector<std::vector<double>>& scores) {
  if (scores.empty()) return {};
  std::vector<double> total(scores.front().size(), 0.0);
  for (const auto& row : scores) {
    const auto ranks = rank_descending(row);
    for (std::size_t j = 0; j < total.size(); ++j) total[j] += ranks[j];
  }
  for (auto& t : total) t /= static_cast<double>(scores.size());
  return total;
}

std::vector<double> ExperimentResult::standard_error() const {
  std::vector<double> se(sd.size());
  const double root = std::sqrt(static_cast<double>(scores.size()));
  for (std::size_t j = 0; j < sd.size(); ++j) se[j] = sd[j] / root;
  return se;
}

ExperimentResult summarize(ImportanceMethod method,
                           std::vector<std::string> features,
                           std::vector<std::vector<double>> scores) {
  ExperimentResult r;
  r.method = method;
  r.features = std::move(features);
  r.scores = std::move(scores);
  const std::size_t p = r.features.size();
  const auto reps = static_cast<double>(r.scores.size());
  r.mean.assign(p, 0.0);
  r.sd.assign(p, 0.0);
  for (const auto& row : r.scores) {
    for (std::size_t j = 0; j < p; ++j) r.mean[j] += row[j];
  }
  for (auto& m : r.mean) m /= reps;
  if (r.scores.size() > 1) {
    for (std::size_t j = 0; j < p; ++j) {
      double ss = 0.0;
      for (const auto& row : r.scores) {
        ss += (row[j] - r.mean[j]) * (row[j] - r.mean[j]);
      }
      r.sd[j] = std::sqrt(ss / (reps - 1.0));
    }
  }
  r.avg_rank = average_rank(r.scores);
  return r;
}

Dataset generate_rep(const SimSetting& setting, std::size_t rep) {
  std::mt19937_64 rng(derive_seed(setting.seed, kRepStream, rep));
  switch (setting.scenario) {
    case Scenario::null_mixed:
      return gen_null_mixed(setting.n, setting.task, rng);
    case Scenario::signal:
      return gen_signal(setting.n, setting.rho, setting.task, rng);
    case Scenario::discrete10:
      return gen_discrete10(setting.n, setting.task, rng);
    case Scenario::probe:
      return gen_probe_mixed(setting.n, setting.task, rng);
  }
  throw UsageError("unknown scenario");
}

std::vector<ExperimentResult> run_experiment(
    const SimSetting& setting, const ForestConfig& forest,
    std::span<const ImportanceMethod> methods, int threads) {
  setting.validate();
  if (methods.empty()) throw UsageError("no importance methods requested");

  // rep x method -> folded score row
  std::vector<std::vector<std::vector<double>>> rows(
      setting.reps, std::vector<std::vector<double>>(methods.size()));
  std::vector<std::string> folded_names;

  parallel_for(setting.reps, threads, [&](std::size_t rep) {
    const Dataset raw = generate_rep(setting, rep);
    Dataset data = raw;
    DummyGroupMap map;
    if (setting.encoding == Encoding::dummy) {
      auto encoded = dummy_encode(raw);
      data = std::move(encoded.first);
      map = std::move(encoded.second);
    } else {
      data = as_ordinal(raw);
    }
    ForestConfig config = forest;
    config.seed = derive_seed(setting.seed, kRepStream + 100, rep);
    const Forest fitted = fit(data, config, 1);
    for (std::size_t m = 0; m < methods.size(); ++m) {
      ImportanceReport report;
      switch (methods[m]) {
        case ImportanceMethod::si:
          report = si_forest(fitted, data.names());
          break;
        case ImportanceMethod::ufi:
          report = ufi_forest_oob(fitted, data);
          break;
        case ImportanceMethod::permutation: {
          PermutationOptions options;
          options.seed = derive_seed(setting.seed, kPermutationStream, rep);
          report = permutation_importance(fitted, data, data.names(), options);
          break;
        }
      }
      rows[rep][m] = fold_importances(report.scores, data.names(), map).scores;
    }
  });

  {
    // Folded names depend only on the generator's schema.
    const Dataset probe = generate_rep(setting, 0);
    if (setting.encoding == Encoding::dummy) {
      auto [data, map] = dummy_encode(probe);
      std::vector<double> zeros(data.n_features(), 0.0);
      folded_names = fold_importances(zeros, data.names(), map).names;
    } else {
      folded_names = probe.names();
    }
  }

  std::vector<ExperimentResult> results;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    std::vector<std::vector<double>> matrix;
    matrix.reserve(setting.reps);
    for (std::size_t rep = 0; rep < setting.reps; ++rep) {
      matrix.push_back(std::move(rows[rep][m]));
    }
    results.push_back(summarize(methods[m], folded_names, std::move(matrix)));
  }
  return results;
}

}  // namespace ufi
