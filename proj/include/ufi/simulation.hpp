#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ufi/dataset.hpp"
#include "ufi/forest.hpp"
#include "ufi/importance.hpp"

namespace ufi {

enum class Scenario { null_mixed, signal, discrete10, probe };
enum class Encoding { dummy, ordinal };

std::string_view to_string(Scenario scenario);
Scenario parse_scenario(std::string_view text);
std::string_view to_string(Encoding encoding);
Encoding parse_encoding(std::string_view text);

struct SimSetting {
  Scenario scenario = Scenario::null_mixed;
  double rho = 0.0;  // signal scenario only
  Task task = Task::classification;
  Encoding encoding = Encoding::dummy;
  std::size_t n = 1000;
  std::size_t reps = 100;
  std::uint64_t seed = 0;

  /// Throws UsageError unless rho in [0,1], n >= 10, reps >= 1.
  void validate() const;
};

/// X1 ~ N(0,1); X2..X5 uniform categorical with 2, 4, 10, 20 levels;
/// y ~ Bernoulli(0.5) or N(0,1), independent of every feature.
Dataset gen_null_mixed(std::size_t n, Task task, std::mt19937_64& rng);

/// Features as gen_null_mixed. Regression: y = rho * X2 + N(0,1).
/// Classification: y = X2 with each label flipped w.p. (1 - rho) / 2.
Dataset gen_signal(std::size_t n, double rho, Task task, std::mt19937_64& rng);

/// Ten ordinal features; X1 uniform on {0,1}, X_i uniform on {0..i-1} for
/// i >= 2. Regression: y = X1 + 5 N(0,1). Classification: P(y = 1) = 0.55
/// when X1 = 1, else 0.45.
Dataset gen_discrete10(std::size_t n, Task task, std::mt19937_64& rng);

/// Census-like mixed data: one continuous feature, one binary feature and
/// five categorical features (7, 16, 7, 14, 5 levels) with effects of
/// different strength on y, plus an appended N(0,1) "random" probe column.
/// Regression uses the same linear predictor plus N(0,1) noise;
/// classification draws y from its logistic transform.
Dataset gen_probe_mixed(std::size_t n, Task task, std::mt19937_64& rng);

/// Categorical columns re-labelled as ordinal integer codes.
Dataset as_ordinal(const Dataset& data);

/// Ranks of one score vector, largest = 1, ties share the average rank.
std::vector<double> rank_descending(std::span<const double> scores);

/// Per-feature mean of rank_descending over the rows of a reps x p matrix.
std::vector<double> average_rank(const std::vector<std::vector<double>>& scores);

struct ExperimentResult {
  ImportanceMethod method = ImportanceMethod::si;
  std::vector<std::string> features;
  std::vector<std::vector<double>> scores;  // reps x p, folded
  std::vector<double> mean;
  std::vector<double> sd;  // sample SD across reps
  std::vector<double> avg_rank;

  /// sd / sqrt(reps).
  std::vector<double> standard_error() const;
};

/// Summary statistics over the rows of a reps x p score matrix.
ExperimentResult summarize(ImportanceMethod method,
                           std::vector<std::string> features,
                           std::vector<std::vector<double>> scores);

/// One fresh dataset per repetition (seeded from setting.seed and the rep
/// index), encoded per setting, fit with `forest` (its seed is replaced by a
/// per-rep seed), scored by every method (UFI and permutation use OOB rows)
/// and folded back to the original features. Repetitions may run on
/// `threads` workers; the result does not depend on it.
std::vector<ExperimentResult> run_experiment(
    const SimSetting& setting, const ForestConfig& forest,
    std::span<const ImportanceMethod> methods, int threads = 1);

/// The dataset generated for repetition `rep` (before encoding).
Dataset generate_rep(const SimSetting& setting, std::size_t rep);

}  // namespace ufi
