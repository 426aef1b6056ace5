#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rrboost/dataset.hpp"
#include "rrboost/tree.hpp"

namespace rrboost {

struct Ensemble;

/// The consistency constant printed alongside the 3-MAD trimming rule.
inline constexpr double kMadConstant = 1.438;

struct TrimOptions {
  double mad_constant = kMadConstant;
  double cutoff = 3.0;
};

/// mad_constant * median_i |v_i - median(v)|.
double robust_mad(std::span<const double> values, double mad_constant = kMadConstant);

/// Indices i (ascending) whose prediction error e_i = predictions_i - y_i
/// satisfies |e_i - median(e)| < cutoff * MAD(e). When MAD(e) is zero only
/// errors equal to the median survive, so constant errors keep everything.
std::vector<std::size_t> trim_validation(std::span<const double> predictions,
                                         std::span<const double> y, const TrimOptions& opts = {});

struct ImportanceReport {
  std::vector<double> scores;
  std::size_t trimmed_size = 0;
  std::uint64_t seed = 0;
  int repeats = 1;
};

struct ImportanceOptions {
  std::uint64_t seed = 0;
  /// Shuffles per feature; VI is averaged over them.
  int repeats = 1;
  TrimOptions trim;
  Execution exec = Execution::Parallel;
};

/// Writes a permutation of [0, perm.size()) for (feature, repeat).
using Permuter = std::function<void(std::size_t feature, int repeat, std::span<std::size_t> perm)>;

/// Robust permutation importance of every feature: trimmed RMSE with column j
/// shuffled minus trimmed RMSE of the intact data, both over the trimmed set
/// computed once from the unpermuted predictions.
ImportanceReport permutation_importance(const Ensemble& model, const Dataset& val,
                                        const ImportanceOptions& opts = {});

/// Same computation with caller-supplied permutations.
ImportanceReport permutation_importance(const Ensemble& model, const Dataset& val,
                                        const Permuter& permuter, const ImportanceOptions& opts);

/// Seeded shuffle used by permutation_importance for (seed, feature, repeat).
void seeded_permutation(std::uint64_t seed, std::size_t feature, int repeat,
                        std::span<std::size_t> perm);

/// Fraction of `true_set` whose score is >= the |true_set|-th largest score.
double recovery_fraction(std::span<const double> scores, std::span<const std::size_t> true_set);

}  // namespace rrboost
