#include "rrboost/importance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rrboost/ensemble.hpp"
#include "rrboost/errors.hpp"

namespace rrboost {

double robust_mad(std::span<const double> values, double mad_constant) {
  if (values.empty()) throw DataError("MAD of an empty vector");
  const double mu = median(values);
  std::vector<double> dev(values.size());
  std::transform(values.begin(), values.end(), dev.begin(), [mu](double v) { return std::abs(v - mu); });
  return mad_constant * median(dev);
}

std::vector<std::size_t> trim_validation(std::span<const double> predictions,
                                         std::span<const double> y, const TrimOptions& opts) {
  if (predictions.size() != y.size()) throw DataError("predictions and responses differ in length");
  if (y.empty()) return {};
  std::vector<double> e(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) e[i] = predictions[i] - y[i];
  const double mu = median(e);
  const double sigma = robust_mad(e, opts.mad_constant);
  std::vector<std::size_t> keep;
  keep.reserve(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double d = std::abs(e[i] - mu);
    if (sigma > 0.0 ? d < opts.cutoff * sigma : d == 0.0) keep.push_back(i);
  }
  return keep;
}

void seeded_permutation(std::uint64_t seed, std::size_t feature, int repeat,
                        std::span<std::size_t> perm) {
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(feature), static_cast<std::uint32_t>(repeat),
                    0x5eedu};
  std::mt19937_64 rng(seq);
  std::shuffle(perm.begin(), perm.end(), rng);
}

namespace {

double trimmed_rmse_of(std::span<const double> pred, std::span<const double> y,
                       std::span<const std::size_t> keep) {
  double s = 0.0;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const double e = pred[k] - y[keep[k]];
    s += e * e;
  }
  return std::sqrt(s / static_cast<double>(keep.size()));
}

}  // namespace

ImportanceReport permutation_importance(const Ensemble& model, const Dataset& val,
                                        const Permuter& permuter, const ImportanceOptions& opts) {
  if (val.size() == 0) throw DataError("importance needs a non-empty validation set");
  if (opts.repeats < 1) throw UsageError("importance repeats must be >= 1");
  const std::size_t n = val.size();
  const std::size_t p = val.num_features();

  const auto base_pred = model.predict(val.x, opts.exec);
  const auto keep = trim_validation(base_pred, val.y, opts.trim);
  if (keep.empty()) throw DataError("trimming removed every validation row");

  std::vector<double> kept_pred(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) kept_pred[k] = base_pred[keep[k]];
  const double base = trimmed_rmse_of(kept_pred, val.y, keep);

  ImportanceReport report;
  report.scores.assign(p, 0.0);
  report.trimmed_size = keep.size();
  report.seed = opts.seed;
  report.repeats = opts.repeats;

  auto score_feature = [&](std::size_t j) {
    // Permuting a column no split reads leaves every prediction unchanged.
    if (!model.uses_feature(j)) return 0.0;
    std::vector<std::size_t> perm(n);
    std::vector<double> row(p);
    std::vector<double> pred(keep.size());
    double total = 0.0;
    for (int rep = 0; rep < opts.repeats; ++rep) {
      permuter(j, rep, perm);
      for (std::size_t k = 0; k < keep.size(); ++k) {
        const auto src = val.x.row(keep[k]);
        std::copy(src.begin(), src.end(), row.begin());
        row[j] = val.x(perm[keep[k]], j);
        pred[k] = model.predict(row);
      }
      total += trimmed_rmse_of(pred, val.y, keep) - base;
    }
    return total / static_cast<double>(opts.repeats);
  };

  const auto pp = static_cast<std::ptrdiff_t>(p);
  if (opts.exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1) if (pp > 1)
    for (std::ptrdiff_t j = 0; j < pp; ++j) {
      report.scores[static_cast<std::size_t>(j)] = score_feature(static_cast<std::size_t>(j));
    }
  } else {
    for (std::size_t j = 0; j < p; ++j) report.scores[j] = score_feature(j);
  }
  return report;
}

ImportanceReport permutation_importance(const Ensemble& model, const Dataset& val,
                                        const ImportanceOptions& opts) {
  const auto seed = opts.seed;
  return permutation_importance(
      model, val,
      [seed](std::size_t feature, int repeat, std::span<std::size_t> perm) {
        seeded_permutation(seed, feature, repeat, perm);
      },
      opts);
}

double recovery_fraction(std::span<const double> scores, std::span<const std::size_t> true_set) {
  if (true_set.empty()) return 1.0;
  if (true_set.size() > scores.size()) throw UsageError("true set larger than the feature count");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double cutoff = sorted[true_set.size() - 1];
  std::size_t hits = 0;
  for (auto j : true_set) {
    if (j >= scores.size()) throw UsageError("true-set index out of range");
    if (scores[j] >= cutoff) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(true_set.size());
}

}  // namespace rrboost
