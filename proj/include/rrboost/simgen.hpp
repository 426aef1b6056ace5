#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rrboost/dataset.hpp"

namespace rrboost {

enum class GFunction { G1, G2, G3 };
enum class Structure { S0, S1, S2 };
enum class ErrorModel { D0, D1, D2, D3, D4 };

std::string_view to_string(GFunction g);
std::string_view to_string(Structure s);
GFunction g_function_from_string(std::string_view name);
Structure structure_from_string(std::string_view name);

struct ErrorSpec {
  ErrorModel model = ErrorModel::D0;
  /// Contamination rate for D1 / D2.
  double alpha = 0.0;

  /// "D0", "D1:0.2", "D2:0.1", "D3", "D4".
  static ErrorSpec parse(std::string_view text);
  /// Table-style label such as "D2(20%)".
  std::string label() const;
  void validate() const;

  friend bool operator==(const ErrorSpec&, const ErrorSpec&) = default;
};

/// How Var(eps) enters C = sqrt(Var(g) / (snr * Var(eps))).
enum class NoiseConvention {
  /// Var(eps) = 1 for every error model (the clean-error variance).
  Nominal,
  /// Monte Carlo variance of the error model; D4 still uses 1.
  Empirical,
};

struct SimSetting {
  GFunction g = GFunction::G1;
  Structure structure = Structure::S0;
  ErrorSpec errors;
  std::size_t n_train = 300;
  std::size_t n_val = 200;
  std::size_t n_test = 1000;
  std::size_t p = 10;
  double snr = 6.0;
  std::uint64_t seed = 0;
  NoiseConvention convention = NoiseConvention::Nominal;
  std::size_t calibration_draws = 200000;

  /// The three representative settings: 1 = (g1, S0, 300, 10, SNR 6),
  /// 2 = (g2, S1, 3000, 400, SNR 10), 3 = (g3, S2, 300, 400, SNR 10).
  /// Validation size is 2n/3.
  static SimSetting preset(int which, ErrorSpec errors, std::uint64_t seed);
  void validate() const;
};

/// Regression function on the first four or five coordinates of x.
double eval_g(GFunction g, std::span<const double> x);

/// Gaussian-stage correlation matrix of the p features (row-major p x p).
std::vector<double> correlation_matrix(Structure s, GFunction g, std::size_t p);

/// Uniform(0,1) marginals through a Gaussian copula; for g2 coordinates 2 and
/// 4 are shifted to U(1,2).
Matrix gen_features(std::size_t n, std::size_t p, Structure s, GFunction g, std::mt19937_64& rng);

std::vector<double> gen_errors(const ErrorSpec& errors, std::size_t n, std::mt19937_64& rng);

/// Error amplitude C reaching the requested SNR, with Var(g) estimated from
/// `draws` Monte Carlo feature rows.
double calibrate_snr(GFunction g, Structure s, const ErrorSpec& errors, double snr,
                     std::mt19937_64& rng, NoiseConvention convention = NoiseConvention::Nominal,
                     std::size_t draws = 200000);

struct SimData {
  Dataset train;
  Dataset val;
  /// Always clean (D0) errors.
  Dataset test;
  double c = 0.0;
};

SimData make_setting(const SimSetting& setting);

/// 0-based indices of the coordinates g depends on.
std::vector<std::size_t> true_set(GFunction g);

/// Independent generator for a named sub-stream of a seed.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

}  // namespace rrboost

namespace rrboost {

/// C = sqrt(Var(y) / snr) for adding errors to observed responses.
double contamination_scale(std::span<const double> y, double snr);

/// y_i += c * eps_i with eps drawn from `errors`.
void add_noise(Dataset& data, const ErrorSpec& errors, double c, std::mt19937_64& rng);

}  // namespace rrboost
