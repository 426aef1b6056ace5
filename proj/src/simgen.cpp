#include "rrboost/simgen.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rrboost/errors.hpp"

namespace rrboost {

namespace {

std::size_t active_count(GFunction g) { return g == GFunction::G2 ? 4 : 5; }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

std::string_view to_string(GFunction g) {
  switch (g) {
    case GFunction::G1: return "g1";
    case GFunction::G2: return "g2";
    case GFunction::G3: return "g3";
  }
  return "?";
}

std::string_view to_string(Structure s) {
  switch (s) {
    case Structure::S0: return "S0";
    case Structure::S1: return "S1";
    case Structure::S2: return "S2";
  }
  return "?";
}

GFunction g_function_from_string(std::string_view name) {
  if (name == "g1") return GFunction::G1;
  if (name == "g2") return GFunction::G2;
  if (name == "g3") return GFunction::G3;
  throw UsageError("unknown regression function '" + std::string(name) + "'");
}

Structure structure_from_string(std::string_view name) {
  if (name == "S0") return Structure::S0;
  if (name == "S1") return Structure::S1;
  if (name == "S2") return Structure::S2;
  throw UsageError("unknown correlation structure '" + std::string(name) + "'");
}

ErrorSpec ErrorSpec::parse(std::string_view text) {
  ErrorSpec e;
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  if (head == "D0") e.model = ErrorModel::D0;
  else if (head == "D1") e.model = ErrorModel::D1;
  else if (head == "D2") e.model = ErrorModel::D2;
  else if (head == "D3") e.model = ErrorModel::D3;
  else if (head == "D4") e.model = ErrorModel::D4;
  else throw UsageError("unknown error model '" + std::string(text) + "'");
  const bool mixture = e.model == ErrorModel::D1 || e.model == ErrorModel::D2;
  if (colon == std::string_view::npos) {
    if (mixture) throw UsageError(std::string(head) + " needs a rate, e.g. " + std::string(head) + ":0.2");
  } else {
    if (!mixture) throw UsageError(std::string(head) + " takes no rate");
    const std::string rate(text.substr(colon + 1));
    std::size_t used = 0;
    try {
      e.alpha = std::stod(rate, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rate.size()) throw UsageError("bad contamination rate '" + rate + "'");
  }
  e.validate();
  return e;
}

std::string ErrorSpec::label() const {
  std::ostringstream os;
  os << 'D' << static_cast<int>(model);
  if (model == ErrorModel::D1 || model == ErrorModel::D2) os << '(' << alpha * 100.0 << "%)";
  return os.str();
}

void ErrorSpec::validate() const {
  if (!(alpha >= 0.0 && alpha < 0.5)) throw UsageError("contamination rate must lie in [0, 0.5)");
}

SimSetting SimSetting::preset(int which, ErrorSpec errors, std::uint64_t seed) {
  SimSetting s;
  s.errors = errors;
  s.seed = seed;
  switch (which) {
    case 1: s.g = GFunction::G1; s.structure = Structure::S0; s.n_train = 300; s.p = 10; s.snr = 6; break;
    case 2: s.g = GFunction::G2; s.structure = Structure::S1; s.n_train = 3000; s.p = 400; s.snr = 10; break;
    case 3: s.g = GFunction::G3; s.structure = Structure::S2; s.n_train = 300; s.p = 400; s.snr = 10; break;
    default: throw UsageError("setting must be 1, 2 or 3");
  }
  s.n_val = 2 * s.n_train / 3;
  return s;
}

void SimSetting::validate() const {
  errors.validate();
  if (p < active_count(g)) throw UsageError("p is smaller than the number of active features");
  if (n_train == 0 || n_val == 0 || n_test == 0) throw UsageError("split sizes must be positive");
  if (!(snr > 0.0) || !std::isfinite(snr)) throw UsageError("snr must be positive");
  if (calibration_draws < 2) throw UsageError("calibration needs at least two draws");
}

double eval_g(GFunction g, std::span<const double> x) {
  if (x.size() < active_count(g)) throw DataError("feature row too short for the regression function");
  switch (g) {
    case GFunction::G1: {
      const double t = x[2] - 0.5;
      return 2.0 * x[0] - 2.0 * x[1] + 8.0 * t * t + std::exp(x[3]) +
             0.5 * std::cos(8.0 * std::numbers::pi * x[4]) * std::exp(2.0 * x[4]);
    }
    case GFunction::G2: {
      const double d = x[1] * x[3];
      if (d == 0.0) throw DataError("g2 is undefined when x2 * x4 = 0");
      const double t = x[1] * x[2] - 1.0 / d;
      return 5.0 * std::sqrt(x[0] * x[0] + t * t);
    }
    case GFunction::G3: {
      double a = 0.0;
      for (int j = 1; j <= 5; ++j) {
        const double v = x[static_cast<std::size_t>(j - 1)];
        a += 1.0 + (j % 2 == 0 ? 0.8 : -0.8) * v + std::sin(6.0 * v);
      }
      double b = 0.0;
      for (std::size_t j = 0; j < 3; ++j) b += 1.0 + x[j] / 3.0;
      return a * b;
    }
  }
  return 0.0;
}

std::vector<double> correlation_matrix(Structure s, GFunction g, std::size_t p) {
  std::vector<double> r(p * p, 0.0);
  auto block = [g](std::size_t j) -> int {
    if (g == GFunction::G2) return j < 2 ? 0 : (j < 4 ? 1 : -1);
    return j < 3 ? 0 : (j < 5 ? 1 : -1);
  };
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double v = i == j ? 1.0 : 0.0;
      if (i != j && s == Structure::S1) {
        v = std::pow(0.8, static_cast<double>(i > j ? i - j : j - i));
      } else if (i != j && s == Structure::S2) {
        const int bi = block(i);
        v = bi >= 0 && bi == block(j) ? 0.8 : 0.0;
      }
      r[i * p + j] = v;
    }
  }
  return r;
}

Matrix gen_features(std::size_t n, std::size_t p, Structure s, GFunction g, std::mt19937_64& rng) {
  if (p < active_count(g)) throw UsageError("p is smaller than the number of active features");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd w(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = normal(rng);
  }
  if (s != Structure::S0) {
    const auto r = correlation_matrix(s, g, p);
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> rm(
        r.data(), static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    const Eigen::LLT<Eigen::MatrixXd> llt(rm);
    if (llt.info() != Eigen::Success) throw NumericalError("correlation matrix is not positive definite");
    const Eigen::MatrixXd lower = llt.matrixL();
    w = (w * lower.transpose()).eval();
  }
  Matrix x(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double u = normal_cdf(w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      if (g == GFunction::G2 && (j == 1 || j == 3)) u += 1.0;
      x(i, j) = u;
    }
  }
  return x;
}

std::vector<double> gen_errors(const ErrorSpec& errors, std::size_t n, std::mt19937_64& rng) {
  errors.validate();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> e(n);
  for (auto& v : e) {
    switch (errors.model) {
      case ErrorModel::D0: v = normal(rng); break;
      case ErrorModel::D1:
      case ErrorModel::D2: {
        const double u = unit(rng);
        if (u < errors.alpha) {
          const bool negative = errors.model == ErrorModel::D1 && u < 0.5 * errors.alpha;
          v = (negative ? -20.0 : 20.0) + 0.1 * normal(rng);
        } else {
          v = normal(rng);
        }
        break;
      }
      case ErrorModel::D3: v = std::exp(normal(rng)) - std::exp(0.5); break;
      case ErrorModel::D4: v = std::cauchy_distribution<double>(0.0, 1.0)(rng); break;
    }
  }
  return e;
}

namespace {

double sample_variance(std::span<const double> v) {
  double m = 0.0;
  for (double a : v) m += a;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double a : v) s += (a - m) * (a - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace

double calibrate_snr(GFunction g, Structure s, const ErrorSpec& errors, double snr,
                     std::mt19937_64& rng, NoiseConvention convention, std::size_t draws) {
  if (!(snr > 0.0)) throw UsageError("snr must be positive");
  if (draws < 2) throw UsageError("calibration needs at least two draws");
  // The active coordinates follow the principal submatrix of the copula.
  const Matrix x = gen_features(draws, active_count(g), s, g, rng);
  std::vector<double> gv(draws);
  for (std::size_t i = 0; i < draws; ++i) gv[i] = eval_g(g, x.row(i));
  const double var_g = sample_variance(gv);
  double var_e = 1.0;
  if (convention == NoiseConvention::Empirical && errors.model != ErrorModel::D4 &&
      errors.model != ErrorModel::D0) {
    var_e = sample_variance(gen_errors(errors, draws, rng));
  }
  return std::sqrt(var_g / (snr * var_e));
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

namespace {

Dataset assemble(const SimSetting& s, std::size_t n, const ErrorSpec& errors, double c,
                 std::uint64_t stream) {
  auto feature_rng = substream(s.seed, stream);
  auto error_rng = substream(s.seed, stream + 1);
  Dataset d;
  d.x = gen_features(n, s.p, s.structure, s.g, feature_rng);
  const auto e = gen_errors(errors, n, error_rng);
  d.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.y[i] = eval_g(s.g, d.x.row(i)) + c * e[i];
  d.feature_names = default_feature_names(s.p);
  return d;
}

}  // namespace

SimData make_setting(const SimSetting& setting) {
  setting.validate();
  SimData out;
  auto calibration_rng = substream(setting.seed, 0);
  out.c = calibrate_snr(setting.g, setting.structure, setting.errors, setting.snr, calibration_rng,
                        setting.convention, setting.calibration_draws);
  out.train = assemble(setting, setting.n_train, setting.errors, out.c, 1);
  out.val = assemble(setting, setting.n_val, setting.errors, out.c, 3);
  out.test = assemble(setting, setting.n_test, ErrorSpec{}, out.c, 5);
  return out;
}

std::vector<std::size_t> true_set(GFunction g) {
  std::vector<std::size_t> m(active_count(g));
  for (std::size_t j = 0; j < m.size(); ++j) m[j] = j;
  return m;
}

}  // namespace rrboost

namespace rrboost {

double contamination_scale(std::span<const double> y, double snr) {
  if (!(snr > 0.0)) throw UsageError("snr must be positive");
  if (y.size() < 2) throw DataError("need at least two responses to calibrate the noise");
  return std::sqrt(sample_variance(y) / snr);
}

void add_noise(Dataset& data, const ErrorSpec& errors, double c, std::mt19937_64& rng) {
  const auto e = gen_errors(errors, data.size(), rng);
  for (std::size_t i = 0; i < data.size(); ++i) data.y[i] += c * e[i];
}

}  // namespace rrboost
