#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rrboost/errors.hpp"
#include "rrboost/simgen.hpp"

using namespace rrboost;

namespace {

double correlation(const Matrix& x, std::size_t a, std::size_t b) {
  const double n = static_cast<double>(x.rows());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    ma += x(i, a);
    mb += x(i, b);
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    sab += (x(i, a) - ma) * (x(i, b) - mb);
    saa += (x(i, a) - ma) * (x(i, a) - ma);
    sbb += (x(i, b) - mb) * (x(i, b) - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

double ks_uniform(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - v[i], v[i] - static_cast<double>(i) / n));
  }
  return d;
}

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double a : v) s += a;
  return s / static_cast<double>(v.size());
}

// Pearson correlation of two uniforms from a Gaussian copula with correlation r.
double copula_uniform_correlation(double r) { return 6.0 / std::numbers::pi * std::asin(r / 2.0); }

}  // namespace

TEST_CASE("regression functions at reference points") {
  std::vector<double> x(10, 0.0);
  x[2] = 0.5;
  CHECK(eval_g(GFunction::G1, x) == doctest::Approx(1.5));
  std::vector<double> z(10, 0.0);
  CHECK(eval_g(GFunction::G3, z) == doctest::Approx(15.0));
  const std::vector<double> w{0.0, 1.0, 1.0, 1.0};
  CHECK(eval_g(GFunction::G2, w) == doctest::Approx(0.0));
  CHECK_THROWS_AS(eval_g(GFunction::G2, std::vector<double>{0.5, 0.0, 0.5, 1.0}), DataError);
  CHECK_THROWS_AS(eval_g(GFunction::G1, std::vector<double>{0.5, 0.5}), DataError);
}

TEST_CASE("independent features") {
  auto rng = substream(1, 1);
  const Matrix x = gen_features(100000, 5, Structure::S0, GFunction::G1, rng);
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t b = a + 1; b < 5; ++b) CHECK(std::abs(correlation(x, a, b)) < 0.02);
    CHECK(ks_uniform(x.column(a)) < 1.628 / std::sqrt(100000.0));
  }
}

TEST_CASE("decreasing correlation structure") {
  auto rng = substream(2, 1);
  const Matrix x = gen_features(100000, 6, Structure::S1, GFunction::G1, rng);
  CHECK(std::abs(correlation(x, 0, 1) - 0.8) < 0.02);
  CHECK(std::abs(correlation(x, 0, 1) - copula_uniform_correlation(0.8)) < 0.01);
  CHECK(std::abs(correlation(x, 0, 2) - copula_uniform_correlation(0.64)) < 0.01);
  for (std::size_t j = 0; j < 6; ++j) CHECK(ks_uniform(x.column(j)) < 1.628 / std::sqrt(100000.0));
}

TEST_CASE("block correlation structure") {
  auto rng = substream(3, 1);
  const Matrix x = gen_features(100000, 8, Structure::S2, GFunction::G1, rng);
  CHECK(std::abs(correlation(x, 0, 2) - copula_uniform_correlation(0.8)) < 0.01);
  CHECK(std::abs(correlation(x, 3, 4) - copula_uniform_correlation(0.8)) < 0.01);
  CHECK(std::abs(correlation(x, 2, 3)) < 0.02);
  CHECK(std::abs(correlation(x, 5, 6)) < 0.02);
  auto rng2 = substream(3, 2);
  const Matrix x2 = gen_features(50000, 6, Structure::S2, GFunction::G2, rng2);
  CHECK(std::abs(correlation(x2, 0, 1) - copula_uniform_correlation(0.8)) < 0.015);
  CHECK(std::abs(correlation(x2, 1, 2)) < 0.02);
  const auto r = correlation_matrix(Structure::S2, GFunction::G2, 6);
  CHECK(r[0 * 6 + 1] == 0.8);
  CHECK(r[2 * 6 + 3] == 0.8);
  CHECK(r[1 * 6 + 2] == 0.0);
  CHECK(r[4 * 6 + 5] == 0.0);
}

TEST_CASE("g2 denominator coordinates live in (1, 2)") {
  auto rng = substream(4, 1);
  const Matrix x = gen_features(5000, 5, Structure::S1, GFunction::G2, rng);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    CHECK(x(i, 1) > 1.0);
    CHECK(x(i, 1) < 2.0);
    CHECK(x(i, 3) > 1.0);
    CHECK(x(i, 0) < 1.0);
    const double inv = 1.0 / (x(i, 1) * x(i, 3));
    CHECK(inv > 0.25);
    CHECK(inv < 1.0);
  }
}

TEST_CASE("error models") {
  auto rng = substream(5, 1);
  const auto d0 = gen_errors({ErrorModel::D0, 0.0}, 1000000, rng);
  const double m0 = mean_of(d0);
  double v0 = 0;
  for (double e : d0) v0 += (e - m0) * (e - m0);
  v0 /= static_cast<double>(d0.size() - 1);
  CHECK(std::abs(m0) < 0.005);
  CHECK(std::abs(v0 - 1.0) < 0.01);

  const auto d3 = gen_errors({ErrorModel::D3, 0.0}, 1000000, rng);
  CHECK(std::abs(mean_of(d3)) < 0.01);

  const auto d1 = gen_errors({ErrorModel::D1, 0.2}, 1000000, rng);
  double big = 0, pos = 0;
  for (double e : d1) {
    big += std::abs(e) > 10.0;
    pos += e > 10.0;
  }
  CHECK(std::abs(big / 1e6 - 0.2) < 0.01);
  CHECK(std::abs(pos / 1e6 - 0.1) < 0.01);

  const std::size_t n = 300;
  const auto d2 = gen_errors({ErrorModel::D2, 0.1}, n, rng);
  double out = 0;
  for (double e : d2) {
    out += e > 10.0;
    CHECK(e > -10.0);
  }
  CHECK(std::abs(out / n - 0.1) < 3.0 * std::sqrt(0.1 * 0.9 / n));
}

TEST_CASE("error spec parsing") {
  CHECK(ErrorSpec::parse("D2:0.2") == ErrorSpec{ErrorModel::D2, 0.2});
  CHECK(ErrorSpec::parse("D4").model == ErrorModel::D4);
  CHECK(ErrorSpec::parse("D1:0.1").label() == "D1(10%)");
  CHECK(ErrorSpec::parse("D3").label() == "D3");
  CHECK_THROWS_AS(ErrorSpec::parse("D1"), UsageError);
  CHECK_THROWS_AS(ErrorSpec::parse("D3:0.1"), UsageError);
  CHECK_THROWS_AS(ErrorSpec::parse("D2:0.7"), UsageError);
  CHECK_THROWS_AS(ErrorSpec::parse("D9"), UsageError);
}

TEST_CASE("SNR calibration") {
  auto a = substream(6, 0);
  const double c = calibrate_snr(GFunction::G1, Structure::S0, {}, 6.0, a);
  auto b = substream(6, 0);
  const double c2 = calibrate_snr(GFunction::G1, Structure::S0, {}, 12.0, b);
  CHECK(c2 == doctest::Approx(c / std::sqrt(2.0)).epsilon(1e-12));

  // Var(g1) from an independent stream.
  auto rng = substream(7, 9);
  const Matrix x = gen_features(200000, 5, Structure::S0, GFunction::G1, rng);
  std::vector<double> g(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) g[i] = eval_g(GFunction::G1, x.row(i));
  const double m = mean_of(g);
  double var = 0;
  for (double v : g) var += (v - m) * (v - m);
  var /= static_cast<double>(g.size() - 1);
  CHECK(std::abs(c * c * 6.0 - var) < 0.01 * var);

  auto e1 = substream(6, 0);
  auto e2 = substream(6, 0);
  const double nominal = calibrate_snr(GFunction::G1, Structure::S0, {ErrorModel::D2, 0.2}, 6.0, e1);
  const double empirical =
      calibrate_snr(GFunction::G1, Structure::S0, {ErrorModel::D2, 0.2}, 6.0, e2, NoiseConvention::Empirical);
  CHECK(nominal == doctest::Approx(c));
  CHECK(empirical < nominal / 5.0);
}

TEST_CASE("settings") {
  const auto s = SimSetting::preset(1, ErrorSpec::parse("D2:0.2"), 42);
  const auto a = make_setting(s);
  const auto b = make_setting(s);
  CHECK(a.train == b.train);
  CHECK(a.val == b.val);
  CHECK(a.test == b.test);
  CHECK(a.c == b.c);
  CHECK(a.train.size() == 300);
  CHECK(a.train.num_features() == 10);
  CHECK(a.val.size() == 200);
  CHECK(a.test.size() == 1000);
  std::size_t outliers = 0;
  for (std::size_t i = 0; i < a.test.size(); ++i) {
    CHECK(std::abs(a.test.y[i] - eval_g(GFunction::G1, a.test.x.row(i))) / a.c < 6.0);
  }
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    outliers += (a.train.y[i] - eval_g(GFunction::G1, a.train.x.row(i))) / a.c > 10.0;
  }
  CHECK(outliers > 30);
  CHECK(outliers < 90);

  const auto other = make_setting(SimSetting::preset(1, ErrorSpec::parse("D2:0.2"), 43));
  CHECK_FALSE(other.train == a.train);

  const auto s2 = SimSetting::preset(2, {}, 1);
  CHECK(s2.n_train == 3000);
  CHECK(s2.n_val == 2000);
  CHECK(s2.p == 400);
  CHECK(s2.snr == 10.0);
  CHECK(SimSetting::preset(3, {}, 1).structure == Structure::S2);
  CHECK_THROWS_AS(SimSetting::preset(4, {}, 1), UsageError);
  CHECK(true_set(GFunction::G1) == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(true_set(GFunction::G2) == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("contaminating observed responses") {
  Dataset d;
  d.x = Matrix(4, 1);
  d.y = {1.0, 2.0, 3.0, 4.0};
  const double c = contamination_scale(d.y, 6.0);
  CHECK(c == doctest::Approx(std::sqrt((5.0 / 3.0) / 6.0)));
  auto rng = substream(1, 2);
  add_noise(d, {ErrorModel::D0, 0.0}, c, rng);
  CHECK(d.y[0] != 1.0);
}
