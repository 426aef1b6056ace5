#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "rrboost/benchmark_harness.hpp"
#include "rrboost/csv.hpp"
#include "rrboost/errors.hpp"
#include "rrboost/model_io.hpp"
#include "test_util.hpp"

using namespace rrboost;

TEST_CASE("models round-trip exactly") {
  const Dataset train = testutil::linear_dataset(120, 4, 81);
  const Dataset val = testutil::linear_dataset(80, 4, 82);
  std::mt19937_64 rng(83);
  const Matrix probe = testutil::random_matrix(500, 4, rng);
  Budget b;
  b.t1_max = 20;
  b.t2_max = 20;
  b.t_max = 30;
  for (Method m : all_methods()) {
    ModelFile f;
    f.model = fit_method(m, train, val, 2, b).model;
    f.feature_names = train.feature_names;
    f.manifest = Json{{"seed", 1}};
    const std::string text = dump_model(f);
    const ModelFile g = parse_model(text);
    CHECK(g.model == f.model);
    CHECK(g.feature_names == f.feature_names);
    CHECK(g.model.predict(probe) == f.model.predict(probe));
    CHECK(dump_model(g) == text);
  }
}

TEST_CASE("file save and load") {
  const auto path = std::filesystem::temp_directory_path() / "rrboost_model_io_test.json";
  ModelFile f;
  f.model.init = Tree::leaf(0.1);
  f.model.sigma_hat = 1.0 / 3.0;
  f.feature_names = {"a"};
  save_model(path, f);
  const ModelFile g = load_model(path);
  CHECK(g.model == f.model);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_model(path), DataError);
}

TEST_CASE("bad model documents are rejected") {
  ModelFile f;
  f.feature_names = {"a"};
  Json j = model_to_json(f);
  j["format_version"] = 2;
  CHECK_THROWS_AS(model_from_json(j), DataError);
  CHECK_THROWS_AS(parse_model("{not json"), DataError);
  Json k = model_to_json(f);
  k.erase("steps");
  CHECK_THROWS_AS(model_from_json(k), DataError);
  Json bad_method = model_to_json(f);
  bad_method["method"] = "forest";
  CHECK_THROWS_AS(model_from_json(bad_method), DataError);
  Json stop = model_to_json(f);
  stop["stop_index"] = 4;
  CHECK_THROWS_AS(model_from_json(stop), DataError);
}

TEST_CASE("csv parsing") {
  std::istringstream in("a,b,y\n1,2,3\n4,5.5,6\n\n");
  const CsvTable t = parse_csv(in);
  CHECK(t.header == std::vector<std::string>{"a", "b", "y"});
  CHECK(t.values.rows() == 2);
  const Dataset d = to_dataset(t);
  CHECK(d.target_name == "y");
  CHECK(d.feature_names == std::vector<std::string>{"a", "b"});
  CHECK(d.x(1, 1) == 5.5);
  CHECK(d.y[1] == 6.0);
  const Dataset e = to_dataset(t, "a");
  CHECK(e.feature_names == std::vector<std::string>{"b", "y"});
  CHECK(e.y[1] == 4.0);
  CHECK_THROWS_AS(to_dataset(t, "zz"), DataError);
  const std::vector<std::string> names{"y", "a"};
  const Matrix x = select_columns(t, names);
  CHECK(x(0, 0) == 3.0);
  CHECK(x(0, 1) == 1.0);
  const std::vector<std::string> missing{"q"};
  CHECK_THROWS_WITH_AS(select_columns(t, missing), doctest::Contains("'q'"), DataError);
}

TEST_CASE("csv errors name the line and column") {
  std::istringstream bad("a,b,y\n1,2,3\n4,oops,6\n");
  CHECK_THROWS_WITH_AS(parse_csv(bad, "f.csv"), doctest::Contains("line 3, column 'b'"), DataError);
  std::istringstream ragged("a,b\n1,2\n3\n");
  CHECK_THROWS_WITH_AS(parse_csv(ragged, "f.csv"), doctest::Contains("line 3"), DataError);
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_csv(empty), DataError);
}

TEST_CASE("doubles print in round-trip form") {
  std::mt19937_64 rng(1);
  for (const double v : testutil::random_vector(200, rng, 1e3)) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
}
