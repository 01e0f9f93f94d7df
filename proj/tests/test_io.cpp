#include "doctest.h"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oselab/io.hpp"

using namespace oselab;

TEST_CASE("map specs round trip through json") {
  const PiecewiseAffineMap t2 = build_named_map("T2");
  const json spec = map_to_json(t2);
  CHECK(spec.at("cells") == 9);
  CHECK(spec.at("circle") == true);
  CHECK(spec.at("slopes")[0] == "3/1");
  const PiecewiseAffineMap back = map_from_json(spec);
  CHECK(back == t2);

  json broken = spec;
  broken.erase("slopes");
  CHECK_THROWS_AS(map_from_json(broken), ConfigError);
  json garbled = spec;
  garbled["offsets"][2] = "one half";
  CHECK_THROWS_AS(map_from_json(garbled), ConfigError);
}

TEST_CASE("driver specs") {
  Driver periodic = driver_from_json(json{{"type", "periodic"}, {"word", {1, 2, 3}}});
  CHECK(periodic.symbol_at(-1) == 3);

  Driver pi = driver_from_json(json{{"type", "pi_sft"}});
  CHECK(pi.symbol_at(0) == 1);
  CHECK(pi.symbol_at(1) == 5);

  Driver lit = driver_from_json(json{{"type", "explicit"}, {"symbols", {4, 1}}, {"origin", -1}});
  CHECK(lit.symbol_at(-1) == 4);
  CHECK(lit.symbol_at(0) == 1);

  CHECK_THROWS_AS(driver_from_json(json{{"type", "markov"}}), ConfigError);
  CHECK_THROWS_AS(driver_from_json(json::object()), ConfigError);
}

TEST_CASE("report serialization shapes") {
  SpectrumReport report;
  report.eigenvalues = {{1.0, 0.0}, {-1.0 / 6, 0.28867513459481287}};
  report.moduli = {1.0, 1.0 / 3};
  report.multiplicities = {1, 1};
  const json j = spectrum_to_json(report);
  CHECK(j.at("eigenvalues")[1].at("re") == -1.0 / 6);
  CHECK(j.at("moduli")[0] == 1.0);
  CHECK(j.at("multiplicities") == json({1, 1}));

  LyapunovEstimate est;
  est.exponents = {0.0, -0.2, kBottomExponent};
  est.multiplicities = {1, 2, 6};
  const json l = lyapunov_to_json(est);
  CHECK(l.at("exponents")[2].is_null());
  CHECK(l.at("exponents")[1] == -0.2);
  CHECK(l.at("multiplicities")[2] == 6);
}

TEST_CASE("step functions round trip") {
  StepFunction f{{9, true}, {0, 1, 2, 3, 4, 5, 6, 7, 8}};
  const json j = stepfn_to_json(f);
  const StepFunction back = stepfn_from_json(j);
  CHECK(back.values == f.values);
  CHECK(back.partition.cells == 9);
  CHECK_THROWS_AS(stepfn_from_json(json{{"cells", 4}, {"values", {1.0}}}), ConfigError);
}

TEST_CASE("serialized doubles are stable and lossless") {
  json j;
  j["x"] = 1.0 / 3;
  j["tiny"] = 1e-300;
  j["neg"] = -0.1;
  const std::string once = dump_sorted(j);
  CHECK(once == dump_sorted(j));
  const json back = json::parse(once);
  CHECK(back.at("x").get<double>() == 1.0 / 3);
  CHECK(back.at("tiny").get<double>() == 1e-300);
  CHECK(back.at("neg").get<double>() == -0.1);
  // Objects serialize with sorted keys for byte-stable re-runs.
  CHECK(once.find("\"neg\"") < once.find("\"tiny\""));
  CHECK(once.find("\"tiny\"") < once.find("\"x\""));
}

TEST_CASE("atomic writes land complete files in fresh directories") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "oselab_test_io";
  fs::remove_all(dir);
  const fs::path target = dir / "nested" / "out.json";
  atomic_write(target, "{\"ok\":true}");
  std::ifstream in(target);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == "{\"ok\":true}");
  // No temp litter remains.
  size_t entries = 0;
  for (const auto& e : fs::directory_iterator(target.parent_path())) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);
  fs::remove_all(dir);
}
