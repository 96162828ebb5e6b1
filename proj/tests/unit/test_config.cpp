#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "fvcs/config.hpp"
#include "fvcs/errors.hpp"

using namespace fvcs;

TEST_CASE("validate rejects each invariant by field") {
  auto field_of = [](PhysicalParams p) -> std::string {
    try {
      validate(p);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return "";
  };
  PhysicalParams p;
  CHECK(field_of(p) == "");
  p.lambda = 0.0;
  CHECK(field_of(p) == "lambda");
  p = {};
  p.omega = -1.0;
  CHECK(field_of(p) == "omega");
  p = {};
  p.n_max = 8;
  CHECK(field_of(p) == "n_max");
  p = {};
  p.tol_quad = 1e-2;
  CHECK(field_of(p) == "tol_quad");
  p = {};
  p.lambda_z = std::nan("");
  CHECK(field_of(p) == "lambda_z");
}

TEST_CASE("json round trip and unknown keys") {
  PhysicalParams p;
  p.lambda = 8.0;
  p.n_max = 128;
  CHECK(params_from_json(params_to_json(p)) == p);
  CHECK_THROWS_AS(params_from_json(nlohmann::json{{"lamda", 1.0}}), ConfigError);
  CHECK_THROWS_AS(params_from_json(nlohmann::json{{"n_max", 20.5}}), ConfigError);
  CHECK(params_from_json(nlohmann::json::object()) == PhysicalParams{});
}

TEST_CASE("load_params reports malformed files") {
  const auto dir = std::filesystem::temp_directory_path() / "fvcs_test_config";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "bad.json") << "{ lambda: 1";
    std::ofstream(dir / "good.json") << R"({"lambda": 0.5, "omega": 2})";
  }
  CHECK_THROWS_AS(load_params(dir / "bad.json"), ConfigError);
  CHECK_THROWS_AS(load_params(dir / "missing.json"), ConfigError);
  const auto p = load_params(dir / "good.json");
  CHECK(p.lambda == 0.5);
  CHECK(p.omega == 2.0);
}

TEST_CASE("label and means are inverse") {
  PhysicalParams p;
  p.lambda = 8.0;
  const auto l = label_from_means(0.25, 16.0, p);
  CHECK(l.alpha.real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(l.alpha.imag() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  const auto m = means_from_label(l, p);
  CHECK(m.q == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(m.p == doctest::Approx(16.0).epsilon(1e-15));
}
