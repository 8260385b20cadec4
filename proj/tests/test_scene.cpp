#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ftl/errors.hpp"
#include "ftl/scene.hpp"

TEST_CASE("every preset parses and round-trips") {
  const auto names = ftl::preset_names();
  CHECK(names.size() >= 10);
  for (const auto& n : names) {
    INFO(n);
    const auto s = ftl::load_scene(n);
    CHECK(s.name == n);
    CHECK(s.ifs.size() >= 2);
    const auto again = ftl::parse_scene(ftl::scene_to_json(s));
    CHECK(again.ifs.size() == s.ifs.size());
    for (std::size_t i = 0; i < s.ifs.size(); ++i) {
      CHECK(again.ifs.maps[i].ratio == doctest::Approx(s.ifs.maps[i].ratio));
      CHECK(again.ifs.maps[i].t.x == doctest::Approx(s.ifs.maps[i].t.x));
      CHECK(again.ifs.maps[i].t.y == doctest::Approx(s.ifs.maps[i].t.y));
    }
  }
}

TEST_CASE("default resolution") {
  CHECK(ftl::default_delta(1) == std::ldexp(1.0, -16));
  CHECK(ftl::default_delta(2) == std::ldexp(1.0, -11));
}

TEST_CASE("map parsing: rotation and reflection") {
  const auto m = ftl::parse_map({{"ratio", 0.5}, {"rotation_deg", 90}, {"translation", {1, 0}}}, 2);
  const auto p = m.apply({1, 0});
  CHECK(p.x == doctest::Approx(1.0));
  CHECK(p.y == doctest::Approx(0.5));
  const auto r = ftl::parse_map({{"ratio", 0.5}, {"reflect", true}, {"translation", {0, 0}}}, 2);
  CHECK(r.Q.det() == doctest::Approx(-1.0));
}

TEST_CASE("schema violations are config errors") {
  using nlohmann::json;
  const json good = ftl::preset_json("carpet");
  auto bad = good;
  bad["maps"] = json::array();
  CHECK_THROWS_AS(ftl::parse_scene(bad), ftl::ConfigError);
  bad = good;
  bad["maps"][0]["ratio"] = 1.5;
  CHECK_THROWS_AS(ftl::parse_scene(bad), ftl::ConfigError);
  bad = good;
  bad["region"] = {{"type", "no_such_region"}};
  CHECK_THROWS_AS(ftl::parse_scene(bad), ftl::ConfigError);
  CHECK_THROWS_AS(ftl::load_scene("/nonexistent/scene.json"), ftl::ConfigError);
  CHECK_THROWS_AS(ftl::preset_json("no_such_preset"), ftl::ConfigError);
}

TEST_CASE("scene files load from disk") {
  const std::string path = "ftl_test_scene.json";
  std::ofstream(path) << ftl::preset_json("cantor").dump();
  const auto s = ftl::load_scene(path);
  CHECK(s.ifs.dim == 1);
  std::remove(path.c_str());
}
