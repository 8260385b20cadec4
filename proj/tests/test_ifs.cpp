#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ftl/errors.hpp"
#include "ftl/ifs.hpp"
#include "ftl/scene.hpp"

namespace {

ftl::IFS line_ifs(std::vector<double> ratios) {
  ftl::IFS ifs;
  ifs.dim = 1;
  double x = 0.0;
  for (double r : ratios) {
    ftl::Similarity s;
    s.ratio = r;
    s.t = {x, 0.0};
    x += r + 0.01;
    ifs.maps.push_back(s);
  }
  return ifs;
}

// Independent oracle: plain bisection of sum r_i^s = 1.
double bisect_dimension(const std::vector<double>& r) {
  double lo = 0.0, hi = 4.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (double x : r) s += std::pow(x, mid);
    (s > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("similarity dimension of the carpet and the Cantor set") {
  const auto carpet = ftl::load_scene("carpet").ifs;
  const auto cantor = ftl::load_scene("cantor").ifs;
  CHECK(ftl::similarity_dimension(carpet) == doctest::Approx(std::log(8.0) / std::log(3.0)).epsilon(1e-13));
  CHECK(ftl::similarity_dimension(cantor) == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-13));
  const auto d = ftl::dimension_data(carpet);
  CHECK(d.eta == doctest::Approx(std::log(3.0)).epsilon(1e-13));
}

TEST_CASE("dimension with unequal ratios matches bisection") {
  for (const auto& r : std::vector<std::vector<double>>{{0.5, 0.3}, {0.2, 0.3, 0.4}, {0.45, 0.1}}) {
    const auto ifs = line_ifs(r);
    const double D = ftl::similarity_dimension(ifs);
    CHECK(D == doctest::Approx(bisect_dimension(r)).epsilon(1e-11));
    double eta = 0.0;
    for (double x : r) eta -= std::pow(x, D) * std::log(x);
    CHECK(ftl::eta(ifs, D) == doctest::Approx(eta).epsilon(1e-13));
  }
}

TEST_CASE("lattice classification") {
  const auto lat = ftl::is_lattice(line_ifs({0.5, 0.25}));
  CHECK(lat.lattice);
  REQUIRE(lat.base);
  CHECK(*lat.base == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK_FALSE(ftl::is_lattice(line_ifs({0.5, 1.0 / 3.0})).lattice);
  CHECK(ftl::is_lattice(line_ifs({1.0 / 3.0, 1.0 / 3.0})).lattice);
  CHECK(ftl::is_lattice(line_ifs({1.0 / 3.0, 1.0 / 9.0, 1.0 / 27.0})).lattice);
}

TEST_CASE("similarity composition and inverse") {
  ftl::Similarity a{0.5, ftl::Mat2::rotation(0.3), {0.2, -0.1}};
  ftl::Similarity b{0.25, ftl::Mat2::rotation(-1.1), {0.7, 0.4}};
  const ftl::Vec2 x{0.31, -0.77};
  const auto ab = a.compose(b).apply(x);
  const auto ref = a.apply(b.apply(x));
  CHECK(ab.x == doctest::Approx(ref.x));
  CHECK(ab.y == doctest::Approx(ref.y));
  const auto back = a.inverse().apply(a.apply(x));
  CHECK(back.x == doctest::Approx(x.x));
  CHECK(back.y == doctest::Approx(x.y));
  const auto f = a.fixed_point();
  CHECK(ftl::norm(a.apply(f) - f) < 1e-12);
}

TEST_CASE("invariant ball is mapped into itself") {
  for (const char* name : {"carpet", "gasket", "koch"}) {
    const auto ifs = ftl::load_scene(name).ifs;
    const auto ball = ftl::invariant_ball(ifs);
    for (const auto& m : ifs.maps)
      CHECK(ftl::norm(m.apply(ball.center) - ball.center) + m.ratio * ball.radius <= ball.radius * (1 + 1e-12));
  }
}

TEST_CASE("word enumeration stops at the prefix-minimal words") {
  const auto ifs = ftl::load_scene("carpet").ifs;
  std::size_t n = 0;
  ftl::enumerate_words(
      ifs, [](const ftl::Word&, const ftl::Similarity& s) { return s.ratio <= 1.0 / 27.0 + 1e-12; },
      [&](const ftl::Word& w, const ftl::Similarity&) {
        CHECK(w.size() == 3);
        ++n;
      });
  CHECK(n == 512);
}

TEST_CASE("attractor points stay in the bounding box") {
  const auto ifs = ftl::load_scene("gasket").ifs;
  const auto box = ftl::attractor_bbox(ifs);
  std::size_t n = 0;
  ftl::attractor_points(ifs, 0.01, [&](const ftl::Vec2& p) {
    CHECK(box.contains(p, 1e-9));
    ++n;
  });
  CHECK(n > 100);
}

TEST_CASE("invalid systems are rejected") {
  auto ifs = line_ifs({0.5, 0.5});
  ifs.maps[0].ratio = 1.5;
  CHECK_THROWS_AS(ifs.validate(), ftl::ConfigError);
  auto one = line_ifs({0.5});
  CHECK_THROWS_AS(one.validate(), ftl::ConfigError);
}
