#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ftl/level_set.hpp"
#include "ftl/raster.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

// Raster of the union of disks (center, radius) on [-1, 1]^2.
ftl::Grid disks(const std::vector<std::pair<ftl::Vec2, double>>& d, double delta) {
  const auto geo = ftl::GridGeometry::covering(ftl::Box{{-1, -1}, {1, 1}}, delta, 2, 0.1);
  ftl::Grid g(geo);
  for (std::size_t idx = 0; idx < g.occ.size(); ++idx) {
    const auto p = geo.center(idx);
    for (const auto& [c, r] : d)
      if (ftl::norm(p - c) <= r) g.occ[idx] = 1;
  }
  return g;
}

}  // namespace

TEST_CASE("disk parallel set: length and turning") {
  const double delta = 1.0 / 256;
  const auto f = ftl::distance_transform(disks({{{0, 0}, 0.0}}, delta));
  for (double eps : {0.1, 0.3, 0.6}) {
    const auto st = ftl::level_set_stats(f, eps);
    CHECK(st.length == doctest::Approx(2 * kPi * eps).epsilon(0.02));
    CHECK(st.turning == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ftl::boundary_length(f, eps) == doctest::Approx(st.length));
  }
}

TEST_CASE("Euler characteristic of disks and an annulus") {
  const double delta = 1.0 / 128;
  const auto two = disks({{{-0.5, 0}, 0.2}, {{0.5, 0}, 0.2}}, delta);
  CHECK(ftl::euler_characteristic(two) == 2);
  auto ring = disks({{{0, 0}, 0.6}}, delta);
  const auto hole = disks({{{0, 0}, 0.3}}, delta);
  for (std::size_t i = 0; i < ring.occ.size(); ++i)
    if (hole.occ[i]) ring.occ[i] = 0;
  CHECK(ftl::euler_characteristic(ring) == 0);
}

TEST_CASE("Gauss-Bonnet closure on random disk unions") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(-0.6, 0.6), rad(0.02, 0.15);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::pair<ftl::Vec2, double>> d;
    for (int k = 0; k < 12; ++k) d.push_back({{pos(rng), pos(rng)}, rad(rng)});
    const auto f = ftl::distance_transform(disks(d, 1.0 / 128));
    for (double eps : {0.0, 0.02, 0.05, 0.1}) {
      const auto et = ftl::euler_and_turning(f, eps);
      CHECK(std::abs(et.turning - static_cast<double>(et.chi)) <= 0.05);
      CHECK(et.variation >= std::abs(et.turning) - 1e-9);
    }
  }
}

TEST_CASE("masked statistics add up over a partition") {
  const double delta = 1.0 / 128;
  const auto f = ftl::distance_transform(disks({{{0.1, 0.05}, 0.02}}, delta));
  ftl::Grid left(f.geo), right(f.geo);
  for (std::size_t idx = 0; idx < left.occ.size(); ++idx) (f.geo.center(idx).x < 0 ? left : right).occ[idx] = 1;
  const auto all = ftl::level_set_stats(f, 0.4);
  const auto a = ftl::level_set_stats(f, 0.4, 0.0, &left);
  const auto b = ftl::level_set_stats(f, 0.4, 0.0, &right);
  CHECK(a.length + b.length == doctest::Approx(all.length).epsilon(1e-9));
  CHECK(a.turning + b.turning == doctest::Approx(all.turning).epsilon(1e-9));
}

TEST_CASE("one-dimensional turning counts half the endpoints") {
  ftl::GridGeometry geo;
  geo.dim = 1;
  geo.nx = 200;
  geo.ny = 1;
  geo.delta = 0.01;
  ftl::Grid g(geo);
  g.occ[80] = g.occ[120] = 1;
  const auto f = ftl::distance_transform(g);
  CHECK(ftl::level_set_stats(f, 0.05).turning == doctest::Approx(2.0));
  CHECK(ftl::level_set_stats(f, 0.3).turning == doctest::Approx(1.0));
}
