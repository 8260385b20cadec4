#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ftl/errors.hpp"
#include "ftl/raster.hpp"

namespace {

ftl::Grid random_grid(std::mt19937_64& rng, int dim, int max_n, double density) {
  std::uniform_int_distribution<int> size(1, max_n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ftl::GridGeometry geo;
  geo.dim = dim;
  geo.delta = 0.125;
  geo.nx = size(rng);
  geo.ny = dim == 2 ? size(rng) : 1;
  ftl::Grid g(geo);
  for (auto& c : g.occ) c = u(rng) < density;
  g.occ[std::uniform_int_distribution<std::size_t>(0, g.occ.size() - 1)(rng)] = 1;
  return g;
}

std::uint64_t brute_sq(const ftl::Grid& g, int i, int j, bool to_occupied) {
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (int b = 0; b < g.geo.ny; ++b)
    for (int a = 0; a < g.geo.nx; ++a)
      if (g.at(a, b) == to_occupied) {
        const auto dx = static_cast<std::int64_t>(a - i), dy = static_cast<std::int64_t>(b - j);
        best = std::min<std::uint64_t>(best, static_cast<std::uint64_t>(dx * dx + dy * dy));
      }
  return best;
}

ftl::Grid square(int n, int pad) {
  ftl::GridGeometry geo;
  geo.nx = geo.ny = n + 2 * pad;
  geo.delta = 1.0 / n;
  ftl::Grid g(geo);
  for (int j = pad; j < pad + n; ++j)
    for (int i = pad; i < pad + n; ++i) g.occ[geo.index(i, j)] = 1;
  return g;
}

}  // namespace

TEST_CASE("distance transform equals the brute-force oracle") {
  std::mt19937_64 rng(7);
  for (int dim : {1, 2})
    for (int trial = 0; trial < 40; ++trial) {
      const auto g = random_grid(rng, dim, dim == 1 ? 200 : 40, 0.05);
      const auto f = ftl::distance_transform(g);
      for (int j = 0; j < g.geo.ny; ++j)
        for (int i = 0; i < g.geo.nx; ++i) REQUIRE(f.sq[g.geo.index(i, j)] == brute_sq(g, i, j, true));
    }
}

TEST_CASE("complement distance equals the brute-force oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = random_grid(rng, 2, 30, 0.9);
    g.occ[0] = 0;
    const auto f = ftl::complement_distance(g);
    for (int j = 0; j < g.geo.ny; ++j)
      for (int i = 0; i < g.geo.nx; ++i) REQUIRE(f.sq[g.geo.index(i, j)] == brute_sq(g, i, j, false));
  }
}

TEST_CASE("empty grid has no distance transform") {
  ftl::GridGeometry geo;
  geo.nx = geo.ny = 4;
  CHECK_THROWS_AS(ftl::distance_transform(ftl::Grid(geo)), ftl::ResolutionError);
}

TEST_CASE("inner parallel volume of a raster square") {
  const int n = 64;
  const auto g = square(n, 2);
  const double d = 1.0 / n;
  // Boundary distance of the k-th ring (k = 0 outermost) is (k + 1) d - d/2.
  for (int k = 0; k < n / 2; k += 5) {
    const double eps = (k + 0.5) * d + 1e-9;
    const int inner = n - 2 * (k + 1);
    const double expected = (double(n) * n - double(inner) * inner) * d * d;
    CHECK(ftl::inner_parallel_volume(g, eps) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(ftl::inradius(g) == doctest::Approx(0.5 - 0.5 * d));
}

TEST_CASE("volume table agrees with direct counts") {
  std::mt19937_64 rng(3);
  const auto g = random_grid(rng, 2, 50, 0.02);
  const auto f = ftl::distance_transform(g);
  const ftl::VolumeTable t(f, nullptr);
  for (double e : {0.0, 0.1, 0.2, 0.5, 1.0, 3.0}) CHECK(t.volume(e) == doctest::Approx(ftl::parallel_volume(f, e)));
  CHECK(t.total() == doctest::Approx(g.geo.cells() * g.geo.cell_volume()));
  CHECK(t.tolerance(0.3) >= 0.0);
}

TEST_CASE("covering grid puts the box corner on a cell center") {
  const ftl::Box b{{0.1, -0.3}, {0.9, 0.4}};
  const auto geo = ftl::GridGeometry::covering(b, 0.01, 2, 0.05);
  const double fx = (b.lo.x - geo.origin.x) / geo.delta - 0.5;
  const double fy = (b.lo.y - geo.origin.y) / geo.delta - 0.5;
  CHECK(std::abs(fx - std::round(fx)) < 1e-9);
  CHECK(std::abs(fy - std::round(fy)) < 1e-9);
  CHECK(geo.box().contains(b.hi));
  CHECK_THROWS_AS(ftl::GridGeometry::covering(b, 1e-6, 2, 0.0, 1000), ftl::ResolutionError);
}

TEST_CASE("set operations and dilation") {
  const auto a = square(8, 4);
  auto b = a;
  b.occ[b.geo.index(7, 7)] = 0;
  CHECK(ftl::grid_difference(a, b).count() == 1);
  CHECK(ftl::grid_union(a, b).count() == 64);
  CHECK(ftl::grid_intersection(a, b).count() == 63);
  CHECK(ftl::dilate(a, 1).count() == 100);
  CHECK(a.boundary_cells() == 28);
  const auto r = a.occupied_rect();
  CHECK(r.i0 == 4);
  CHECK(r.i1 == 12);
  CHECK_FALSE(a.border_occupied());
}
