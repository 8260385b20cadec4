#include <doctest.h>

#include <cmath>

#include "ftl/curvatures.hpp"
#include "ftl/errors.hpp"
#include "ftl/raster.hpp"
#include "ftl/volume.hpp"

namespace {

const double kLn3 = std::log(3.0);
const double kCarpetD = std::log(8.0) / kLn3;

// Square of side n cells (cell size 1 / (3 n)) with a pad: the carpet's middle square.
ftl::Grid middle_square(int n, int pad) {
  ftl::GridGeometry geo;
  geo.nx = geo.ny = n + 2 * pad;
  geo.delta = 1.0 / (3.0 * n);
  ftl::Grid g(geo);
  for (int j = pad; j < pad + n; ++j)
    for (int i = pad; i < pad + n; ++i) g.occ[geo.index(i, j)] = 1;
  return g;
}

}  // namespace

TEST_CASE("inner parallel sets of a square: C_0 = -1, C_1 = half perimeter") {
  const int n = 512;
  const auto G = middle_square(n, 4);
  const double d = G.geo.delta, side = 1.0 / 3;
  const auto eps = ftl::eps_grid(4 * d, 0.15, 16);
  const auto c0 = ftl::sample_inner_curvature(G, 0, eps);
  for (double v : c0.values) CHECK(v == doctest::Approx(-1.0));
  const auto c1 = ftl::sample_inner_curvature(G, 1, eps);
  for (std::size_t i = 0; i < eps.size(); ++i)
    CHECK(c1.values[i] == doctest::Approx(2 * (side - 2 * eps[i])).epsilon(4 * d / (side - 2 * eps[i])));
}

TEST_CASE("generator curvature of the square: -(1/eta) g^D / D") {
  ftl::CurvatureSamples s;
  s.k = 0;
  s.dim = 2;
  s.delta = 1e-6;
  const double g = 1.0 / 6;
  s.eps = ftl::eps_grid(1e-5, g, 64);
  s.values.assign(s.eps.size(), -1.0);
  s.variation.assign(s.eps.size(), 1.0);
  const auto r = ftl::generator_curvature(s, kCarpetD, kLn3, 0, g);
  const double expected = -std::pow(g, kCarpetD) / (kLn3 * kCarpetD);
  CHECK(r.value == doctest::Approx(expected).epsilon(1e-4));
  CHECK(std::abs(r.value - expected) <= r.error_estimate);
  CHECK(r.error_components.count("resolution"));
}

TEST_CASE("k = 1 generator curvature is half the boundary integral") {
  ftl::CurvatureSamples s;
  s.k = 1;
  s.dim = 2;
  s.delta = 1e-7;
  const double g = 1.0 / 6, D = kCarpetD;
  s.eps = ftl::eps_grid(1e-5, g, 128);
  for (double e : s.eps) {
    s.values.push_back(2 * (1.0 / 3 - 2 * e));
    s.variation.push_back(s.values.back());
  }
  // Oracle: (1/eta) int_0^g eps^{D-2} 2 (1/3 - 2 eps) d eps.
  const double oracle = (2.0 / 3 * std::pow(g, D - 1) / (D - 1) - 4 * std::pow(g, D) / D) / kLn3;
  CHECK(ftl::generator_curvature(s, D, kLn3, 1, g).value == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("variation exponent check") {
  ftl::CurvatureSamples s;
  s.k = 0;
  s.eps = ftl::eps_grid(1e-4, 0.1, 32);
  for (double e : s.eps) {
    s.values.push_back(std::pow(e, -1.2));
    s.variation.push_back(s.values.back());
  }
  CHECK_FALSE(ftl::cbc_exponent_check(s, 0.63, 0).pass);
  for (std::size_t i = 0; i < s.eps.size(); ++i) s.variation[i] = s.values[i] = 1.0;
  CHECK(ftl::cbc_exponent_check(s, 0.63, 0).pass);
  s.delta = 1e-6;
  s.dim = 1;
  for (std::size_t i = 0; i < s.eps.size(); ++i) s.variation[i] = s.values[i] = std::pow(s.eps[i], -1.2);
  s.eps.back() = 0.1;
  CHECK_THROWS_AS(ftl::generator_curvature(s, 0.63, kLn3, 0, 0.1), ftl::PreconditionError);
}

TEST_CASE("samples must end at the upper limit") {
  ftl::CurvatureSamples s;
  s.k = 0;
  s.eps = {0.01, 0.02, 0.05};
  s.values = s.variation = {-1, -1, -1};
  CHECK_THROWS_AS(ftl::generator_curvature(s, kCarpetD, kLn3, 0, 0.1), ftl::ConfigError);
}
