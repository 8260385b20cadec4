#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

#include "ftl/contents.hpp"
#include "ftl/errors.hpp"
#include "ftl/quadrature.hpp"
#include "ftl/volume.hpp"

namespace {

const double kLn3 = std::log(3.0);
const double kCarpetD = std::log(8.0) / kLn3;
const double kCantorD = std::log(2.0) / kLn3;

ftl::VolumeSamples synthetic(const std::function<double(double)>& V, double lo, double hi, int dim) {
  ftl::VolumeSamples s;
  s.dim = dim;
  s.delta = 1e-7;
  s.eps = ftl::eps_grid(lo, hi, 128);
  for (double e : s.eps) {
    s.values.push_back(V(e));
    s.tol.push_back(1e-13);
  }
  return s;
}

}  // namespace

TEST_CASE("monophase closed form against the term-by-term oracle") {
  const double g = 1.0 / 6, D = kCarpetD;
  ftl::MonophaseData m{{-4.0, 4.0 / 3.0}, g};
  const double oracle =
      (-4.0 * std::pow(g, D) / D + (4.0 / 3.0) * std::pow(g, D - 1) / (D - 1) + std::pow(g, D - 2) / (9 * (2 - D))) /
      kLn3;
  CHECK(ftl::monophase_content(m, D, kLn3, 2).value == doctest::Approx(oracle).epsilon(1e-13));
  ftl::PluriphaseData two{{0.0, 0.05, g}, {m.kappa, m.kappa}};
  CHECK(ftl::pluriphase_content(two, D, kLn3, 2).value == doctest::Approx(oracle).epsilon(1e-12));
  CHECK_THROWS_AS(ftl::monophase_content(m, 2.0, kLn3, 2), ftl::PreconditionError);
}

TEST_CASE("generator quadrature reproduces the monophase value") {
  const double g = 1.0 / 6, D = kCarpetD;
  const auto V = synthetic([](double e) { return 4.0 / 3.0 * e - 4.0 * e * e; }, 1e-5, g, 2);
  const auto r = ftl::generator_content(V, D, kLn3, 2, g);
  const auto m = ftl::monophase_content({{-4.0, 4.0 / 3.0}, g}, D, kLn3, 2);
  CHECK(r.value == doctest::Approx(m.value).epsilon(1e-5));
  CHECK(r.error_estimate < 1e-4);
  REQUIRE(r.fitted_exponent);
  CHECK(*r.fitted_exponent == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("Cantor generator content closed form") {
  const double D = kCantorD, g = 1.0 / 6;
  const double exact = (1 / kLn3) * ((2 / D) * std::pow(6.0, -D) + std::pow(6.0, 1 - D) / (3 * (1 - D)));
  const auto V = synthetic([](double e) { return std::min(2 * e, 1.0 / 3); }, 1e-6, g, 1);
  CHECK(ftl::generator_content(V, D, kLn3, 1, g).value == doctest::Approx(exact).epsilon(1e-5));
  // h(eps) = V(G, eps) up to g/3, where it jumps to V(T, eps) = sum_n 2^n min(3^-n / 3, 2 eps).
  auto VT = [](double e) {
    double v = 0.0;
    for (int n = 0; n < 60; ++n) v += std::pow(2.0, n) * std::min(std::pow(3.0, -n) / 3, 2 * e);
    return v;
  };
  ftl::VolumeSamples h;
  h.dim = 1;
  h.delta = 1e-7;
  h.eps = ftl::eps_grid(1e-6, g, 128, std::nullopt, {g / 3});
  for (std::size_t i = 0; i < h.eps.size(); ++i) {
    const double e = h.eps[i];
    h.values.push_back(e <= g / 3 * (1 + 1e-12) ? 2 * e : VT(e));
    h.tol.push_back(1e-13);
    if (std::abs(e / (g / 3) - 1) < 1e-12) h.jumps.emplace_back(i, VT(e));
  }
  CHECK(ftl::tiling_content_via_h(h, D, kLn3, 1, g).value == doctest::Approx(exact).epsilon(1e-5));
}

TEST_CASE("generator exponent precondition") {
  // V(G, eps) ~ eps^{0.05}: the boundary of G is too rough for D = ln 8 / ln 3.
  const auto V = synthetic([](double e) { return std::pow(e, 0.05); }, 1e-5, 0.1, 2);
  CHECK_THROWS_AS(ftl::generator_content(V, kCarpetD, kLn3, 2, 0.1), ftl::PreconditionError);
}

TEST_CASE("direct estimates on a log-periodic function") {
  const double h = kLn3, c = 1.2, a = 0.1, s = kCantorD;
  ftl::VolumeSamples x;
  x.dim = 1;
  x.delta = 1e-7;
  const double lo = 1e-4;
  x.eps = ftl::eps_grid(lo, lo * std::exp(4 * h), 256, h);
  for (double e : x.eps) {
    x.values.push_back(std::pow(e, 1 - s) * (c + a * std::sin(2 * std::numbers::pi * std::log(e) / h)));
    x.tol.push_back(0.0);
  }
  const auto [lim, avg] = ftl::direct_content(x, s, 1, h, 1.0);
  REQUIRE(lim.band);
  CHECK(lim.band->first == doctest::Approx(c - a).epsilon(1e-3));
  CHECK(lim.band->second == doctest::Approx(c + a).epsilon(1e-3));
  CHECK(avg.value == doctest::Approx(c).epsilon(1e-4));
  const auto [lim2, avg2] = ftl::direct_content(x, s, 1, std::nullopt, 1.0);
  CHECK_FALSE(lim2.band);
  CHECK_THROWS_AS(ftl::direct_content(x, s, 1, h, 5.0), ftl::ConfigError);
}

TEST_CASE("log quadrature of power laws") {
  for (double b : {0.5, 1.0, 2.0}) {
    ftl::SampledFunction f;
    f.eps = ftl::eps_grid(1e-4, 1.0, 64);
    for (double e : f.eps) f.values.push_back(std::pow(e, b));
    const auto q = ftl::log_quadrature(f, -0.5, {});
    CHECK(q.value == doctest::Approx(1.0 / (b + 0.5)).epsilon(2e-4));
    REQUIRE(q.head_exponent);
    CHECK(*q.head_exponent == doctest::Approx(b).epsilon(1e-6));
  }
  const auto fit = ftl::fit_power_law({1, 2, 4, 8}, {3, 12, 48, 192});
  REQUIRE(fit);
  CHECK(fit->slope == doctest::Approx(2.0));
}

TEST_CASE("full-dimensional content is the measure of O") {
  const auto r = ftl::full_dimensional_content(1.0, 1, 1e-3);
  CHECK(r.value == 1.0);
  CHECK(r.s == 1.0);
}
