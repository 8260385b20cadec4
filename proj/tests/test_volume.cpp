#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "ftl/errors.hpp"
#include "ftl/pipeline.hpp"
#include "ftl/scene.hpp"
#include "ftl/volume.hpp"

TEST_CASE("eps grid ends at hi and respects the lattice base") {
  const double base = std::log(3.0);
  const auto e = ftl::eps_grid(1e-3, 0.5, 32, base, {0.25});
  CHECK(e.back() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(e.front() >= 1e-3 * (1 - 1e-12));
  for (std::size_t i = 1; i < e.size(); ++i) REQUIRE(e[i] > e[i - 1]);
  CHECK(std::find_if(e.begin(), e.end(), [](double x) { return std::abs(x - 0.25) < 1e-15; }) != e.end());
  // eps * 3 of an interior point is again a grid point.
  std::size_t hits = 0, tried = 0;
  for (double x : e) {
    if (x * 3 > 0.5 || std::abs(x - 0.25) < 1e-15) continue;
    ++tried;
    for (double y : e)
      if (std::abs(y / (3 * x) - 1) < 1e-10) ++hits;
  }
  CHECK(hits == tried);
}

TEST_CASE("Cantor h agrees with V(G) below min r_i g") {
  ftl::PipelineOptions opt;
  opt.delta = 1.0 / 8192;
  ftl::Pipeline p(ftl::load_scene("cantor"), opt);
  const auto h = p.h();
  const double g = p.tiling().g;
  for (std::size_t i = 0; i < h.eps.size(); ++i) {
    const double e = h.eps[i];
    if (e >= g / 3) continue;
    // Oracle: V((1/3, 2/3), eps) = 2 eps for eps < 1/6.
    CHECK(h.values[i] == doctest::Approx(2 * e).epsilon(4 * opt.delta.value() / e));
  }
}

TEST_CASE("renewal difference with a synthetic table") {
  // V(T, eps) for the Cantor tiling in closed form: sum over tiles of min(len, 2 eps).
  ftl::PipelineOptions opt;
  opt.delta = 1.0 / 8192;
  ftl::Pipeline p(ftl::load_scene("cantor"), opt);
  auto VT = p.V_T();
  auto VT_exact = VT;
  for (std::size_t i = 0; i < VT.eps.size(); ++i) {
    double v = std::pow(2.0 / 3.0, 40);  // tiles of level >= 40 are fully counted
    for (int n = 0; n < 40; ++n) v += std::pow(2.0, n) * std::min(std::pow(3.0, -n) / 3, 2 * VT.eps[i]);
    VT_exact.values[i] = v;
  }
  for (std::size_t i = 0; i < VT.eps.size(); ++i)
    CHECK(VT.values[i] == doctest::Approx(VT_exact.values[i]).epsilon(0.01));
  const auto h = ftl::h_function(VT_exact, p.scene().ifs, 1.0 / 6);
  for (std::size_t i = 0; i < h.eps.size(); ++i)
    if (h.eps[i] < 1.0 / 18) CHECK(h.values[i] == doctest::Approx(2 * h.eps[i]).epsilon(1e-6));
}

TEST_CASE("phi vanishes where F_eps covers the tiles") {
  ftl::PipelineOptions opt;
  opt.delta = 1.0 / 8192;
  ftl::Pipeline p(ftl::load_scene("cantor"), opt);
  const auto phi = p.phi();
  REQUIRE(!phi.eps.empty());
  // For eps below g~/3, phi = lambda(F_eps cap Gamma) = 2 eps on the two gaps adjacent to F.
  for (std::size_t i = 0; i < phi.eps.size(); ++i)
    if (phi.eps[i] < p.g_tilde() / 3 - 2 * opt.delta.value())
      CHECK(phi.values[i] == doctest::Approx(2 * phi.eps[i]).epsilon(4 * opt.delta.value() / phi.eps[i]));
}

TEST_CASE("R_d of the Cantor set against the gap-sum oracle") {
  ftl::PipelineOptions opt;
  opt.delta = 1.0 / 8192;
  ftl::Pipeline p(ftl::load_scene("cantor"), opt);
  const auto r = p.R_d();
  CHECK(r.eps.back() == doctest::Approx(1.0));
  // lambda(F_eps) = 1 + 2 eps - sum_n 2^n max(0, 3^-(n+1) - 2 eps).
  auto vol = [](double e) {
    double v = 1 + 2 * e;
    for (int n = 0; n < 60; ++n) v -= std::pow(2.0, n) * std::max(0.0, std::pow(3.0, -n - 1) - 2 * e);
    return v;
  };
  for (std::size_t i = 0; i < r.eps.size(); ++i) {
    const double e = r.eps[i];
    const double oracle = vol(e) - (e <= 1.0 / 3 ? 2.0 / 3 * vol(3 * e) : 0.0);
    CHECK(std::abs(r.values[i] - oracle) <= r.tol[i] + 1e-12);
  }
}

TEST_CASE("CSV export writes the tolerance column") {
  ftl::VolumeSamples s;
  s.eps = {0.1, 0.2};
  s.values = {1, 2};
  s.tol = {0.01, 0.02};
  const std::string path = "ftl_test_volume.csv";
  ftl::write_csv(s, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header.find("tol") != std::string::npos);
  std::remove(path.c_str());
}
