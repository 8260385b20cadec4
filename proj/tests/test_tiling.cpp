#include <doctest.h>

#include <cmath>
#include <memory>

#include "ftl/errors.hpp"
#include "ftl/pipeline.hpp"
#include "ftl/region.hpp"
#include "ftl/scene.hpp"
#include "ftl/tiling.hpp"

namespace {

ftl::TilingData tiling_of(const std::string& preset, double delta) {
  ftl::PipelineOptions opt;
  opt.delta = delta;
  ftl::Pipeline p(ftl::load_scene(preset), opt);
  return p.tiling();
}

}  // namespace

TEST_CASE("carpet generator is the middle square") {
  const double delta = 1.0 / 512;
  const auto t = tiling_of("carpet", delta);
  CHECK(t.lambda_O == doctest::Approx(1.0).epsilon(4 * delta));
  CHECK(t.lambda_G == doctest::Approx(1.0 / 9).epsilon(0.02));
  REQUIRE(t.lambda_G_exact);
  CHECK(*t.lambda_G_exact == doctest::Approx(1.0 / 9).epsilon(1e-3));
  CHECK(t.g == doctest::Approx(1.0 / 6).epsilon(2 * delta / (1.0 / 6)));
  CHECK(t.tile_count > 1 + 8 + 64);
  CHECK(t.tile_rects.size() == t.tile_count);
  // Tiles cover about lambda(G) / (1 - 8/9) = 1 together with the residual.
  CHECK(t.T.measure() + t.residual_volume == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("Cantor tiles: G = (1/3, 2/3)") {
  const double delta = 1.0 / 4096;
  const auto t = tiling_of("cantor", delta);
  CHECK(t.lambda_G == doctest::Approx(1.0 / 3).epsilon(2 * delta * 3));
  CHECK(t.g == doctest::Approx(1.0 / 6).epsilon(delta * 6));
  CHECK(t.Gamma.count() >= t.G.count());
}

TEST_CASE("touching tiles keep their own inner distances") {
  const double delta = 1.0 / 4096;
  const auto t = tiling_of("cantor_skewed", delta);
  const auto merged = ftl::complement_distance(t.T);
  const auto separated = ftl::tile_inner_distance(t);
  std::size_t smaller = 0;
  for (std::size_t c = 0; c < merged.sq.size(); ++c) {
    REQUIRE(separated.sq[c] <= merged.sq[c]);
    smaller += separated.sq[c] < merged.sq[c];
  }
  CHECK(smaller > 0);
  // Separation is a no-op for the carpet, whose tiles are disjoint in the raster.
  const auto c = tiling_of("carpet", 1.0 / 256);
  CHECK(ftl::tile_inner_distance(c).sq == ftl::complement_distance(c.T).sq);
}

TEST_CASE("full-dimensional system has no generator") {
  CHECK_THROWS_AS(tiling_of("interval_halves", 1.0 / 1024), ftl::PreconditionError);
}

TEST_CASE("attractor raster lies in the closure of O") {
  const double delta = 1.0 / 256;
  ftl::PipelineOptions opt;
  opt.delta = delta;
  ftl::Pipeline p(ftl::load_scene("carpet"), opt);
  const auto& t = p.tiling();
  const auto F = ftl::attractor_raster(t.ifs, t.geo);
  CHECK(F.count() > 0);
  const auto K = ftl::dilate(t.K, 1);
  for (std::size_t c = 0; c < F.occ.size(); ++c)
    if (F.occ[c]) REQUIRE(K.occ[c]);
  CHECK(p.g_tilde() == doctest::Approx(1.0 / 6).epsilon(0.03));
}

TEST_CASE("central open set of the carpet covers the unit square") {
  const auto ifs = ftl::load_scene("carpet").ifs;
  const auto geo = ftl::GridGeometry::covering(ftl::Box{{0, 0}, {1, 1}}, 1.0 / 128, 2, 0.1);
  const auto c = ftl::central_open_set(ifs, geo);
  CHECK(c.Vc.count() > 0);
  const auto center = geo.center(geo.index(64 + 13, 64 + 13));
  int i, j;
  REQUIRE(geo.locate(center, i, j));
  CHECK(c.Vc.at(i, j));
}
