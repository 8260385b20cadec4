#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ftl/ifs.hpp"
#include "ftl/raster.hpp"
#include "ftl/region.hpp"

namespace ftl {

struct TilingOptions {
  /// Tiles with inradius r_sigma * g <= residual_factor * delta / 2 are merged into the residual
  /// (they lie inside every sampled parallel set, eps >= 4 delta).
  double residual_factor = 4.0;
  /// Depth of the word list recorded in the manifest.
  int manifest_depth = 3;
};

/// Rasterized self-similar tiling T(O).
struct TilingData {
  IFS ifs;
  RegionPtr O;
  GridGeometry geo;
  Grid O_grid;
  Grid K;      ///< cl O
  Grid G;      ///< O minus the union of S_i(cl O)
  Grid Gamma;  ///< O minus the union of S_i O
  Grid T;      ///< union of the resolved tiles S_sigma G
  /// Tile index + 1 per cell of T (0 outside T), and the cell rectangle of each tile.
  std::vector<std::uint32_t> tile_label;
  std::vector<CellRect> tile_rects;
  double g = 0.0;  ///< inradius of G
  std::optional<double> g_tilde;
  double lambda_O = 0.0;
  double lambda_G = 0.0;
  /// Measure of G with boundary cells supersampled by the exact predicate (exact regions only).
  std::optional<double> lambda_G_exact;
  double lambda_Gamma = 0.0;
  /// Sub-resolution tiles: counted fully in V(T, eps), complement for distances.
  std::size_t residual_cells = 0;
  double residual_volume = 0.0;
  std::size_t tile_count = 0;
  std::vector<Word> tile_words;
  /// G was obtained from the exact closed predicate (false: one-cell dilation of grid images).
  bool generator_exact = true;
};

/// Complement distance of T in which every tile is its own component: cells of tiles that
/// touch another tile in the raster measure the distance to cells outside their own tile.
DistanceField tile_inner_distance(const TilingData& t);

/// Grid covering bbox(O) padded by pad.
GridGeometry region_geometry(const Region& O, double delta, double pad,
                             std::size_t cap = kDefaultCellCap);

/// Cells whose center lies in S(O).
Grid image_raster(const Region& O, const Similarity& S, const GridGeometry& geo);

/// Builds G, Gamma and the tile union on geo. Throws PreconditionError("generator") when G is
/// empty (full-dimensional attractor).
TilingData build_tiling(const IFS& ifs, RegionPtr O, const GridGeometry& geo,
                        const TilingOptions& opt = {});

/// Cells hit by S_sigma(x0) over prefix-minimal words with r_sigma * diam <= delta / 2.
/// first_letter restricts to S_i F; pre maps the points (pre o S_sigma)(x0).
/// Throws ResolutionError when a point falls outside the grid (bbox not invariant).
Grid attractor_raster(const IFS& ifs, const GridGeometry& geo, int first_letter = -1,
                      const Similarity* pre = nullptr);

/// Largest distance to F over the cells of O.
double relative_inradius(const DistanceField& F_field, const Grid& O);

/// Neighbor maps h = S_sigma^{-1} S_omega (first letters differ, |sigma| <= cap, r_omega
/// comparable to r_sigma) whose image of the invariant ball meets window.
std::vector<Similarity> neighbor_maps(const IFS& ifs, const Box& window, int cap);

struct CentralOpenSet {
  Grid Vc;
  std::size_t neighbor_maps = 0;
  /// No neighbor image meets the grid: Vc is the whole grid.
  bool degenerate = false;
};

/// Cells with d(x, F) < d(x, H) - delta, H the union of neighbor images of F.
CentralOpenSet central_open_set(const IFS& ifs, const GridGeometry& geo, int neighbor_cap = 6);

/// JSON manifest (words, ratios, g, g_tilde, measures) plus PGM layers G, Gamma, T.
void export_tiling(const TilingData& t, const std::string& dir);

}  // namespace ftl
