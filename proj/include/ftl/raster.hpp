#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ftl/geometry.hpp"

namespace ftl {

/// Default cap on raster size (cells).
inline constexpr std::size_t kDefaultCellCap = std::size_t{1} << 27;

/// Uniform cell lattice. Cell (i,j) covers [origin + (i,j) delta, origin + (i+1,j+1) delta).
/// One-dimensional grids have ny = 1 and cell centers on y = 0.
struct GridGeometry {
  int dim = 2;
  Vec2 origin{};
  double delta = 1.0;
  int nx = 0;
  int ny = 0;

  std::size_t cells() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }
  Vec2 center(int i, int j) const {
    return {origin.x + (i + 0.5) * delta, origin.y + (j + 0.5) * delta};
  }
  Vec2 center(std::size_t idx) const {
    return center(static_cast<int>(idx % nx), static_cast<int>(idx / nx));
  }
  /// Cell containing p; false when p lies outside the grid.
  bool locate(const Vec2& p, int& i, int& j) const;
  Box box() const { return {origin, {origin.x + nx * delta, origin.y + ny * delta}}; }
  /// d-dimensional cell volume delta^d.
  double cell_volume() const { return dim == 1 ? delta : delta * delta; }
  bool same_as(const GridGeometry& o) const;

  /// Grid covering b padded by pad, with b.lo on a cell center. Throws ResolutionError
  /// when the cell count exceeds cap.
  static GridGeometry covering(const Box& b, double delta, int dim, double pad,
                               std::size_t cap = kDefaultCellCap);
  /// Sub-lattice [i0, i0+nx) x [j0, j0+ny) sharing this grid's cells.
  GridGeometry sub(int i0, int j0, int snx, int sny) const;
};

/// Half-open rectangle of cell indices.
struct CellRect {
  int i0 = 0, j0 = 0, i1 = 0, j1 = 0;
  bool empty() const { return i1 <= i0 || j1 <= j0; }
};

/// Binary raster.
struct Grid {
  GridGeometry geo;
  std::vector<std::uint8_t> occ;

  Grid() = default;
  explicit Grid(const GridGeometry& g) : geo(g), occ(g.cells(), 0) {}

  bool at(int i, int j) const { return occ[geo.index(i, j)] != 0; }
  std::size_t count() const;
  double measure() const { return static_cast<double>(count()) * geo.cell_volume(); }
  /// Occupied cells with an unoccupied (or off-grid) 4-neighbor.
  std::size_t boundary_cells() const;
  /// Bounding rectangle of occupied cells (empty rect when none).
  CellRect occupied_rect() const;
  bool border_occupied() const;
};

Grid grid_union(const Grid& a, const Grid& b);
Grid grid_intersection(const Grid& a, const Grid& b);
Grid grid_difference(const Grid& a, const Grid& b);
/// Morphological dilation by a (2r+1)-cell square (interval in 1D).
Grid dilate(const Grid& g, int r = 1);
/// Copies the cells of g inside the sub-lattice sub (which must be a sub() of g.geo).
Grid crop(const Grid& g, const GridGeometry& sub, int i0, int j0);

/// Exact Euclidean distance field. Values are stored as squared distances in cell units,
/// which are integers; value() converts to length units.
struct DistanceField {
  GridGeometry geo;
  std::vector<std::uint64_t> sq;

  double value(std::size_t idx) const;
  double value(int i, int j) const { return value(geo.index(i, j)); }
  std::uint64_t max_sq() const;
};

/// Distance from each cell center to the nearest occupied cell center (separable
/// lower-envelope algorithm). Throws ResolutionError for an empty grid.
DistanceField distance_transform(const Grid& g);
/// Distance from each cell center to the nearest unoccupied cell center.
DistanceField complement_distance(const Grid& g);

/// delta^d * #{cells : f <= eps}.
double parallel_volume(const DistanceField& f, double eps);
/// delta^d * #{cells in U whose boundary distance is <= eps}; boundary distance is the center
/// distance to the complement minus half a cell.
double inner_parallel_volume(const Grid& U, double eps);
/// Largest boundary distance over U. Throws ResolutionError when U is empty.
double inradius(const Grid& U);
double inradius(const Grid& U, const DistanceField& complement);

/// Threshold of squared cell distances for "sqrt(sq) - shift <= e".
std::uint64_t sq_threshold(double e_cells, double shift_cells);

/// Cumulative distance histogram over a mask: O(log n) parallel-volume queries at any eps.
class VolumeTable {
 public:
  VolumeTable() = default;
  /// shift_cells: subtracted from center distances (0.5 for inner distances);
  /// extra_cells: cells always counted (e.g. sub-resolution tiles).
  VolumeTable(const DistanceField& f, const Grid* mask, double shift_cells = 0.0,
              std::size_t extra_cells = 0);

  double volume(double eps) const;
  /// Midpoint-rule error bound: cells within half a cell of the level set plus the
  /// boundary cells of the mask, times the cell volume.
  double tolerance(double eps) const;
  double total() const;
  std::size_t count(double eps) const;
  double delta() const { return delta_; }
  int dim() const { return dim_; }
  std::size_t masked_cells() const { return masked_; }
  /// Largest boundary distance present in the table.
  double max_distance() const;

 private:
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint64_t> cum_;
  double delta_ = 1.0;
  double shift_ = 0.0;
  int dim_ = 2;
  double cell_volume_ = 1.0;
  std::size_t masked_ = 0;
  std::size_t extra_ = 0;
  std::size_t mask_boundary_ = 0;
};

/// Binary PGM (P5), occupied = 255, rows written top to bottom.
void write_pgm(const Grid& g, const std::string& path);
/// Grayscale PGM of a distance field clipped at max_value.
void write_pgm(const DistanceField& f, double max_value, const std::string& path);
/// CSV with columns i,j,x,y of occupied cells.
void write_occupancy_csv(const Grid& g, const std::string& path);
/// Float32 little-endian raw values plus <base>.json header (geometry, dtype, layout).
void write_distance_raw(const DistanceField& f, const std::string& base_path);

}  // namespace ftl
