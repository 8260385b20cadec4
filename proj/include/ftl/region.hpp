#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "ftl/geometry.hpp"
#include "ftl/ifs.hpp"
#include "ftl/raster.hpp"

namespace ftl {

/// Bounded open set with an exact membership predicate for the set and its closure.
class Region {
 public:
  virtual ~Region() = default;
  virtual int dim() const = 0;
  virtual bool contains(const Vec2& p) const = 0;
  virtual bool contains_closed(const Vec2& p) const = 0;
  virtual Box bbox() const = 0;
  /// H^{d-1} of the boundary (perimeter, or number of endpoints in d = 1).
  virtual double boundary_measure() const = 0;
  /// False when the closed predicate is only resolution-faithful (grid regions).
  virtual bool exact() const { return true; }

  /// Cells whose center lies in the open set.
  Grid rasterize(const GridGeometry& geo) const;
  /// Cells whose center lies in the closure.
  Grid rasterize_closed(const GridGeometry& geo) const;
};

using RegionPtr = std::shared_ptr<const Region>;

/// Finite union of open intervals (d = 1).
class IntervalUnion final : public Region {
 public:
  explicit IntervalUnion(std::vector<std::pair<double, double>> intervals);
  int dim() const override { return 1; }
  bool contains(const Vec2& p) const override;
  bool contains_closed(const Vec2& p) const override;
  Box bbox() const override;
  double boundary_measure() const override;
  const std::vector<std::pair<double, double>>& intervals() const { return iv_; }

 private:
  std::vector<std::pair<double, double>> iv_;
};

/// Union of the interiors of simple polygons (d = 2).
class PolygonUnion final : public Region {
 public:
  explicit PolygonUnion(std::vector<std::vector<Vec2>> polygons);
  int dim() const override { return 2; }
  bool contains(const Vec2& p) const override;
  bool contains_closed(const Vec2& p) const override;
  Box bbox() const override;
  double boundary_measure() const override;
  const std::vector<std::vector<Vec2>>& polygons() const { return polys_; }

 private:
  std::vector<std::vector<Vec2>> polys_;
  std::vector<Box> boxes_;
  double tol_ = 1e-12;
};

/// Intersection of open half-planes n.x < c (d = 2), clipped to a bounding box.
class HalfSpaces final : public Region {
 public:
  struct HalfPlane {
    Vec2 n;
    double c;
  };
  HalfSpaces(std::vector<HalfPlane> planes, Box bounds);
  int dim() const override { return 2; }
  bool contains(const Vec2& p) const override;
  bool contains_closed(const Vec2& p) const override;
  Box bbox() const override { return bounds_; }
  double boundary_measure() const override;

 private:
  std::vector<HalfPlane> planes_;
  Box bounds_;
};

/// Region given by an explicit raster; the closure adds the 8-neighborhood.
class GridRegion final : public Region {
 public:
  explicit GridRegion(Grid g);
  int dim() const override { return grid_.geo.dim; }
  bool contains(const Vec2& p) const override;
  bool contains_closed(const Vec2& p) const override;
  Box bbox() const override;
  double boundary_measure() const override;
  bool exact() const override { return false; }
  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  Box bbox_;
};

/// Union of the tiles S_sigma(gen) over all words, truncated at tiles of diameter
/// below min_size.
class TileUnionRegion final : public Region {
 public:
  TileUnionRegion(IFS ifs, RegionPtr gen, double min_size);
  int dim() const override { return ifs_.dim; }
  bool contains(const Vec2& p) const override;
  bool contains_closed(const Vec2& p) const override;
  Box bbox() const override { return hull_; }
  double boundary_measure() const override;

 private:
  bool member(const Vec2& p, double scale, bool closed) const;
  IFS ifs_;
  RegionPtr gen_;
  double min_size_;
  Box hull_;  ///< box containing gen and mapped into itself (up to padding) by every map
  double gen_diam_;
};

/// Base region minus the closure of the region enclosed between a segment and a
/// two-map Koch-type curve built over it (the curve bulges into the base region).
class KochCutRegion final : public Region {
 public:
  /// The curve spans a -> b with contraction ratio r in (1/2, 1/sqrt 2) and bulges to the
  /// left of a -> b.
  KochCutRegion(RegionPtr base, Vec2 a, Vec2 b, double r, double min_size);
  int dim() const override { return 2; }
  bool contains(const Vec2& p) const override;
  bool contains_closed(const Vec2& p) const override;
  Box bbox() const override { return base_->bbox(); }
  double boundary_measure() const override;
  /// Minkowski dimension of the cut curve, ln 2 / ln(1/r).
  double curve_dimension() const;

 private:
  bool below(const Vec2& p, double scale) const;
  RegionPtr base_;
  Vec2 a_, b_, apex_;
  double r_;
  double min_size_;
  Similarity m_[2];
};

}  // namespace ftl
