#include "ftl/region.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "ftl/errors.hpp"
#include "ftl/parallel.hpp"

namespace ftl {

namespace {
Grid rasterize_with(const GridGeometry& geo, const std::function<bool(const Vec2&)>& pred) {
  Grid g(geo);
  parallel_for(
      static_cast<std::size_t>(geo.ny),
      [&](std::size_t j) {
        for (int i = 0; i < geo.nx; ++i) {
          Vec2 c = geo.center(i, static_cast<int>(j));
          if (geo.dim == 1) c.y = 0.0;
          g.occ[geo.index(i, static_cast<int>(j))] = pred(c) ? 1 : 0;
        }
      },
      8);
  return g;
}

double seg_dist(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double l2 = dot(ab, ab);
  double t = l2 > 0 ? dot(p - a, ab) / l2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + ab * t));
}

// Crossing-number test; boundary points are reported separately.
int polygon_locate(const std::vector<Vec2>& poly, const Vec2& p, double tol) {
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t k = 0, l = n - 1; k < n; l = k++) {
    const Vec2& a = poly[l];
    const Vec2& b = poly[k];
    if (seg_dist(p, a, b) <= tol) return 0;  // on boundary
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside ? 1 : -1;
}

bool in_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c, double tol) {
  const double s = cross(b - a, c - a) > 0 ? 1.0 : -1.0;
  return s * cross(b - a, p - a) >= -tol && s * cross(c - b, p - b) >= -tol &&
         s * cross(a - c, p - c) >= -tol;
}
}  // namespace

Grid Region::rasterize(const GridGeometry& geo) const {
  if (geo.dim != dim()) throw ConfigError("region and grid dimensions differ");
  return rasterize_with(geo, [this](const Vec2& p) { return contains(p); });
}

Grid Region::rasterize_closed(const GridGeometry& geo) const {
  if (geo.dim != dim()) throw ConfigError("region and grid dimensions differ");
  return rasterize_with(geo, [this](const Vec2& p) { return contains_closed(p); });
}

// ---------------------------------------------------------------------------------------

IntervalUnion::IntervalUnion(std::vector<std::pair<double, double>> intervals)
    : iv_(std::move(intervals)) {
  for (const auto& [a, b] : iv_)
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
      throw ConfigError("interval endpoints must be finite with a < b");
}

bool IntervalUnion::contains(const Vec2& p) const {
  for (const auto& [a, b] : iv_)
    if (p.x > a && p.x < b) return true;
  return false;
}

bool IntervalUnion::contains_closed(const Vec2& p) const {
  for (const auto& [a, b] : iv_)
    if (p.x >= a && p.x <= b) return true;
  return false;
}

Box IntervalUnion::bbox() const {
  Box b;
  for (const auto& [lo, hi] : iv_) {
    b.include(Vec2{lo, 0.0});
    b.include(Vec2{hi, 0.0});
  }
  return b;
}

double IntervalUnion::boundary_measure() const { return 2.0 * static_cast<double>(iv_.size()); }

// ---------------------------------------------------------------------------------------

PolygonUnion::PolygonUnion(std::vector<std::vector<Vec2>> polygons) : polys_(std::move(polygons)) {
  Box all;
  for (const auto& poly : polys_) {
    if (poly.size() < 3) throw ConfigError("a polygon needs at least three vertices");
    Box b;
    double area2 = 0.0;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      if (!std::isfinite(poly[k].x) || !std::isfinite(poly[k].y))
        throw ConfigError("polygon vertices must be finite");
      b.include(poly[k]);
      area2 += cross(poly[k], poly[(k + 1) % poly.size()]);
    }
    if (std::abs(area2) <= 0.0) throw ConfigError("degenerate polygon with zero area");
    boxes_.push_back(b);
    all.include(b);
  }
  tol_ = 1e-12 * std::max(1.0, all.diameter());
}

bool PolygonUnion::contains(const Vec2& p) const {
  for (std::size_t k = 0; k < polys_.size(); ++k) {
    if (!boxes_[k].contains(p)) continue;
    if (polygon_locate(polys_[k], p, tol_) > 0) return true;
  }
  return false;
}

bool PolygonUnion::contains_closed(const Vec2& p) const {
  for (std::size_t k = 0; k < polys_.size(); ++k) {
    if (!boxes_[k].contains(p, tol_)) continue;
    if (polygon_locate(polys_[k], p, tol_) >= 0) return true;
  }
  return false;
}

Box PolygonUnion::bbox() const {
  Box b;
  for (const auto& bb : boxes_) b.include(bb);
  return b;
}

double PolygonUnion::boundary_measure() const {
  double per = 0.0;
  for (const auto& poly : polys_)
    for (std::size_t k = 0; k < poly.size(); ++k) per += norm(poly[(k + 1) % poly.size()] - poly[k]);
  return per;
}

// ---------------------------------------------------------------------------------------

HalfSpaces::HalfSpaces(std::vector<HalfPlane> planes, Box bounds)
    : planes_(std::move(planes)), bounds_(bounds) {
  if (bounds_.empty()) throw ConfigError("half-space region needs a nonempty bounding box");
  for (const auto& h : planes_)
    if (norm(h.n) == 0.0) throw ConfigError("half-plane normal must be nonzero");
}

bool HalfSpaces::contains(const Vec2& p) const {
  if (!(p.x > bounds_.lo.x && p.x < bounds_.hi.x && p.y > bounds_.lo.y && p.y < bounds_.hi.y))
    return false;
  for (const auto& h : planes_)
    if (!(dot(h.n, p) < h.c)) return false;
  return true;
}

bool HalfSpaces::contains_closed(const Vec2& p) const {
  if (!bounds_.contains(p)) return false;
  for (const auto& h : planes_)
    if (dot(h.n, p) > h.c) return false;
  return true;
}

double HalfSpaces::boundary_measure() const {
  // Clip the bounding box polygon by every half-plane.
  std::vector<Vec2> poly{bounds_.lo, {bounds_.hi.x, bounds_.lo.y}, bounds_.hi, {bounds_.lo.x, bounds_.hi.y}};
  for (const auto& h : planes_) {
    std::vector<Vec2> out;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Vec2& a = poly[k];
      const Vec2& b = poly[(k + 1) % poly.size()];
      const double fa = dot(h.n, a) - h.c, fb = dot(h.n, b) - h.c;
      if (fa <= 0) out.push_back(a);
      if ((fa < 0) != (fb < 0) && fa != fb) out.push_back(a + (b - a) * (fa / (fa - fb)));
    }
    poly = std::move(out);
    if (poly.empty()) return 0.0;
  }
  double per = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) per += norm(poly[(k + 1) % poly.size()] - poly[k]);
  return per;
}

// ---------------------------------------------------------------------------------------

GridRegion::GridRegion(Grid g) : grid_(std::move(g)) {
  const CellRect r = grid_.occupied_rect();
  if (r.empty()) throw ConfigError("grid region is empty");
  const auto& geo = grid_.geo;
  bbox_.include(Vec2{geo.origin.x + r.i0 * geo.delta, geo.dim == 1 ? 0.0 : geo.origin.y + r.j0 * geo.delta});
  bbox_.include(Vec2{geo.origin.x + r.i1 * geo.delta, geo.dim == 1 ? 0.0 : geo.origin.y + r.j1 * geo.delta});
}

bool GridRegion::contains(const Vec2& p) const {
  int i, j;
  if (!grid_.geo.locate(p, i, j)) return false;
  return grid_.at(i, j);
}

bool GridRegion::contains_closed(const Vec2& p) const {
  const auto& geo = grid_.geo;
  int i, j;
  Vec2 q = p;
  if (geo.dim == 1) q.y = 0.0;
  const double fx = std::floor((q.x - geo.origin.x) / geo.delta);
  const double fy = geo.dim == 1 ? 0.0 : std::floor((q.y - geo.origin.y) / geo.delta);
  if (fx < -1 || fy < -1 || fx > geo.nx || fy > geo.ny) return false;
  i = static_cast<int>(fx);
  j = static_cast<int>(fy);
  const int jr = geo.dim == 1 ? 0 : 1;
  for (int dj = -jr; dj <= jr; ++dj)
    for (int di = -1; di <= 1; ++di) {
      const int a = i + di, b = j + dj;
      if (a >= 0 && b >= 0 && a < geo.nx && b < geo.ny && grid_.at(a, b)) return true;
    }
  return false;
}

Box GridRegion::bbox() const { return bbox_; }

double GridRegion::boundary_measure() const {
  const double cells = static_cast<double>(grid_.boundary_cells());
  return grid_.geo.dim == 1 ? std::min(cells, 2.0 * cells) : cells * grid_.geo.delta;
}

// ---------------------------------------------------------------------------------------

TileUnionRegion::TileUnionRegion(IFS ifs, RegionPtr gen, double min_size)
    : ifs_(std::move(ifs)), gen_(std::move(gen)), min_size_(min_size) {
  ifs_.validate();
  if (!gen_) throw ConfigError("tile union needs a generator region");
  if (!(min_size_ > 0)) throw ConfigError("tile union needs a positive minimum tile size");
  gen_diam_ = gen_->bbox().diameter();
  Box b = gen_->bbox();
  b.include(attractor_bbox(ifs_));
  for (int it = 0; it < 200; ++it) {
    Box nb = b;
    for (const auto& m : ifs_.maps) nb.include(m.image(b));
    const double grow = std::max({b.lo.x - nb.lo.x, b.lo.y - nb.lo.y, nb.hi.x - b.hi.x, nb.hi.y - b.hi.y});
    b = nb;
    if (grow <= 1e-13) break;
  }
  hull_ = b.padded(1e-9 * std::max(1.0, b.diameter()));
}

bool TileUnionRegion::member(const Vec2& p, double scale, bool closed) const {
  if (closed ? gen_->contains_closed(p) : gen_->contains(p)) return true;
  for (const auto& m : ifs_.maps) {
    const double s = scale * m.ratio;
    if (s * gen_diam_ < min_size_) continue;
    Vec2 q = m.apply_inverse(p);
    if (ifs_.dim == 1) q.y = 0.0;
    if (!hull_.contains(q)) continue;
    if (member(q, s, closed)) return true;
  }
  return false;
}

bool TileUnionRegion::contains(const Vec2& p) const {
  return hull_.contains(p) && member(p, 1.0, false);
}

bool TileUnionRegion::contains_closed(const Vec2& p) const {
  return hull_.contains(p) && member(p, 1.0, true);
}

double TileUnionRegion::boundary_measure() const {
  // Sum over the tiles kept by the truncation of r_sigma^{d-1} H^{d-1}(bd gen).
  const double base = gen_->boundary_measure();
  const int d = ifs_.dim;
  double total = 0.0;
  std::function<void(double)> rec = [&](double scale) {
    total += std::pow(scale, d - 1) * base;
    for (const auto& m : ifs_.maps)
      if (scale * m.ratio * gen_diam_ >= min_size_) rec(scale * m.ratio);
  };
  rec(1.0);
  return total;
}

// ---------------------------------------------------------------------------------------

KochCutRegion::KochCutRegion(RegionPtr base, Vec2 a, Vec2 b, double r, double min_size)
    : base_(std::move(base)), a_(a), b_(b), r_(r), min_size_(min_size) {
  if (!base_ || base_->dim() != 2) throw ConfigError("Koch cut needs a planar base region");
  if (!(r > 0.5 && r < std::sqrt(0.5))) throw ConfigError("Koch cut ratio must lie in (1/2, 1/sqrt 2)");
  const double L = norm(b - a);
  if (!(L > 0)) throw ConfigError("Koch cut segment is degenerate");
  const Vec2 u = (b - a) * (1.0 / L);
  const Vec2 w{-u.y, u.x};
  const double theta = std::acos(1.0 / (2.0 * r));
  apex_ = a + u * (0.5 * L) + w * (0.5 * L * std::tan(theta));
  // Reflection across the line through a along u.
  const Mat2 ref{u.x * u.x - w.x * w.x, u.x * u.y - w.x * w.y, u.y * u.x - w.y * w.x, u.y * u.y - w.y * w.y};
  const Mat2 q1 = Mat2::rotation(theta) * ref;
  const Mat2 q2 = Mat2::rotation(-theta) * ref;
  m_[0] = Similarity{r, q1, a - q1 * a * r};
  m_[1] = Similarity{r, q2, apex_ - q2 * a * r};
}

double KochCutRegion::curve_dimension() const { return std::log(2.0) / std::log(1.0 / r_); }

bool KochCutRegion::below(const Vec2& p, double scale) const {
  const double tol = 1e-12;
  if (!in_triangle(p, a_, b_, apex_, tol)) return false;
  const Vec2 s1 = m_[0].apply(apex_);  // foot of the first sub-triangle on the base
  const Vec2 s2 = m_[1].apply(apex_);
  if (in_triangle(p, s1, s2, apex_, tol)) return true;
  const double child = scale * r_;
  if (child * norm(b_ - a_) < min_size_) return false;
  for (const auto& m : m_) {
    const Vec2 q = m.apply_inverse(p);
    if (in_triangle(q, a_, b_, apex_, tol)) return !below(q, child);
  }
  return false;
}

bool KochCutRegion::contains(const Vec2& p) const { return base_->contains(p) && !below(p, 1.0); }

bool KochCutRegion::contains_closed(const Vec2& p) const {
  return base_->contains_closed(p) && !below(p, 1.0);
}

double KochCutRegion::boundary_measure() const {
  // Base perimeter minus the cut segment plus the truncated curve length.
  const double L = norm(b_ - a_);
  double levels = 0;
  double s = 1.0;
  while (s * L >= min_size_) {
    s *= r_;
    levels += 1;
  }
  return base_->boundary_measure() - L + L * std::pow(2.0 * r_, levels);
}

}  // namespace ftl
