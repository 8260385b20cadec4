#include "ftl/level_set.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "ftl/errors.hpp"
#include "ftl/parallel.hpp"

namespace ftl {

namespace {

constexpr double kTClamp = 1e-9;

// Per dual-edge accumulator: sum of the two turning halves and the mask decision.
struct EdgeAcc {
  double sum = 0.0;
  std::uint8_t state = 0;  // 0 no crossing, 1 crossing inside mask, 2 crossing outside mask
};

struct Partial {
  double length = 0.0;
  double turning = 0.0;
  double variation = 0.0;
  std::size_t crossings = 0;
  bool border_contact = false;
};

inline double crossing_t(double fa, double fb) {
  const double den = fa - fb;
  double t = den != 0.0 ? fa / den : 0.5;
  if (!(t >= kTClamp)) t = kTClamp;
  if (t > 1.0 - kTClamp) t = 1.0 - kTClamp;
  return t;
}

inline double angle_between(double ax, double ay, double bx, double by) {
  return std::atan2(ax * by - ay * bx, ax * bx + ay * by);
}

inline void finalize(EdgeAcc& e, Partial& p) {
  if (e.state == 1) {
    p.turning += e.sum;
    p.variation += std::abs(e.sum);
  }
  if (e.state != 0) ++p.crossings;
  e = EdgeAcc{};
}

struct Field {
  const DistanceField& f;
  std::uint64_t thr;
  double level;  // shift + eps/delta in cell units
  bool inside(std::size_t idx) const { return f.sq[idx] <= thr; }
  double value(std::size_t idx) const {
    return std::sqrt(static_cast<double>(f.sq[idx])) - level;
  }
};

}  // namespace

LevelSetStats level_set_stats(const DistanceField& f, double eps, double shift_cells,
                              const Grid* mask) {
  if (eps < 0) throw ConfigError("eps must be nonnegative");
  if (mask && !mask->geo.same_as(f.geo)) throw ConfigError("mask geometry differs from field");
  const GridGeometry& geo = f.geo;
  const int nx = geo.nx, ny = geo.ny;
  const double e_cells = eps / geo.delta;
  const Field fld{f, sq_threshold(e_cells, shift_cells), e_cells + shift_cells};
  auto in_mask = [&](std::size_t idx) { return mask == nullptr || mask->occ[idx] != 0; };

  LevelSetStats out;
  // Border uniformity.
  {
    bool any_in = false, any_out = false;
    auto visit = [&](int i, int j) {
      if (fld.inside(geo.index(i, j)))
        any_in = true;
      else
        any_out = true;
    };
    for (int i = 0; i < nx; ++i) {
      visit(i, 0);
      visit(i, ny - 1);
    }
    for (int j = 0; j < ny; ++j) {
      visit(0, j);
      visit(nx - 1, j);
    }
    out.border_contact = any_in && any_out;
    out.border_inside = any_in && !any_out;
  }

  if (geo.dim == 1) {
    std::size_t pts = 0;
    for (int i = 0; i + 1 < nx; ++i) {
      const std::size_t a = static_cast<std::size_t>(i), b = a + 1;
      if (fld.inside(a) == fld.inside(b)) continue;
      ++out.crossings;
      const double t = crossing_t(fld.value(a), fld.value(b));
      if (in_mask(t < 0.5 ? a : b)) ++pts;
    }
    out.turning = 0.5 * static_cast<double>(pts);
    out.variation = out.turning;
    return out;
  }

  if (nx < 2 || ny < 2) return out;
  const int square_rows = ny - 1;
  const std::size_t hx = static_cast<std::size_t>(nx - 1);
  const std::size_t vx = static_cast<std::size_t>(nx);
  const unsigned nthreads = thread_count();
  const std::size_t max_chunks = std::max<std::size_t>(1, nthreads);
  std::vector<Partial> partials(max_chunks);
  std::vector<std::vector<EdgeAcc>> bottoms(max_chunks), tops(max_chunks);
  std::vector<std::pair<int, int>> ranges(max_chunks, {0, 0});

  // Inward normals of the square edges e0 (bottom), e1 (right), e2 (top), e3 (left).
  static constexpr double kNin[4][2] = {{0, 1}, {-1, 0}, {0, -1}, {1, 0}};

  const std::size_t used = parallel_chunks(
      static_cast<std::size_t>(square_rows),
      [&](std::size_t jb, std::size_t je, std::size_t chunk) {
        Partial p;
        std::vector<EdgeAcc> hlo(hx), hhi(hx), vrow(vx);
        std::vector<double> vlo(vx), vhi(vx);
        std::vector<std::uint8_t> ilo(vx), ihi(vx);
        auto load_row = [&](int j, std::vector<double>& v, std::vector<std::uint8_t>& in) {
          for (int i = 0; i < nx; ++i) {
            const std::size_t idx = geo.index(i, j);
            in[i] = fld.inside(idx) ? 1 : 0;
            v[i] = std::numeric_limits<double>::quiet_NaN();
          }
        };
        auto val = [&](std::vector<double>& v, int i, int j) {
          if (std::isnan(v[i])) v[i] = fld.value(geo.index(i, j));
          return v[i];
        };
        load_row(static_cast<int>(jb), vlo, ilo);
        for (std::size_t jj = jb; jj < je; ++jj) {
          const int j = static_cast<int>(jj);
          load_row(j + 1, vhi, ihi);
          for (int i = 0; i + 1 < nx; ++i) {
            const std::uint8_t in[4] = {ilo[i], ilo[i + 1], ihi[i + 1], ihi[i]};
            const int code = in[0] | (in[1] << 1) | (in[2] << 2) | (in[3] << 3);
            if (code == 0 || code == 15) continue;
            // Crossing parameter on each edge, measured from its lower-index corner.
            double pt[4][2] = {};
            bool has[4];
            std::size_t near_cell[4] = {};
            const std::size_t c0 = geo.index(i, j), c1 = geo.index(i + 1, j),
                              c2 = geo.index(i + 1, j + 1), c3 = geo.index(i, j + 1);
            // e0: c0 -> c1
            has[0] = in[0] != in[1];
            if (has[0]) {
              const double t = crossing_t(val(vlo, i, j), val(vlo, i + 1, j));
              pt[0][0] = t;
              pt[0][1] = 0;
              near_cell[0] = t < 0.5 ? c0 : c1;
            }
            // e1: c1 -> c2
            has[1] = in[1] != in[2];
            if (has[1]) {
              const double t = crossing_t(val(vlo, i + 1, j), val(vhi, i + 1, j + 1));
              pt[1][0] = 1;
              pt[1][1] = t;
              near_cell[1] = t < 0.5 ? c1 : c2;
            }
            // e2: c3 -> c2
            has[2] = in[3] != in[2];
            if (has[2]) {
              const double t = crossing_t(val(vhi, i, j + 1), val(vhi, i + 1, j + 1));
              pt[2][0] = t;
              pt[2][1] = 1;
              near_cell[2] = t < 0.5 ? c3 : c2;
            }
            // e3: c0 -> c3
            has[3] = in[0] != in[3];
            if (has[3]) {
              const double t = crossing_t(val(vlo, i, j), val(vhi, i, j + 1));
              pt[3][0] = 0;
              pt[3][1] = t;
              near_cell[3] = t < 0.5 ? c0 : c3;
            }
            EdgeAcc* acc[4] = {&hlo[i], &vrow[i + 1], &hhi[i], &vrow[i]};
            // Segments: each in->out edge (corner k inside, k+1 outside, counterclockwise)
            // pairs with the previous out->in edge; this separates diagonal inside corners.
            for (int a = 0; a < 4; ++a) {
              if (!(in[a] && !in[(a + 1) % 4])) continue;
              int b = (a + 3) % 4;
              while (!(!in[b] && in[(b + 1) % 4])) b = (b + 3) % 4;
              const double dx = pt[b][0] - pt[a][0], dy = pt[b][1] - pt[a][1];
              const double len = std::hypot(dx, dy);
              const double mx = 0.5 * (pt[a][0] + pt[b][0]), my = 0.5 * (pt[a][1] + pt[b][1]);
              const int ci = mx < 0.5 ? 0 : 1, cj = my < 0.5 ? 0 : 1;
              const std::size_t mid_cell = geo.index(i + ci, j + cj);
              if (in_mask(mid_cell)) p.length += len;
              // Entry half at edge a, exit half at edge b.
              acc[a]->sum += angle_between(kNin[a][0], kNin[a][1], dx, dy);
              acc[b]->sum += angle_between(dx, dy, -kNin[b][0], -kNin[b][1]);
              for (int e : {a, b}) acc[e]->state = in_mask(near_cell[e]) ? 1 : 2;
            }
          }
          // Vertical edges of this row are complete.
          for (std::size_t i = 0; i < vx; ++i) {
            if (vrow[i].state != 0 && (i == 0 || i + 1 == vx)) p.border_contact = true;
            finalize(vrow[i], p);
          }
          // Horizontal edges at row j are complete unless they are the chunk's bottom seam.
          if (jj == jb && jb != 0) {
            bottoms[chunk] = hlo;
          } else {
            for (auto& e : hlo) {
              if (e.state != 0 && j == 0) p.border_contact = true;
              finalize(e, p);
            }
          }
          std::swap(hlo, hhi);
          std::fill(hhi.begin(), hhi.end(), EdgeAcc{});
          std::swap(vlo, vhi);
          std::swap(ilo, ihi);
        }
        if (je == static_cast<std::size_t>(square_rows)) {
          for (auto& e : hlo) {
            if (e.state != 0) p.border_contact = true;
            finalize(e, p);
          }
        } else {
          tops[chunk] = hlo;
        }
        partials[chunk] = p;
        ranges[chunk] = {static_cast<int>(jb), static_cast<int>(je)};
      },
      64);

  Partial total;
  for (std::size_t c = 0; c < used; ++c) {
    total.length += partials[c].length;
    total.turning += partials[c].turning;
    total.variation += partials[c].variation;
    total.crossings += partials[c].crossings;
    total.border_contact = total.border_contact || partials[c].border_contact;
    if (c + 1 < used) {
      // Seam between chunk c (top) and chunk c + 1 (bottom).
      auto& top = tops[c];
      auto& bot = bottoms[c + 1];
      for (std::size_t i = 0; i < hx; ++i) {
        EdgeAcc e = top[i];
        e.sum += bot[i].sum;
        if (e.state == 0) e.state = bot[i].state;
        finalize(e, total);
      }
    }
  }
  out.length = total.length * geo.delta;
  out.turning = total.turning / (2.0 * std::numbers::pi);
  out.variation = total.variation / (2.0 * std::numbers::pi);
  out.crossings = total.crossings;
  out.border_contact = out.border_contact || total.border_contact;
  return out;
}

long euler_characteristic(const Grid& g) {
  const int nx = g.geo.nx, ny = g.geo.ny;
  long v = 0, e = 0, fcount = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!g.at(i, j)) continue;
      ++v;
      const bool r = i + 1 < nx && g.at(i + 1, j);
      const bool u = j + 1 < ny && g.at(i, j + 1);
      e += r;
      e += u;
      if (r && u && g.at(i + 1, j + 1)) ++fcount;
    }
  return v - e + fcount;
}

long euler_characteristic(const DistanceField& f, double eps, double shift_cells) {
  Grid g(f.geo);
  const std::uint64_t thr = sq_threshold(eps / f.geo.delta, shift_cells);
  for (std::size_t c = 0; c < g.occ.size(); ++c) g.occ[c] = f.sq[c] <= thr;
  return euler_characteristic(g);
}

double boundary_length(const DistanceField& f, double eps, const Grid* mask) {
  if (f.geo.dim != 2) throw ConfigError("boundary length requires d = 2");
  const LevelSetStats s = level_set_stats(f, eps, 0.0, mask);
  if (s.border_contact || s.border_inside)
    throw ResolutionError("level set reaches the grid border; enlarge the bounding box");
  return s.length;
}

EulerTurning euler_and_turning(const DistanceField& f, double eps, const Grid* mask) {
  if (f.geo.dim != 2) throw ConfigError("turning requires d = 2");
  const LevelSetStats s = level_set_stats(f, eps, 0.0, mask);
  if (s.border_contact || s.border_inside)
    throw ResolutionError("level set reaches the grid border; enlarge the bounding box");
  return {euler_characteristic(f, eps, 0.0), s.turning, s.variation};
}

}  // namespace ftl
