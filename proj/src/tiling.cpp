#include "ftl/tiling.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <set>
#include <tuple>

#include "ftl/errors.hpp"
#include "ftl/parallel.hpp"

namespace ftl {

namespace {

Similarity identity_map() { return Similarity{1.0, Mat2::identity(), {0.0, 0.0}}; }

bool balls_meet(const Vec2& c1, double r1, const Vec2& c2, double r2) {
  return norm(c1 - c2) <= r1 + r2;
}

bool ball_meets_box(const Vec2& c, double r, const Box& b) {
  const double dx = std::max({b.lo.x - c.x, 0.0, c.x - b.hi.x});
  const double dy = std::max({b.lo.y - c.y, 0.0, c.y - b.hi.y});
  return std::hypot(dx, dy) <= r;
}

// Points (pre o S_tau)(x0) with spacing control, pruned to images of the invariant ball
// that meet the window.
void pruned_points(const IFS& ifs, const InvariantBall& ball, const Vec2& x0, const Similarity& pre,
                   const Box& window, double spacing, const std::function<void(const Vec2&)>& sink) {
  std::function<void(const Similarity&)> rec = [&](const Similarity& s) {
    if (!ball_meets_box(s.apply(ball.center), s.ratio * ball.radius, window)) return;
    if (s.ratio * 2.0 * ball.radius <= spacing) {
      sink(s.apply(x0));
      return;
    }
    for (const auto& m : ifs.maps) rec(s.compose(m));
  };
  rec(pre);
}

}  // namespace

GridGeometry region_geometry(const Region& O, double delta, double pad, std::size_t cap) {
  return GridGeometry::covering(O.bbox(), delta, O.dim(), pad, cap);
}

Grid image_raster(const Region& O, const Similarity& S, const GridGeometry& geo) {
  Grid g(geo);
  const Box img = S.image(O.bbox());
  parallel_for(
      static_cast<std::size_t>(geo.ny),
      [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        for (int i = 0; i < geo.nx; ++i) {
          Vec2 c = geo.center(i, j);
          if (geo.dim == 1) c.y = 0.0;
          if (!img.contains(c, 1e-12)) continue;
          Vec2 q = S.apply_inverse(c);
          if (geo.dim == 1) q.y = 0.0;
          if (O.contains(q)) g.occ[geo.index(i, j)] = 1;
        }
      },
      8);
  return g;
}

TilingData build_tiling(const IFS& ifs, RegionPtr O, const GridGeometry& geo,
                        const TilingOptions& opt) {
  ifs.validate();
  if (!O) throw ConfigError("tiling needs a feasible set");
  if (O->dim() != ifs.dim) throw ConfigError("region and IFS dimensions differ");
  TilingData t;
  t.ifs = ifs;
  t.O = O;
  t.geo = geo;
  t.O_grid = O->rasterize(geo);
  t.K = O->rasterize_closed(geo);
  t.lambda_O = t.O_grid.measure();
  if (t.O_grid.count() == 0) throw ConfigError("feasible set has no cells at this resolution");

  const int dim = ifs.dim;
  const auto& maps = ifs.maps;
  auto fix = [dim](Vec2 p) {
    if (dim == 1) p.y = 0.0;
    return p;
  };

  // Gamma: O minus the union of S_i O.
  t.Gamma = Grid(geo);
  t.G = Grid(geo);
  t.generator_exact = O->exact();
  if (O->exact()) {
    parallel_for(
        static_cast<std::size_t>(geo.ny),
        [&](std::size_t jj) {
          const int j = static_cast<int>(jj);
          for (int i = 0; i < geo.nx; ++i) {
            const std::size_t idx = geo.index(i, j);
            if (!t.O_grid.occ[idx]) continue;
            const Vec2 c = fix(geo.center(i, j));
            bool in_open = false, in_closed = false;
            for (const auto& m : maps) {
              const Vec2 q = fix(m.apply_inverse(c));
              if (!in_closed && O->contains_closed(q)) in_closed = true;
              if (!in_open && O->contains(q)) in_open = true;
              if (in_open && in_closed) break;
            }
            t.Gamma.occ[idx] = !in_open;
            t.G.occ[idx] = !in_closed;
          }
        },
        8);
  } else {
    Grid images(geo);
    for (const auto& m : maps) images = grid_union(images, image_raster(*O, m, geo));
    t.Gamma = grid_difference(t.O_grid, images);
    t.G = grid_difference(t.O_grid, dilate(images, 1));
  }
  t.lambda_G = t.G.measure();
  t.lambda_Gamma = t.Gamma.measure();
  if (t.G.count() == 0)
    throw PreconditionError("generator",
                            "G = O minus the union of S_i(cl O) is empty at this resolution "
                            "(full-dimensional attractor)");
  t.g = inradius(t.G);
  if (O->exact()) {
    // Coverage of the cells next to the raster boundary of G on an 8x8 (8 in 1D) subgrid.
    constexpr int kSub = 8;
    Grid outside(geo);
    for (std::size_t c = 0; c < outside.occ.size(); ++c) outside.occ[c] = !t.G.occ[c];
    const Grid interior = grid_difference(t.G, dilate(outside, 1));
    const Grid band = grid_difference(dilate(t.G, 1), interior);
    std::vector<double> cover(static_cast<std::size_t>(geo.ny), 0.0);
    parallel_for(
        static_cast<std::size_t>(geo.ny),
        [&](std::size_t jj) {
          const int j = static_cast<int>(jj);
          double acc = 0.0;
          for (int i = 0; i < geo.nx; ++i) {
            if (!band.at(i, j)) continue;
            const Vec2 c = geo.center(i, j);
            int hits = 0;
            const int sy = dim == 2 ? kSub : 1;
            for (int b = 0; b < sy; ++b)
              for (int a = 0; a < kSub; ++a) {
                const Vec2 q{c.x + ((a + 0.5) / kSub - 0.5) * geo.delta,
                             dim == 2 ? c.y + ((b + 0.5) / kSub - 0.5) * geo.delta : c.y};
                const Vec2 y = fix(q);
                bool in = O->contains(y);
                for (std::size_t m = 0; in && m < maps.size(); ++m)
                  if (O->contains_closed(fix(maps[m].apply_inverse(y)))) in = false;
                hits += in;
              }
            acc += static_cast<double>(hits) / (kSub * sy);
          }
          cover[jj] = acc;
        },
        8);
    double cells = static_cast<double>(interior.count());
    for (double c : cover) cells += c;
    t.lambda_G_exact = cells * geo.cell_volume();
  }

  // Tile union: paint S_sigma G for every resolved word.
  const CellRect gr = t.G.occupied_rect();
  Box gbox;
  gbox.include(fix(Vec2{geo.origin.x + gr.i0 * geo.delta, geo.origin.y + gr.j0 * geo.delta}));
  gbox.include(fix(Vec2{geo.origin.x + gr.i1 * geo.delta, geo.origin.y + gr.j1 * geo.delta}));
  const double cutoff = 0.5 * opt.residual_factor * geo.delta;
  auto gen_at = [&](const Vec2& y) -> bool {
    if (O->exact()) {
      if (!O->contains(y)) return false;
      for (const auto& m : maps)
        if (O->contains_closed(fix(m.apply_inverse(y)))) return false;
      return true;
    }
    int i, j;
    if (!geo.locate(y, i, j)) return false;
    return t.G.at(i, j);
  };
  t.T = Grid(geo);
  t.tile_label.assign(geo.cells(), 0);
  double residual_weight = 0.0;
  Word w;
  std::function<void(const Similarity&)> paint = [&](const Similarity& s) {
    ++t.tile_count;
    if (static_cast<int>(w.size()) <= opt.manifest_depth) t.tile_words.push_back(w);
    const auto label = static_cast<std::uint32_t>(t.tile_count);
    CellRect rect{geo.nx, geo.ny, 0, 0};
    auto mark = [&](int i, int j) {
      const std::size_t idx = geo.index(i, j);
      t.T.occ[idx] = 1;
      t.tile_label[idx] = label;
      rect.i0 = std::min(rect.i0, i);
      rect.j0 = std::min(rect.j0, j);
      rect.i1 = std::max(rect.i1, i + 1);
      rect.j1 = std::max(rect.j1, j + 1);
    };
    if (w.empty()) {
      for (int j = 0; j < geo.ny; ++j)
        for (int i = 0; i < geo.nx; ++i)
          if (t.G.at(i, j)) mark(i, j);
    } else {
      const Box img = s.image(gbox);
      const int i0 = std::max(0, static_cast<int>(std::floor((img.lo.x - geo.origin.x) / geo.delta)) - 1);
      const int i1 = std::min(geo.nx - 1, static_cast<int>(std::floor((img.hi.x - geo.origin.x) / geo.delta)) + 1);
      int j0 = 0, j1 = 0;
      if (dim == 2) {
        j0 = std::max(0, static_cast<int>(std::floor((img.lo.y - geo.origin.y) / geo.delta)) - 1);
        j1 = std::min(geo.ny - 1, static_cast<int>(std::floor((img.hi.y - geo.origin.y) / geo.delta)) + 1);
      }
      for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) {
          const std::size_t idx = geo.index(i, j);
          if (t.T.occ[idx]) continue;
          if (gen_at(fix(s.apply_inverse(fix(geo.center(i, j)))))) mark(i, j);
        }
    }
    t.tile_rects.push_back(rect);
    for (std::size_t k = 0; k < maps.size(); ++k) {
      const Similarity c = s.compose(maps[k]);
      if (c.ratio * t.g <= cutoff) {
        residual_weight += std::pow(c.ratio, dim);
        continue;
      }
      w.push_back(static_cast<std::uint8_t>(k));
      paint(c);
      w.pop_back();
    }
  };
  paint(identity_map());
  double sum_rd = 0.0;
  for (const auto& m : maps) sum_rd += std::pow(m.ratio, dim);
  const double lambda_T = t.lambda_G / (1.0 - sum_rd);
  t.residual_volume = residual_weight * lambda_T;
  t.residual_cells = static_cast<std::size_t>(std::llround(t.residual_volume / geo.cell_volume()));
  return t;
}

DistanceField tile_inner_distance(const TilingData& t) {
  DistanceField f = complement_distance(t.T);
  const auto& geo = t.geo;
  const int dim = geo.dim;
  std::vector<char> touching(t.tile_rects.size(), 0);
  for (int j = 0; j < geo.ny; ++j)
    for (int i = 0; i < geo.nx; ++i) {
      const std::uint32_t a = t.tile_label[geo.index(i, j)];
      if (!a) continue;
      for (int dj = (dim == 2 ? -1 : 0); dj <= (dim == 2 ? 1 : 0); ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int x = i + di, y = j + dj;
          if (x < 0 || y < 0 || x >= geo.nx || y >= geo.ny) continue;
          const std::uint32_t b = t.tile_label[geo.index(x, y)];
          if (b && b != a) touching[a - 1] = 1;
        }
    }
  for (std::size_t k = 0; k < t.tile_rects.size(); ++k) {
    if (!touching[k]) continue;
    const CellRect& r = t.tile_rects[k];
    if (r.empty()) continue;
    const int i0 = std::max(0, r.i0 - 1), i1 = std::min(geo.nx, r.i1 + 1);
    const int j0 = dim == 2 ? std::max(0, r.j0 - 1) : 0, j1 = dim == 2 ? std::min(geo.ny, r.j1 + 1) : 1;
    Grid tile(geo.sub(i0, j0, i1 - i0, j1 - j0));
    const auto label = static_cast<std::uint32_t>(k + 1);
    for (int j = j0; j < j1; ++j)
      for (int i = i0; i < i1; ++i)
        tile.occ[tile.geo.index(i - i0, j - j0)] = t.tile_label[geo.index(i, j)] == label;
    const DistanceField local = complement_distance(tile);
    for (int j = j0; j < j1; ++j)
      for (int i = i0; i < i1; ++i)
        if (t.tile_label[geo.index(i, j)] == label) {
          auto& v = f.sq[geo.index(i, j)];
          v = std::min(v, local.sq[tile.geo.index(i - i0, j - j0)]);
        }
  }
  return f;
}

Grid attractor_raster(const IFS& ifs, const GridGeometry& geo, int first_letter,
                      const Similarity* pre) {
  ifs.validate();
  Grid g(geo);
  bool escaped = false;
  Vec2 witness;
  attractor_points(
      ifs, 0.5 * geo.delta,
      [&](const Vec2& p) {
        int i, j;
        Vec2 q = p;
        if (geo.dim == 1) q.y = 0.0;
        if (!geo.locate(q, i, j)) {
          if (!escaped) witness = q;
          escaped = true;
          return;
        }
        g.occ[geo.index(i, j)] = 1;
      },
      first_letter, pre);
  if (escaped)
    throw ResolutionError("attractor point (" + std::to_string(witness.x) + ", " +
                          std::to_string(witness.y) + ") lies outside the grid: bbox not invariant");
  return g;
}

double relative_inradius(const DistanceField& F_field, const Grid& O) {
  if (!O.geo.same_as(F_field.geo)) throw ConfigError("grid geometries differ");
  std::uint64_t best = 0;
  bool any = false;
  for (std::size_t c = 0; c < O.occ.size(); ++c)
    if (O.occ[c]) {
      any = true;
      best = std::max(best, F_field.sq[c]);
    }
  if (!any) throw ResolutionError("relative inradius of an empty region");
  return std::sqrt(static_cast<double>(best)) * O.geo.delta;
}

std::vector<Similarity> neighbor_maps(const IFS& ifs, const Box& window, int cap) {
  ifs.validate();
  if (cap < 1) throw ConfigError("neighbor cap must be at least 1");
  const InvariantBall ball = invariant_ball(ifs);
  // Invariant ball that also contains the window.
  double RW = ball.radius;
  for (const Vec2& p : {window.lo, window.hi, Vec2{window.lo.x, window.hi.y}, Vec2{window.hi.x, window.lo.y}})
    RW = std::max(RW, norm(p - ball.center));
  std::set<std::tuple<long long, long long, long long, long long, long long, long long, long long>> seen;
  std::vector<Similarity> out;
  auto key = [](const Similarity& h) {
    auto q = [](double v) { return static_cast<long long>(std::llround(v * 1e8)); };
    return std::make_tuple(q(h.ratio), q(h.Q.a), q(h.Q.b), q(h.Q.c), q(h.Q.d), q(h.t.x), q(h.t.y));
  };
  Word sigma;
  std::function<void(const Similarity&)> visit_sigma = [&](const Similarity& s) {
    const std::uint8_t first = sigma.front();
    const Vec2 sc = s.apply(ball.center);
    const double sr = s.ratio * RW;
    const Similarity sinv = s.inverse();
    bool any_near = false;
    // omega: first letter differs, refined until r_omega <= r_sigma.
    std::function<void(const Similarity&, std::size_t)> visit_omega = [&](const Similarity& o,
                                                                         std::size_t len) {
      if (!balls_meet(o.apply(ball.center), o.ratio * ball.radius, sc, sr)) return;
      any_near = true;
      if (o.ratio <= s.ratio * (1.0 + 1e-12) || len >= 64) {
        const Similarity h = sinv.compose(o);
        if (!ball_meets_box(h.apply(ball.center), h.ratio * ball.radius, window)) return;
        if (seen.insert(key(h)).second) out.push_back(h);
        return;
      }
      for (const auto& m : ifs.maps) visit_omega(o.compose(m), len + 1);
    };
    for (std::size_t j = 0; j < ifs.maps.size(); ++j)
      if (j != first) visit_omega(ifs.maps[j], 1);
    if (!any_near || static_cast<int>(sigma.size()) >= cap) return;
    for (std::size_t k = 0; k < ifs.maps.size(); ++k) {
      sigma.push_back(static_cast<std::uint8_t>(k));
      visit_sigma(s.compose(ifs.maps[k]));
      sigma.pop_back();
    }
  };
  for (std::size_t i = 0; i < ifs.maps.size(); ++i) {
    sigma.assign(1, static_cast<std::uint8_t>(i));
    visit_sigma(ifs.maps[i]);
  }
  return out;
}

CentralOpenSet central_open_set(const IFS& ifs, const GridGeometry& geo, int neighbor_cap) {
  const Box window = geo.box();
  const auto hs = neighbor_maps(ifs, window, neighbor_cap);
  CentralOpenSet out;
  out.neighbor_maps = hs.size();
  const Grid F = attractor_raster(ifs, geo);
  Grid H(geo);
  const InvariantBall ball = invariant_ball(ifs);
  const Vec2 x0 = ifs.maps[0].fixed_point();
  for (const auto& h : hs)
    pruned_points(ifs, ball, x0, h, window, 0.5 * geo.delta, [&](const Vec2& p) {
      int i, j;
      Vec2 q = p;
      if (geo.dim == 1) q.y = 0.0;
      if (geo.locate(q, i, j)) H.occ[geo.index(i, j)] = 1;
    });
  out.Vc = Grid(geo);
  if (H.count() == 0) {
    out.degenerate = true;
    std::fill(out.Vc.occ.begin(), out.Vc.occ.end(), 1);
    return out;
  }
  const DistanceField dF = distance_transform(F);
  const DistanceField dH = distance_transform(H);
  for (std::size_t c = 0; c < out.Vc.occ.size(); ++c) {
    const double a = std::sqrt(static_cast<double>(dF.sq[c]));
    const double b = std::sqrt(static_cast<double>(dH.sq[c]));
    out.Vc.occ[c] = a < b - 1.0;
  }
  return out;
}

void export_tiling(const TilingData& t, const std::string& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json j;
  j["dim"] = t.ifs.dim;
  j["ratios"] = t.ifs.ratios();
  j["g"] = t.g;
  if (t.g_tilde) j["g_tilde"] = *t.g_tilde;
  j["lambda_O"] = t.lambda_O;
  j["lambda_G"] = t.lambda_G;
  j["lambda_Gamma"] = t.lambda_Gamma;
  j["delta"] = t.geo.delta;
  j["grid"] = {{"nx", t.geo.nx}, {"ny", t.geo.ny}, {"origin", {t.geo.origin.x, t.geo.origin.y}}};
  j["tile_count"] = t.tile_count;
  j["residual_volume"] = t.residual_volume;
  j["generator_exact"] = t.generator_exact;
  nlohmann::json words = nlohmann::json::array();
  for (const auto& w : t.tile_words) {
    double r = 1.0;
    for (auto l : w) r *= t.ifs.maps[l].ratio;
    words.push_back({{"word", word_to_string(w)}, {"ratio", r}});
  }
  j["tiles"] = words;
  std::ofstream(dir + "/tiling.json") << j.dump(2) << '\n';
  write_pgm(t.G, dir + "/G.pgm");
  write_pgm(t.Gamma, dir + "/Gamma.pgm");
  write_pgm(t.T, dir + "/tiles.pgm");
}

}  // namespace ftl
