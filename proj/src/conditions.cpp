#include "ftl/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ftl/errors.hpp"
#include "ftl/level_set.hpp"
#include "ftl/parallel.hpp"
#include "ftl/tiling.hpp"

namespace ftl {

namespace {

nlohmann::json point_json(const Vec2& p, int dim) {
  if (dim == 1) return nlohmann::json::array({p.x});
  return nlohmann::json::array({p.x, p.y});
}

// Cells of g adjacent (8-neighborhood) to a cell outside g or off the grid.
Grid boundary_layer(const Grid& g) {
  const auto& geo = g.geo;
  Grid out(geo);
  for (int j = 0; j < geo.ny; ++j)
    for (int i = 0; i < geo.nx; ++i) {
      if (!g.at(i, j)) continue;
      bool edge = false;
      for (int dj = -1; dj <= 1 && !edge; ++dj)
        for (int di = -1; di <= 1 && !edge; ++di) {
          if (geo.dim == 1 && dj != 0) continue;
          const int a = i + di, b = j + dj;
          if (a < 0 || b < 0 || a >= geo.nx || b >= geo.ny || !g.at(a, b)) edge = true;
        }
      if (edge) out.occ[geo.index(i, j)] = 1;
    }
  return out;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["verdict"] = to_string(r.verdict);
  j["resolution"] = r.delta;
  if (!r.witness.is_null()) j["witness"] = r.witness;
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

CheckReport check_osc(const IFS& ifs, const Region& O, const GridGeometry& geo) {
  CheckReport rep;
  rep.name = "osc";
  rep.delta = geo.delta;
  const Grid Og = O.rasterize(geo);
  const Grid near = dilate(Og, 1);
  const std::size_t n = geo.cells();
  std::vector<std::uint8_t> hits(n, 0), robust(n, 0);
  std::vector<Box> boxes;
  for (const auto& S : ifs.maps) boxes.push_back(S.image(O.bbox()));
  // An image cell is robust when its preimage lies at least 1/r_i cells deep inside the raster
  // of O, so that the image piece is resolved at this delta.
  const DistanceField depth = complement_distance(Og);
  parallel_chunks(n, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t idx = b; idx < e; ++idx) {
      const Vec2 c = geo.center(idx);
      std::uint8_t cnt = 0;
      for (std::size_t i = 0; i < ifs.size(); ++i) {
        if (!boxes[i].contains(c, geo.delta)) continue;
        const Vec2 p = ifs.maps[i].apply_inverse(c);
        if (!O.contains(p)) continue;
        ++cnt;
        int a, q;
        if (geo.locate(p, a, q)) {
          const double r = ifs.maps[i].ratio;
          if (static_cast<double>(depth.sq[geo.index(a, q)]) * r * r >= 1.0) robust[idx] = 1;
        }
      }
      hits[idx] = cnt;
    }
  });
  std::size_t outside = 0, seam_outside = 0, overlap = 0, deep_overlap = 0;
  std::size_t worst_out = n, worst_overlap = n;
  for (std::size_t idx = 0; idx < n; ++idx) {
    if (hits[idx] == 0) continue;
    if (!Og.occ[idx]) {
      if (near.occ[idx] || !robust[idx]) {
        ++seam_outside;
      } else {
        ++outside;
        if (worst_out == n) worst_out = idx;
      }
    }
    if (hits[idx] > 1) {
      ++overlap;
      // An overlap is a seam when some 4-neighbor is covered by at most one image.
      const int i = static_cast<int>(idx % geo.nx), j = static_cast<int>(idx / geo.nx);
      bool seam = false;
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int q = 0; q < 4 && !seam; ++q) {
        if (geo.dim == 1 && dj[q] != 0) continue;
        const int a = i + di[q], b = j + dj[q];
        if (a < 0 || b < 0 || a >= geo.nx || b >= geo.ny || hits[geo.index(a, b)] <= 1) seam = true;
      }
      if (!seam) {
        ++deep_overlap;
        if (worst_overlap == n) worst_overlap = idx;
      }
    }
  }
  if (outside > 0 || deep_overlap > 0) {
    rep.verdict = Verdict::fail;
    if (outside > 0) {
      rep.witness["cell_outside_O"] = point_json(geo.center(worst_out), geo.dim);
      rep.witness["cells_outside"] = outside;
    }
    if (deep_overlap > 0) {
      rep.witness["overlap_cell"] = point_json(geo.center(worst_overlap), geo.dim);
      rep.witness["overlap_cells"] = deep_overlap;
    }
    rep.detail = "images S_i O leave O or overlap beyond a seam layer";
  } else if (seam_outside > 0 || overlap > 0) {
    rep.verdict = Verdict::inconclusive;
    rep.witness["seam_cells"] = seam_outside + overlap;
    rep.detail = "violations confined to seam cells";
  } else {
    rep.verdict = Verdict::pass;
  }
  return rep;
}

CheckReport check_strong(const Grid& O, const DistanceField& F_field) {
  CheckReport rep;
  rep.name = "strong";
  rep.delta = O.geo.delta;
  if (!O.geo.same_as(F_field.geo)) throw ConfigError("strong check: O and F rasters differ");
  if (O.count() == 0) throw ResolutionError("strong check: empty O raster");
  // F meets O when some cell within a cell of F lies clearly deeper inside O than it is far
  // from F; if F only touches bd O, depth and distance to F agree up to a cell.
  const DistanceField inner = complement_distance(O);
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  for (std::size_t idx = 0; idx < O.occ.size(); ++idx) {
    if (!O.occ[idx] || F_field.sq[idx] > 1) continue;
    const double margin = std::sqrt(static_cast<double>(inner.sq[idx])) -
                          std::sqrt(static_cast<double>(F_field.sq[idx]));
    if (margin > best) {
      best = margin;
      best_idx = idx;
    }
  }
  if (!std::isfinite(best)) {
    rep.verdict = Verdict::fail;
    rep.detail = "no cell of O lies within delta of F";
    return rep;
  }
  rep.witness["point"] = point_json(O.geo.center(best_idx), O.geo.dim);
  rep.witness["distance_to_F"] = std::sqrt(static_cast<double>(F_field.sq[best_idx])) * O.geo.delta;
  rep.witness["depth_in_O"] = std::sqrt(static_cast<double>(inner.sq[best_idx])) * O.geo.delta;
  if (best >= 3.0) {
    rep.verdict = Verdict::pass;
  } else {
    rep.verdict = Verdict::fail;
    rep.detail = "F approaches O only through its boundary";
  }
  return rep;
}

CheckReport check_compatibility(const Grid& G, const DistanceField& F_field, int tol_cells) {
  CheckReport rep;
  rep.name = "compatible";
  rep.delta = G.geo.delta;
  if (!G.geo.same_as(F_field.geo)) throw ConfigError("compatibility check: G and F rasters differ");
  if (G.count() == 0) throw ResolutionError("compatibility check: empty generator raster");
  const std::uint64_t thr = static_cast<std::uint64_t>(tol_cells) * static_cast<std::uint64_t>(tol_cells);
  const Grid bd = boundary_layer(G);
  std::size_t total = 0, far = 0, worst_idx = 0;
  std::uint64_t worst = 0;
  for (std::size_t idx = 0; idx < bd.occ.size(); ++idx) {
    if (!bd.occ[idx]) continue;
    ++total;
    if (F_field.sq[idx] > thr) ++far;
    if (F_field.sq[idx] > worst) {
      worst = F_field.sq[idx];
      worst_idx = idx;
    }
  }
  rep.witness["boundary_cells"] = total;
  rep.witness["cells_far_from_F"] = far;
  if (far == 0) {
    rep.verdict = Verdict::pass;
  } else {
    rep.verdict = Verdict::fail;
    rep.witness["point"] = point_json(G.geo.center(worst_idx), G.geo.dim);
    rep.witness["distance_to_F"] = std::sqrt(static_cast<double>(worst)) * G.geo.delta;
    rep.detail = "boundary of G is not contained in F";
  }
  return rep;
}

CheckReport check_projection(const IFS& ifs, const Region& O, const DistanceField& F_field,
                             const std::vector<double>& eps, double g_tilde) {
  CheckReport rep;
  rep.name = "projection";
  const auto& geo = F_field.geo;
  rep.delta = geo.delta;
  const double cell = geo.cell_volume();
  const auto r = ifs.ratios();
  double worst_ratio = 0.0;
  nlohmann::json worst;
  bool failed = false;
  for (std::size_t i = 0; i < ifs.size(); ++i) {
    const Grid SiO = image_raster(O, ifs.maps[i], geo);
    if (SiO.count() == 0) continue;
    const DistanceField SiF = distance_transform(attractor_raster(ifs, geo, static_cast<int>(i)));
    const double tol = 4.0 * static_cast<double>(SiO.boundary_cells()) * cell;
    // A cell of S_i O is in the defect for eps in [d_F, d_{S_i F}).
    std::vector<std::pair<double, double>> spans;
    for (std::size_t idx = 0; idx < SiO.occ.size(); ++idx)
      if (SiO.occ[idx] && F_field.sq[idx] < SiF.sq[idx])
        spans.emplace_back(F_field.value(idx), SiF.value(idx));
    double lo = -1.0, hi = -1.0, peak = 0.0;
    for (double e : eps) {
      if (e > r[i] * g_tilde * (1.0 + 1e-12)) continue;
      std::size_t cnt = 0;
      for (const auto& [a, b] : spans)
        if (a <= e && e < b) ++cnt;
      const double defect = static_cast<double>(cnt) * cell;
      if (defect > tol) {
        if (lo < 0) lo = e;
        hi = e;
      }
      peak = std::max(peak, defect);
      if (tol > 0 && defect / tol > worst_ratio) {
        worst_ratio = defect / tol;
        worst = {{"map", i + 1}, {"eps", e}, {"defect", defect}, {"tolerance", tol}};
      }
    }
    if (lo >= 0) {
      failed = true;
      rep.witness = {{"map", i + 1}, {"eps_interval", {lo, hi}}, {"max_defect", peak}, {"tolerance", tol}};
      break;
    }
  }
  if (failed) {
    rep.verdict = Verdict::fail;
    rep.detail = "F_eps differs from (S_i F)_eps inside S_i O";
  } else {
    rep.verdict = Verdict::pass;
    if (!worst.is_null()) rep.witness = worst;
  }
  return rep;
}

CheckReport check_boundary_null(const Grid& O, const DistanceField& F_field, int k,
                                const std::vector<double>& eps) {
  CheckReport rep;
  rep.name = "boundary_null";
  rep.delta = O.geo.delta;
  if (O.geo.dim == 1) {
    rep.verdict = Verdict::pass;
    rep.detail = "boundary of O is finite";
    return rep;
  }
  if (!O.geo.same_as(F_field.geo)) throw ConfigError("boundary check: O and F rasters differ");
  // Collars of two and four cells on both sides of the raster boundary of O. Level-set pieces
  // crossing bd O contribute in proportion to the collar width, pieces running along bd O do
  // not, so 2 m(w) - m(2w) isolates the latter.
  const Grid outer = grid_difference(dilate(O, 1), O);
  const Grid collar = dilate(grid_union(boundary_layer(O), outer), 1);
  const Grid wide = dilate(collar, 2);
  const double delta = O.geo.delta;
  const double perimeter = static_cast<double>(O.boundary_cells()) * delta;
  // Length tolerance for k = 1; for k = 0 the variation is measured in full turns and one
  // corner (a quarter turn) is tolerated.
  const double tol = k == 1 ? 0.05 * perimeter + 8.0 * delta : 0.25;
  double worst = 0.0, worst_eps = 0.0;
  for (double e : eps) {
    const auto st = level_set_stats(F_field, e, 0.0, &collar);
    const auto sw = level_set_stats(F_field, e, 0.0, &wide);
    const double m1 = k == 1 ? st.length : st.variation;
    const double m2 = k == 1 ? sw.length : sw.variation;
    const double mass = std::max(0.0, 2.0 * m1 - m2);
    if (mass > worst) {
      worst = mass;
      worst_eps = e;
    }
  }
  rep.witness = {{"eps", worst_eps}, {"collar_mass", worst}, {"tolerance", tol}};
  rep.verdict = worst <= tol ? Verdict::pass : Verdict::fail;
  if (rep.verdict == Verdict::fail) rep.detail = "bd F_eps carries mass along bd O";
  return rep;
}

}  // namespace ftl
