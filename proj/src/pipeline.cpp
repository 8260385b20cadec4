#include "ftl/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "ftl/errors.hpp"
#include "ftl/level_set.hpp"

namespace ftl {

namespace {

using nlohmann::json;

constexpr int kNeighborCap = 6;

bool fails(const CheckReport& r) { return r.verdict == Verdict::fail; }

MethodRow refused(const std::string& method, const PreconditionError& e) {
  MethodRow row;
  row.method = method;
  row.status = "refused";
  row.failed_condition = e.condition();
  row.reason = e.what();
  return row;
}

}  // namespace

json to_json(const MethodRow& r) {
  json j;
  j["method"] = r.method;
  j["status"] = r.status;
  if (r.result) j["result"] = to_json(*r.result);
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (!r.failed_condition.empty()) j["failed_condition"] = r.failed_condition;
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  j["checks"] = checks;
  return j;
}

json agreement_flags(const std::vector<MethodRow>& rows, double rel_tol) {
  json out = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].status != "ok" || !rows[i].result) continue;
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      if (rows[j].status != "ok" || !rows[j].result) continue;
      const auto& a = *rows[i].result;
      const auto& b = *rows[j].result;
      const double scale = std::max(std::abs(a.value), std::abs(b.value));
      const double diff = std::abs(a.value - b.value);
      json f;
      f["a"] = rows[i].method;
      f["b"] = rows[j].method;
      f["rel_diff"] = scale > 0 ? diff / scale : 0.0;
      f["agree"] = diff <= a.error_estimate + b.error_estimate + rel_tol * scale;
      out.push_back(f);
    }
  }
  return out;
}

const std::vector<std::string>& Pipeline::content_methods() {
  static const std::vector<std::string> m = {"generator_integral", "tiling_via_h",     "monophase",
                                             "pluriphase",         "gatzouras",        "relative_generator",
                                             "s_content",          "direct_limit",     "direct_average"};
  return m;
}

Pipeline::Pipeline(Scene scene, PipelineOptions opt)
    : scene_(std::move(scene)), opt_(opt), delta_(opt.delta.value_or(scene_.delta)),
      per_decade_(opt.eps_per_decade.value_or(scene_.eps_per_decade)), dims_(dimension_data(scene_.ifs)) {
  if (!(delta_ > 0 && delta_ < 0.1)) throw ConfigError("delta must lie in (0, 0.1)");
  if (per_decade_ < 4) throw ConfigError("eps-per-decade must be at least 4");
}

std::optional<double> Pipeline::lattice_base() const {
  return dims_.lattice.lattice ? dims_.lattice.base : std::nullopt;
}

bool Pipeline::full_dimensional() const { return dims_.D >= scene_.ifs.dim - 1e-9; }

const RegionPtr& Pipeline::region() {
  if (region_) return region_;
  if (scene_.region.is_string()) {
    // Central open set on a grid around the attractor.
    const Box fb = attractor_bbox(scene_.ifs);
    const double pad = 0.1 * std::max(fb.diameter(), 1e-3);
    const auto geo = GridGeometry::covering(fb, delta_, scene_.ifs.dim, pad);
    auto vc = central_open_set(scene_.ifs, geo, kNeighborCap);
    region_ = std::make_shared<GridRegion>(std::move(vc.Vc));
  } else {
    region_ = build_region(scene_.region, scene_.ifs, scene_.ifs.dim, delta_);
  }
  return region_;
}

const TilingData& Pipeline::tiling() {
  if (!tiling_) {
    const auto& O = region();
    const auto geo = region_geometry(*O, delta_, 8.0 * delta_);
    tiling_ = build_tiling(scene_.ifs, O, geo, opt_.tiling);
  }
  return *tiling_;
}

const DistanceField& Pipeline::F_field() {
  if (!F_field_) F_field_ = distance_transform(attractor_raster(scene_.ifs, tiling().geo));
  return *F_field_;
}

double Pipeline::g_tilde() {
  if (!g_tilde_) g_tilde_ = relative_inradius(F_field(), tiling().O_grid);
  return *g_tilde_;
}

std::vector<double> Pipeline::eps_to(double upper) {
  const double lo = opt_.eps_lower_cells * delta_;
  if (!(upper > lo * 1.5))
    throw ResolutionError("upper eps limit " + std::to_string(upper) + " is not resolved at delta " +
                          std::to_string(delta_));
  std::vector<double> extra;
  for (double r : scene_.ifs.ratios()) extra.push_back(r * upper);
  return eps_grid(lo, upper, per_decade_, lattice_base(), extra);
}

std::pair<double, double> Pipeline::direct_window() {
  const double lo = opt_.eps_lower_cells * delta_;
  const double span = opt_.window_decades * std::log(10.0);
  if (auto b = lattice_base()) {
    const double periods = std::ceil(span / *b - 1e-9);
    return {lo, lo * std::exp(periods * *b)};
  }
  return {lo, lo * std::exp(span)};
}

VolumeSamples Pipeline::remember(const std::string& key, VolumeSamples s) {
  volume_cache_[key] = s;
  return s;
}

CurvatureSamples Pipeline::remember(const std::string& key, CurvatureSamples s) {
  curvature_cache_[key] = s;
  return s;
}

VolumeSamples Pipeline::V_G() {
  if (auto it = volume_cache_.find("V_G"); it != volume_cache_.end()) return it->second;
  const auto& t = tiling();
  const auto cd = complement_distance(t.G);
  // Mean offset of the exact boundary of G from the raster boundary: distances are shifted by
  // it and the sliver offset * H^{d-1}(bd G) is added, so V(G, eps) tends to the exact measure.
  double offset = 0.0, perimeter = 0.0;
  if (t.lambda_G_exact) {
    const auto st = level_set_stats(cd, 0.0, 0.5);
    perimeter = scene_.ifs.dim == 1 ? 2.0 * std::abs(st.turning) : st.length;
    if (perimeter > 0)
      offset = std::clamp((*t.lambda_G_exact - t.lambda_G) / perimeter, -0.5 * delta_, 0.5 * delta_);
  }
  const VolumeTable table(cd, &t.G, 0.5 - offset / delta_);
  auto s = sample_table(table, eps_to(t.g + offset), VolumeKind::V_G, "G");
  for (auto& v : s.values) v += offset * perimeter;
  return remember("V_G", std::move(s));
}

VolumeSamples Pipeline::V_T() {
  if (auto it = volume_cache_.find("V_T"); it != volume_cache_.end()) return it->second;
  const auto& t = tiling();
  auto s = sample_table(T_table(), eps_to(t.g), VolumeKind::V_T, "T");
  return remember("V_T", std::move(s));
}

VolumeSamples Pipeline::h() {
  if (auto it = volume_cache_.find("h"); it != volume_cache_.end()) return it->second;
  const auto& t = tiling();
  auto s = h_function(T_table(), scene_.ifs, t.g, eps_to(t.g));
  return remember("h", std::move(s));
}

const VolumeTable& Pipeline::T_table() {
  if (!T_table_) {
    const auto& t = tiling();
    T_table_ = VolumeTable(tile_inner_distance(t), &t.T, 0.5, t.residual_cells);
  }
  return *T_table_;
}

const VolumeTable& Pipeline::F_on_O_table() {
  if (!F_on_O_table_) F_on_O_table_ = restricted_volume_table(F_field(), &tiling().O_grid);
  return *F_on_O_table_;
}

VolumeSamples Pipeline::F_on_O() {
  if (auto it = volume_cache_.find("F_on_O"); it != volume_cache_.end()) return it->second;
  auto s = sample_table(F_on_O_table(), eps_to(g_tilde()), VolumeKind::F_eps_on_A, "O");
  return remember("F_on_O", std::move(s));
}

VolumeSamples Pipeline::phi() {
  if (auto it = volume_cache_.find("phi"); it != volume_cache_.end()) return it->second;
  auto s = phi_function(F_on_O_table(), scene_.ifs, g_tilde(), eps_to(g_tilde()));
  return remember("phi", std::move(s));
}

VolumeSamples Pipeline::F_on_Gamma() {
  if (auto it = volume_cache_.find("F_on_Gamma"); it != volume_cache_.end()) return it->second;
  const auto table = restricted_volume_table(F_field(), &tiling().Gamma);
  auto s = sample_table(table, eps_to(g_tilde()), VolumeKind::F_eps_on_A, "Gamma");
  return remember("F_on_Gamma", std::move(s));
}

VolumeSamples Pipeline::boundary_in_G() {
  if (auto it = volume_cache_.find("boundary_in_G"); it != volume_cache_.end()) return it->second;
  const auto c = relative_curvature(1);
  VolumeSamples s;
  s.kind = VolumeKind::F_eps_on_A;
  s.dim = c.dim;
  s.eps = c.eps;
  s.delta = c.delta;
  s.region_tag = "bdF_eps_in_G";
  for (double v : c.values) s.values.push_back(2.0 * v);
  s.tol.assign(s.eps.size(), 0.0);
  return remember("boundary_in_G", std::move(s));
}

const DistanceField& Pipeline::plane_field() {
  if (plane_field_) return *plane_field_;
  const Box fb = attractor_bbox(scene_.ifs);
  const double diam = std::max(fb.diameter(), 1e-3);
  plane_pad_ = std::min(0.25 * diam, 1.05);
  const auto geo = GridGeometry::covering(fb, delta_, scene_.ifs.dim, plane_pad_);
  plane_field_ = distance_transform(attractor_raster(scene_.ifs, geo));
  return *plane_field_;
}

bool Pipeline::direct_on_closure() { return check("compatible").passed(); }

VolumeSamples Pipeline::direct_samples() {
  if (auto it = volume_cache_.find("direct"); it != volume_cache_.end()) return it->second;
  const auto [lo, hi] = direct_window();
  const auto eps = eps_grid(lo, hi, per_decade_, lattice_base());
  VolumeSamples s;
  if (direct_on_closure()) {
    s = sample_table(restricted_volume_table(F_field(), &tiling().K), eps, VolumeKind::F_eps_on_A, "K");
  } else {
    const auto& f = plane_field();
    if (hi > plane_pad_)
      throw ResolutionError("direct window reaches beyond the padded raster of F");
    s = sample_table(VolumeTable(f, nullptr), eps, VolumeKind::F_eps, "plane");
  }
  return remember("direct", std::move(s));
}

const ParallelVolume& Pipeline::plane_volume() {
  if (plane_) return *plane_;
  const int d = scene_.ifs.dim;
  const Box fb = attractor_bbox(scene_.ifs);
  // Fine raster for small eps, coarse raster (4 delta) covering eps up to 1.
  VolumeTable fine(plane_field(), nullptr);
  std::optional<VolumeTable> coarse;
  double coarse_limit = 0.0;
  if (plane_pad_ < 1.0) {
    const double dc = 4.0 * delta_;
    coarse_limit = 1.05;
    const auto geo_c = GridGeometry::covering(fb, dc, d, coarse_limit + dc);
    coarse.emplace(distance_transform(attractor_raster(scene_.ifs, geo_c)), nullptr);
  }
  plane_ = ParallelVolume(std::move(fine), plane_pad_, std::move(coarse), coarse_limit);
  return *plane_;
}

VolumeSamples Pipeline::R_d() {
  if (auto it = volume_cache_.find("R_d"); it != volume_cache_.end()) return it->second;
  auto s = gatzouras_Rd(plane_volume(), scene_.ifs, eps_to(1.0));
  return remember("R_d", std::move(s));
}

namespace {

// Curvatures jump to zero where the parallel set is exhausted; the sample at the upper end of
// the integration range takes the left limit (a quarter cell below it).
CurvatureSamples sample_to_left_end(const DistanceField& f, double shift, int k, std::vector<double> eps,
                                    const Grid* mask, const std::string& tag) {
  const double upper = eps.back();
  const double below = upper - 0.25 * f.geo.delta;
  if (eps.size() < 2 || below > eps[eps.size() - 2]) eps.back() = below;
  auto s = sample_curvature(f, shift, k, eps, mask, tag);
  s.eps.back() = upper;
  return s;
}

}  // namespace

CurvatureSamples Pipeline::inner_curvature(int k) {
  const std::string key = "inner_C" + std::to_string(k);
  if (auto it = curvature_cache_.find(key); it != curvature_cache_.end()) return it->second;
  const auto& t = tiling();
  auto s = sample_to_left_end(complement_distance(t.G), 0.5, k, eps_to(t.g), nullptr, "G_inner");
  return remember(key, std::move(s));
}

CurvatureSamples Pipeline::relative_curvature(int k) {
  const std::string key = "relative_C" + std::to_string(k);
  if (auto it = curvature_cache_.find(key); it != curvature_cache_.end()) return it->second;
  auto s = sample_to_left_end(F_field(), 0.0, k, eps_to(g_tilde()), &tiling().G, "G");
  return remember(key, std::move(s));
}

CurvatureSamples Pipeline::direct_curvature(int k) {
  const std::string key = "direct_C" + std::to_string(k);
  if (auto it = curvature_cache_.find(key); it != curvature_cache_.end()) return it->second;
  const auto [lo, hi] = direct_window();
  const auto eps = eps_grid(lo, hi, per_decade_, lattice_base());
  CurvatureSamples s;
  if (direct_on_closure())
    s = sample_curvature(F_field(), 0.0, k, eps, &tiling().K, "K");
  else
    s = sample_curvature(plane_field(), 0.0, k, eps, nullptr, "plane");
  return remember(key, std::move(s));
}

const CheckReport& Pipeline::check(const std::string& name, int k) {
  const int d = scene_.ifs.dim;
  if (k < 0) k = d - 1;
  const std::string key = name == "boundary_null" ? name + "_k" + std::to_string(k) : name;
  if (auto it = checks_.find(key); it != checks_.end()) return it->second;
  CheckReport rep;
  if (name == "osc") {
    rep = check_osc(scene_.ifs, *region(), tiling().geo);
  } else if (name == "strong") {
    rep = check_strong(tiling().O_grid, F_field());
  } else if (name == "compatible") {
    rep = check_compatibility(tiling().G, F_field(), 2);
  } else if (name == "projection") {
    rep = check_projection(scene_.ifs, *region(), F_field(), eps_to(g_tilde()), g_tilde());
  } else if (name == "boundary_null") {
    rep = check_boundary_null(tiling().O_grid, F_field(), k, eps_to(g_tilde()));
  } else {
    throw ConfigError("unknown check '" + name + "'");
  }
  return checks_[key] = rep;
}

std::vector<CheckReport> Pipeline::all_checks() {
  std::vector<CheckReport> out;
  for (const char* n : {"osc", "strong", "compatible", "projection"}) out.push_back(check(n));
  for (int k = 0; k < scene_.ifs.dim; ++k) {
    auto r = check("boundary_null", k);
    r.name += "_k" + std::to_string(k);
    out.push_back(r);
  }
  return out;
}

MethodRow Pipeline::content_row(const std::string& method) {
  const int d = scene_.ifs.dim;
  const double D = dims_.D, eta = dims_.eta;
  MethodRow row;
  row.method = method;
  try {
    if (method == "generator_integral" || method == "tiling_via_h" || method == "monophase" ||
        method == "pluriphase") {
      row.checks.push_back(check("osc"));
      if (fails(row.checks.back())) {
        row.status = "refused";
        row.failed_condition = "osc";
        row.reason = "O violates the open set condition at this resolution";
        return row;
      }
      const auto& t = tiling();
      if (method == "generator_integral") {
        const auto vg = V_G();
        row.result = generator_content(vg, D, eta, d, vg.eps.back());
      } else if (method == "tiling_via_h") {
        row.result = tiling_content_via_h(h(), D, eta, d, t.g);
      } else if (method == "monophase") {
        if (!scene_.monophase) {
          row.status = "not_applicable";
          row.reason = "scene provides no monophase coefficients";
          return row;
        }
        row.result = monophase_content(*scene_.monophase, D, eta, d);
      } else {
        if (!scene_.pluriphase) {
          row.status = "not_applicable";
          row.reason = "scene provides no pluriphase coefficients";
          return row;
        }
        row.result = pluriphase_content(*scene_.pluriphase, D, eta, d);
      }
      row.checks.push_back(check("compatible"));
      if (fails(row.checks.back())) {
        row.status = "not_applicable";
        row.reason = "no compatible tiling: the value is the tiling content, not the content of F";
      }
    } else if (method == "gatzouras") {
      row.result = gatzouras_content(R_d(), D, eta, d);
    } else if (method == "relative_generator" || method == "s_content") {
      if (method == "s_content" && d != 2) {
        row.status = "not_applicable";
        row.reason = "S-content formula needs d = 2";
        return row;
      }
      std::vector<std::string> needed = {"strong", "projection"};
      if (method == "s_content") needed.push_back("boundary_null");
      for (const auto& n : needed) {
        row.checks.push_back(check(n, 1));
        if (fails(row.checks.back())) {
          row.status = "refused";
          row.failed_condition = n;
          row.reason = n + " check failed: " + row.checks.back().detail;
          return row;
        }
      }
      if (method == "relative_generator")
        row.result = relative_generator_content(F_on_Gamma(), D, eta, d, g_tilde(), tiling().lambda_Gamma);
      else
        row.result = s_content(boundary_in_G(), D, eta, d, g_tilde());
    } else {
      throw ConfigError("unknown content method '" + method + "'");
    }
  } catch (const PreconditionError& e) {
    auto r = refused(method, e);
    r.checks = row.checks;
    return r;
  }
  if (row.result) {
    row.result->lattice_note = dims_.lattice.note();
    for (const auto& c : row.checks)
      if (c.passed()) row.result->checks_passed.push_back(c.name);
  }
  return row;
}

std::vector<MethodRow> Pipeline::direct_rows() {
  auto [lim, avg] = direct_content(direct_samples(), dims_.D, scene_.ifs.dim, lattice_base(), 0.0);
  std::vector<MethodRow> rows(2);
  rows[0].method = "direct_limit";
  rows[0].result = lim;
  rows[1].method = "direct_average";
  rows[1].result = avg;
  for (auto& r : rows) r.result->lattice_note = dims_.lattice.note();
  return rows;
}

std::vector<MethodRow> Pipeline::contents(const std::vector<std::string>& methods_in) {
  std::vector<std::string> methods = methods_in;
  if (methods.empty() || (methods.size() == 1 && methods[0] == "all")) methods = content_methods();
  for (const auto& m : methods)
    if (std::find(content_methods().begin(), content_methods().end(), m) == content_methods().end())
      throw ConfigError("unknown content method '" + m + "'");
  std::vector<MethodRow> rows;
  if (full_dimensional()) {
    const auto& O = region();
    const auto geo = region_geometry(*O, delta_, 2.0 * delta_);
    MethodRow row;
    row.method = "full_dimensional";
    row.result = full_dimensional_content(O->rasterize(geo).measure(), scene_.ifs.dim, delta_);
    row.result->lattice_note = dims_.lattice.note();
    rows.push_back(row);
    return rows;
  }
  bool direct_done = false;
  for (const auto& m : methods) {
    if (m == "direct_limit" || m == "direct_average") {
      if (direct_done) continue;
      direct_done = true;
      for (auto& r : direct_rows())
        if (std::find(methods.begin(), methods.end(), r.method) != methods.end()) rows.push_back(r);
      continue;
    }
    rows.push_back(content_row(m));
  }
  return rows;
}

std::vector<MethodRow> Pipeline::curvatures(const std::vector<int>& ks_in) {
  const int d = scene_.ifs.dim;
  std::vector<int> ks = ks_in;
  if (ks.empty())
    for (int k = 0; k < d; ++k) ks.push_back(k);
  std::vector<MethodRow> rows;
  if (full_dimensional()) {
    MethodRow row;
    row.method = "curvature";
    row.status = "not_applicable";
    row.reason = "full-dimensional attractor has no generator";
    rows.push_back(row);
    return rows;
  }
  for (int k : ks) {
    if (k < 0 || k > d - 1) throw ConfigError("curvature index k must lie in 0..d-1");
    const std::string suffix = "_k" + std::to_string(k);
    {
      MethodRow row;
      row.method = "generator_curvature" + suffix;
      try {
        row.checks.push_back(check("osc"));
        if (fails(row.checks.back())) {
          row.status = "refused";
          row.failed_condition = "osc";
          row.reason = "O violates the open set condition at this resolution";
        } else {
          row.result = generator_curvature(inner_curvature(k), dims_.D, dims_.eta, k, tiling().g);
          row.checks.push_back(check("compatible"));
          if (fails(row.checks.back())) {
            row.status = "not_applicable";
            row.reason = "no compatible tiling: the value is the tiling curvature, not that of F";
          }
        }
      } catch (const PreconditionError& e) {
        auto r = refused(row.method, e);
        r.checks = row.checks;
        row = r;
      }
      rows.push_back(row);
    }
    {
      MethodRow row;
      row.method = "relative_generator_curvature" + suffix;
      try {
        for (const char* n : {"strong", "projection", "boundary_null"}) {
          row.checks.push_back(check(n, k));
          if (fails(row.checks.back())) {
            row.status = "refused";
            row.failed_condition = n;
            row.reason = std::string(n) + " check failed: " + row.checks.back().detail;
            break;
          }
        }
        if (row.status == "ok") {
          const auto s = relative_curvature(k);
          const auto cbc = cbc_exponent_check(s, dims_.D, k);
          row.result = relative_generator_curvature(s, dims_.D, dims_.eta, k, g_tilde());
          row.result->flags.push_back("variation exponent gamma = " + std::to_string(cbc.gamma));
        }
      } catch (const PreconditionError& e) {
        auto r = refused(row.method, e);
        r.checks = row.checks;
        row = r;
      }
      rows.push_back(row);
    }
    auto [lim, avg] = direct_fractal_curvature(direct_curvature(k), dims_.D, k, lattice_base(), 0.0);
    MethodRow a, b;
    a.method = lim.method + suffix;
    a.result = lim;
    b.method = avg.method + suffix;
    b.result = avg;
    rows.push_back(a);
    rows.push_back(b);
  }
  for (auto& r : rows)
    if (r.result) {
      r.result->lattice_note = dims_.lattice.note();
      for (const auto& c : r.checks)
        if (c.passed()) r.result->checks_passed.push_back(c.name);
    }
  return rows;
}

json Pipeline::dim_report() const {
  json j;
  j["scene"] = scene_.name;
  j["dim"] = scene_.ifs.dim;
  j["maps"] = scene_.ifs.size();
  j["ratios"] = scene_.ifs.ratios();
  j["D"] = dims_.D;
  j["eta"] = dims_.eta;
  j["lattice"] = dims_.lattice.lattice;
  if (dims_.lattice.base) j["lattice_base"] = *dims_.lattice.base;
  j["lattice_note"] = dims_.lattice.note();
  j["full_dimensional"] = full_dimensional();
  return j;
}

json Pipeline::tiling_report() {
  const auto& t = tiling();
  json j;
  j["delta"] = delta_;
  j["g"] = t.g;
  j["g_tilde"] = g_tilde();
  j["lambda_O"] = t.lambda_O;
  j["lambda_G"] = t.lambda_G;
  j["lambda_Gamma"] = t.lambda_Gamma;
  j["tile_count"] = t.tile_count;
  j["residual_volume"] = t.residual_volume;
  j["generator_exact"] = t.generator_exact;
  return j;
}

void Pipeline::render(const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto& t = tiling();
  export_tiling(t, dir);
  write_pgm(t.O_grid, dir + "/O.pgm");
  const auto& F = F_field();
  Grid Fr(F.geo);
  for (std::size_t i = 0; i < F.sq.size(); ++i) Fr.occ[i] = F.sq[i] == 0;
  write_pgm(Fr, dir + "/F.pgm");
  const double gt = g_tilde();
  int n = 0;
  for (double e : {gt / 8.0, gt / 4.0, gt / 2.0}) {
    Grid Fe(F.geo);
    const auto thr = sq_threshold(e / delta_, 0.0);
    for (std::size_t i = 0; i < F.sq.size(); ++i) Fe.occ[i] = F.sq[i] <= thr;
    write_pgm(Fe, dir + "/F_eps" + std::to_string(++n) + ".pgm");
  }
  json meta = tiling_report();
  meta["F_eps_values"] = {gt / 8.0, gt / 4.0, gt / 2.0};
  std::ofstream(dir + "/render.json") << meta.dump(2) << '\n';
}

void Pipeline::export_samples(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  for (const auto& [k, s] : volume_cache_) write_csv(s, dir + "/" + k + ".csv");
  for (const auto& [k, s] : curvature_cache_) write_csv(s, dir + "/" + k + ".csv");
}

}  // namespace ftl
