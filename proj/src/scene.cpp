#include "ftl/scene.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "ftl/errors.hpp"

namespace ftl {

namespace {

using nlohmann::json;

double num(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

Vec2 vec(const json& j, int dim, const char* what) {
  if (j.is_number()) {
    if (dim != 1) throw ConfigError(std::string(what) + " must be a 2-vector");
    return {j.get<double>(), 0.0};
  }
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ConfigError(std::string(what) + " must have " + std::to_string(dim) + " components");
  for (const auto& v : j)
    if (!v.is_number()) throw ConfigError(std::string(what) + " components must be numbers");
  return {j[0].get<double>(), dim == 2 ? j[1].get<double>() : 0.0};
}

std::vector<Vec2> vertices(const json& j) {
  if (!j.is_array() || j.size() < 3) throw ConfigError("a polygon needs at least three vertices");
  std::vector<Vec2> out;
  for (const auto& v : j) out.push_back(vec(v, 2, "polygon vertex"));
  return out;
}

json map_json(double ratio, double rot_deg, bool reflect, std::vector<double> t) {
  json m = {{"ratio", ratio}, {"translation", t}};
  if (rot_deg != 0.0) m["rotation_deg"] = rot_deg;
  if (reflect) m["reflect"] = true;
  return m;
}

json box_region(std::vector<double> lo, std::vector<double> hi) {
  return {{"type", "box"}, {"lo", lo}, {"hi", hi}};
}

json polygon_region(std::vector<std::vector<double>> v) { return {{"type", "polygon"}, {"vertices", v}}; }

const std::map<std::string, std::string>& preset_descriptions() {
  static const std::map<std::string, std::string> d = {
      {"cantor", "middle-third Cantor set, O = (0, 1)"},
      {"cantor_skewed", "Cantor set with O = (0, 1.6) (feasible, projection condition fails)"},
      {"carpet", "Sierpinski carpet, O = open unit square (compatible tiling)"},
      {"carpet_Oprime", "Sierpinski carpet, O' = union of the tiles S_sigma S_1 G (feasible, not strong)"},
      {"koch", "Koch curve (two maps), O = interior of the convex hull"},
      {"koch_fattened", "Koch curve, O = union of tiles of a generator whose base is a Koch-type curve of dimension 1.668"},
      {"gasket", "Sierpinski gasket, O = open triangle"},
      {"ratios_half_quarter", "d = 1, ratios 1/2 and 1/4 (lattice), O = (0, 1)"},
      {"ratios_half_third", "d = 1, ratios 1/2 and 1/3 (nonlattice), O = (0, 1)"},
      {"interval_halves", "d = 1, two maps of ratio 1/2 tiling [0, 1] (full-dimensional)"},
  };
  return d;
}

}  // namespace

double default_delta(int dim) { return dim == 1 ? std::ldexp(1.0, -16) : std::ldexp(1.0, -11); }

Similarity parse_map(const json& j, int dim) {
  if (!j.is_object()) throw ConfigError("each map must be an object");
  Similarity s;
  s.ratio = num(j, "ratio");
  if (!(s.ratio > 0 && s.ratio < 1)) throw ConfigError("map ratio must lie in (0, 1)");
  const bool reflect = j.value("reflect", false);
  if (j.contains("matrix")) {
    const auto& m = j.at("matrix");
    if (dim != 2 || !m.is_array() || m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
      throw ConfigError("matrix must be 2x2 (d = 2 only)");
    s.Q = {m[0][0].get<double>(), m[0][1].get<double>(), m[1][0].get<double>(), m[1][1].get<double>()};
    if (reflect) throw ConfigError("give either matrix or reflect, not both");
  } else {
    const double rot = j.value("rotation_deg", 0.0);
    if (dim == 1) {
      if (rot != 0.0) throw ConfigError("rotation is not defined in d = 1");
      s.Q = reflect ? Mat2{-1, 0, 0, 1} : Mat2::identity();
    } else {
      const Mat2 R = Mat2::rotation(rot * M_PI / 180.0);
      s.Q = reflect ? R * Mat2{1, 0, 0, -1} : R;
    }
  }
  s.t = j.contains("translation") ? vec(j.at("translation"), dim, "translation") : Vec2{};
  if (!s.orthogonal(1e-9)) throw ConfigError("map matrix must be orthogonal");
  return s;
}

IFS parse_ifs(const json& maps, int dim) {
  if (!maps.is_array()) throw ConfigError("'maps' must be an array");
  IFS ifs;
  ifs.dim = dim;
  for (const auto& m : maps) ifs.maps.push_back(parse_map(m, dim));
  ifs.validate();
  return ifs;
}

RegionPtr build_region(const json& spec, const IFS& ifs, int dim, double delta) {
  if (!spec.is_object() || !spec.contains("type") || !spec.at("type").is_string())
    throw ConfigError("region must be an object with a 'type'");
  const std::string type = spec.at("type");
  if (type == "intervals") {
    if (dim != 1) throw ConfigError("intervals require d = 1");
    std::vector<std::pair<double, double>> iv;
    for (const auto& p : spec.at("intervals")) {
      if (!p.is_array() || p.size() != 2) throw ConfigError("interval must be [a, b]");
      iv.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return std::make_shared<IntervalUnion>(std::move(iv));
  }
  if (type == "box") {
    const Vec2 lo = vec(spec.at("lo"), dim, "box lo"), hi = vec(spec.at("hi"), dim, "box hi");
    if (!(lo.x < hi.x) || (dim == 2 && !(lo.y < hi.y))) throw ConfigError("box needs lo < hi");
    if (dim == 1) return std::make_shared<IntervalUnion>(std::vector<std::pair<double, double>>{{lo.x, hi.x}});
    return std::make_shared<PolygonUnion>(
        std::vector<std::vector<Vec2>>{{lo, {hi.x, lo.y}, hi, {lo.x, hi.y}}});
  }
  if (type == "polygon" || type == "polygons") {
    if (dim != 2) throw ConfigError("polygons require d = 2");
    std::vector<std::vector<Vec2>> polys;
    if (type == "polygon")
      polys.push_back(vertices(spec.at("vertices")));
    else
      for (const auto& p : spec.at("polygons")) polys.push_back(vertices(p));
    return std::make_shared<PolygonUnion>(std::move(polys));
  }
  if (type == "halfspaces") {
    if (dim != 2) throw ConfigError("half-spaces require d = 2");
    std::vector<HalfSpaces::HalfPlane> planes;
    for (const auto& p : spec.at("planes")) planes.push_back({vec(p.at("n"), 2, "normal"), num(p, "c")});
    const Vec2 lo = vec(spec.at("bounds").at("lo"), 2, "bounds"), hi = vec(spec.at("bounds").at("hi"), 2, "bounds");
    return std::make_shared<HalfSpaces>(std::move(planes), Box{lo, hi});
  }
  const double min_size = spec.value("min_size", delta / 4.0);
  if (type == "tile_union") {
    auto gen = build_region(spec.at("generator"), ifs, dim, delta);
    return std::make_shared<TileUnionRegion>(ifs, gen, min_size);
  }
  if (type == "koch_cut") {
    if (dim != 2) throw ConfigError("koch_cut requires d = 2");
    auto base = build_region(spec.at("base"), ifs, dim, delta);
    const double r = num(spec, "r");
    if (!(r > 0.5 && r < std::sqrt(0.5))) throw ConfigError("koch_cut ratio must lie in (1/2, 1/sqrt 2)");
    return std::make_shared<KochCutRegion>(base, vec(spec.at("a"), 2, "a"), vec(spec.at("b"), 2, "b"), r,
                                           min_size);
  }
  throw ConfigError("unknown region type '" + type + "'");
}

Scene parse_scene(const json& j) {
  try {
    if (!j.is_object()) throw ConfigError("scene must be a JSON object");
    Scene s;
    s.name = j.value("name", std::string("scene"));
    s.description = j.value("description", std::string());
    if (!j.contains("dim") || !j.at("dim").is_number_integer()) throw ConfigError("missing integer field 'dim'");
    const int dim = j.at("dim").get<int>();
    if (dim != 1 && dim != 2) throw ConfigError("dim must be 1 or 2");
    if (!j.contains("maps")) throw ConfigError("missing field 'maps'");
    s.ifs = parse_ifs(j.at("maps"), dim);
    if (!j.contains("region")) throw ConfigError("missing field 'region'");
    s.region = j.at("region");
    if (s.region.is_string()) {
      if (s.region.get<std::string>() != "central") throw ConfigError("region string must be 'central'");
    } else if (!s.region.is_object()) {
      throw ConfigError("region must be an object or 'central'");
    }
    s.delta = j.contains("delta") ? num(j, "delta") : default_delta(dim);
    if (!(s.delta > 0 && s.delta < 0.1)) throw ConfigError("delta must lie in (0, 0.1)");
    s.eps_per_decade = j.value("eps_per_decade", 64);
    if (s.eps_per_decade < 4 || s.eps_per_decade > 1024) throw ConfigError("eps_per_decade must lie in [4, 1024]");
    if (j.contains("methods")) s.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("k")) {
      const auto& k = j.at("k");
      s.curvature_k = k.is_array() ? k.get<std::vector<int>>() : std::vector<int>{k.get<int>()};
      for (int v : s.curvature_k)
        if (v < 0 || v > dim - 1) throw ConfigError("curvature index k must lie in 0..d-1");
    }
    s.output = j.value("output", std::string());
    if (j.contains("monophase")) {
      MonophaseData m;
      m.kappa = j.at("monophase").at("kappa").get<std::vector<double>>();
      m.g = num(j.at("monophase"), "g");
      s.monophase = m;
    }
    if (j.contains("pluriphase")) {
      PluriphaseData p;
      p.breakpoints = j.at("pluriphase").at("breakpoints").get<std::vector<double>>();
      p.kappa = j.at("pluriphase").at("kappa").get<std::vector<std::vector<double>>>();
      s.pluriphase = p;
    }
    if (j.contains("expected")) s.expected = j.at("expected");
    // Region schema errors surface at load time.
    if (s.region.is_object()) build_region(s.region, s.ifs, dim, s.delta);
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scene schema: ") + e.what());
  }
}

json scene_to_json(const Scene& s) {
  json j;
  j["name"] = s.name;
  if (!s.description.empty()) j["description"] = s.description;
  j["dim"] = s.ifs.dim;
  json maps = json::array();
  for (const auto& m : s.ifs.maps) {
    json e;
    e["ratio"] = m.ratio;
    if (s.ifs.dim == 2) {
      e["matrix"] = {{m.Q.a, m.Q.b}, {m.Q.c, m.Q.d}};
      e["translation"] = {m.t.x, m.t.y};
    } else {
      if (m.Q.a < 0) e["reflect"] = true;
      e["translation"] = {m.t.x};
    }
    maps.push_back(e);
  }
  j["maps"] = maps;
  j["region"] = s.region;
  j["delta"] = s.delta;
  j["eps_per_decade"] = s.eps_per_decade;
  if (!s.methods.empty()) j["methods"] = s.methods;
  if (!s.curvature_k.empty()) j["k"] = s.curvature_k;
  if (s.monophase) j["monophase"] = {{"kappa", s.monophase->kappa}, {"g", s.monophase->g}};
  if (s.pluriphase) j["pluriphase"] = {{"breakpoints", s.pluriphase->breakpoints}, {"kappa", s.pluriphase->kappa}};
  if (!s.expected.is_null()) j["expected"] = s.expected;
  return j;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : preset_descriptions()) out.push_back(k);
  return out;
}

json preset_json(const std::string& name) {
  const auto& desc = preset_descriptions();
  if (!desc.count(name)) throw ConfigError("unknown preset '" + name + "'");
  json j;
  j["name"] = name;
  j["description"] = desc.at(name);
  const double third = 1.0 / 3.0;
  const double ln2 = std::log(2.0), ln3 = std::log(3.0);
  if (name == "cantor" || name == "cantor_skewed") {
    j["dim"] = 1;
    j["maps"] = {map_json(third, 0, false, {0.0}), map_json(third, 0, false, {2.0 / 3.0})};
    if (name == "cantor") {
      j["region"] = {{"type", "intervals"}, {"intervals", {{0.0, 1.0}}}};
      const double D = ln2 / ln3;
      const double closed = (1.0 / ln3) * ((2.0 / D) * std::pow(6.0, -D) + std::pow(6.0, 1.0 - D) / (3.0 * (1.0 - D)));
      j["monophase"] = {{"kappa", {2.0}}, {"g", 1.0 / 6.0}};
      j["expected"] = {
          {{"quantity", "D"}, {"value", D}, {"tolerance", 1e-10}, {"tag", "TRIVIAL"}},
          {{"quantity", "eta"}, {"value", ln3}, {"tolerance", 1e-10}, {"tag", "TRIVIAL"}},
          {{"quantity", "generator_integral"}, {"value", closed}, {"tolerance", 0.005}, {"tag", "DERIVED"},
           {"oracle", "antiderivative of 2 eps^{D-2} on (0, 1/6] plus closed tail"}}};
    } else {
      j["region"] = {{"type", "intervals"}, {"intervals", {{0.0, 1.6}}}};
      j["expected"] = {{{"quantity", "projection"}, {"value", "fail"}, {"tag", "DERIVED"},
                        {"oracle", "defect of S_1 O on eps in (0.133, 0.2]"}}};
    }
    return j;
  }
  if (name == "carpet" || name == "carpet_Oprime") {
    j["dim"] = 2;
    json maps = json::array();
    for (int b = 0; b < 3; ++b)
      for (int a = 0; a < 3; ++a)
        if (!(a == 1 && b == 1)) maps.push_back(map_json(third, 0, false, {a * third, b * third}));
    j["maps"] = maps;
    const double D = std::log(8.0) / ln3;
    if (name == "carpet") {
      j["region"] = box_region({0.0, 0.0}, {1.0, 1.0});
      j["monophase"] = {{"kappa", {-4.0, 4.0 / 3.0}}, {"g", 1.0 / 6.0}};
      j["expected"] = {
          {{"quantity", "D"}, {"value", D}, {"tolerance", 1e-10}, {"tag", "TRIVIAL"}},
          {{"quantity", "eta"}, {"value", ln3}, {"tolerance", 1e-10}, {"tag", "TRIVIAL"}},
          {{"quantity", "checks"}, {"value", "osc, strong, compatible, projection pass"}, {"tag", "PAPER"}}};
    } else {
      j["region"] = {{"type", "tile_union"}, {"generator", box_region({1.0 / 9, 1.0 / 9}, {2.0 / 9, 2.0 / 9})}};
      j["expected"] = {
          {{"quantity", "content_ratio_to_carpet"}, {"value", 3.0 / 8.0}, {"tolerance", 0.01}, {"tag", "PAPER"}},
          {{"quantity", "strong"}, {"value", "fail"}, {"tag", "PAPER"}}};
    }
    return j;
  }
  if (name == "koch" || name == "koch_fattened") {
    j["dim"] = 2;
    const double r = 1.0 / std::sqrt(3.0);
    const double h = std::sqrt(3.0) / 6.0;
    j["maps"] = {map_json(r, 30.0, true, {0.0, 0.0}), map_json(r, -30.0, true, {0.5, h})};
    if (name == "koch") {
      j["region"] = polygon_region({{0.0, 0.0}, {1.0, 0.0}, {0.5, h}});
      j["expected"] = {
          {{"quantity", "D"}, {"value", 2.0 * ln2 / ln3}, {"tolerance", 1e-10}, {"tag", "TRIVIAL"}},
          {{"quantity", "compatible"}, {"value", "fail"}, {"tag", "PAPER"}}};
    } else {
      const json triangle = polygon_region({{third, 0.0}, {2.0 / 3.0, 0.0}, {0.5, h}});
      const json cut = {{"type", "koch_cut"}, {"base", triangle}, {"a", {third, 0.0}}, {"b", {2.0 / 3.0, 0.0}},
                        {"r", 0.66}};
      j["region"] = {{"type", "tile_union"}, {"generator", cut}};
      j["expected"] = {{{"quantity", "generator_integral"}, {"value", "refused (exponent)"}, {"tag", "DERIVED"},
                        {"oracle", "boundary dimension ln 2 / ln(1/0.66) = 1.668 > D"}}};
    }
    return j;
  }
  if (name == "gasket") {
    j["dim"] = 2;
    const double s3 = std::sqrt(3.0);
    j["maps"] = {map_json(0.5, 0, false, {0.0, 0.0}), map_json(0.5, 0, false, {0.5, 0.0}),
                 map_json(0.5, 0, false, {0.25, s3 / 4.0})};
    j["region"] = polygon_region({{0.0, 0.0}, {1.0, 0.0}, {0.5, s3 / 2.0}});
    j["expected"] = {{{"quantity", "D"}, {"value", ln3 / ln2}, {"tolerance", 1e-10}, {"tag", "TRIVIAL"}}};
    return j;
  }
  j["dim"] = 1;
  j["region"] = {{"type", "intervals"}, {"intervals", {{0.0, 1.0}}}};
  if (name == "ratios_half_quarter") {
    j["maps"] = {map_json(0.5, 0, false, {0.0}), map_json(0.25, 0, false, {0.75})};
    j["expected"] = {{{"quantity", "lattice"}, {"value", true}, {"base", ln2}, {"tag", "TRIVIAL"}}};
  } else if (name == "ratios_half_third") {
    j["maps"] = {map_json(0.5, 0, false, {0.0}), map_json(third, 0, false, {2.0 / 3.0})};
    j["expected"] = {{{"quantity", "lattice"}, {"value", false}, {"tag", "TRIVIAL"}}};
  } else {
    j["maps"] = {map_json(0.5, 0, false, {0.0}), map_json(0.5, 0, false, {0.5})};
    j["expected"] = {{{"quantity", "D"}, {"value", 1.0}, {"tag", "TRIVIAL"}}};
  }
  return j;
}

Scene load_scene(const std::string& path_or_preset) {
  const auto& desc = preset_descriptions();
  if (desc.count(path_or_preset) && !std::filesystem::is_regular_file(path_or_preset))
    return parse_scene(preset_json(path_or_preset));
  if (!std::filesystem::is_regular_file(path_or_preset))
    throw ConfigError("scene file '" + path_or_preset + "' not found");
  std::ifstream in(path_or_preset);
  if (!in) throw ConfigError("cannot open scene file '" + path_or_preset + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scene file is not valid JSON: ") + e.what());
  }
  return parse_scene(j);
}

}  // namespace ftl
