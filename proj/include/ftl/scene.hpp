#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ftl/contents.hpp"
#include "ftl/ifs.hpp"
#include "ftl/region.hpp"

namespace ftl {

/// Parsed scene configuration.
struct Scene {
  std::string name;
  IFS ifs;
  /// Region specification as given (object, or the string "central").
  nlohmann::json region;
  double delta = 0.0;
  int eps_per_decade = 64;
  std::vector<std::string> methods;  ///< empty: all applicable
  std::vector<int> curvature_k;      ///< empty: all k in 0..d-1
  std::string output;
  std::optional<MonophaseData> monophase;
  std::optional<PluriphaseData> pluriphase;
  /// Expected values with provenance tags (presets only).
  nlohmann::json expected;
  std::string description;
};

/// Default resolution: 2^-16 in d = 1, 2^-11 in d = 2.
double default_delta(int dim);

/// Parses a scene object. Throws ConfigError on schema violations.
Scene parse_scene(const nlohmann::json& j);
nlohmann::json scene_to_json(const Scene& s);

/// Loads a scene from a JSON file, or a preset when the argument names one.
Scene load_scene(const std::string& path_or_preset);

std::vector<std::string> preset_names();
/// Preset scene JSON. Throws ConfigError for unknown names.
nlohmann::json preset_json(const std::string& name);

/// Parses a similarity from its JSON form ({ratio, rotation_deg | matrix, reflect, translation}).
Similarity parse_map(const nlohmann::json& j, int dim);
IFS parse_ifs(const nlohmann::json& maps, int dim);

/// Builds an exact region from its JSON form. "central" is not handled here (it needs a
/// raster; see Pipeline). min_size defaults to delta / 4 for recursive regions.
RegionPtr build_region(const nlohmann::json& spec, const IFS& ifs, int dim, double delta);

}  // namespace ftl
