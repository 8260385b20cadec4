#pragma once

#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ftl/conditions.hpp"
#include "ftl/contents.hpp"
#include "ftl/curvatures.hpp"
#include "ftl/scene.hpp"
#include "ftl/tiling.hpp"
#include "ftl/volume.hpp"

namespace ftl {

struct PipelineOptions {
  std::optional<double> delta;
  std::optional<int> eps_per_decade;
  /// Lower end of every eps grid in cells.
  double eps_lower_cells = 4.0;
  /// Width of the direct-estimate window in decades (rounded up to whole lattice periods).
  double window_decades = 1.5;
  TilingOptions tiling;
};

/// One row of a comparison table.
struct MethodRow {
  std::string method;
  std::string status = "ok";  ///< ok, refused, not_applicable
  std::optional<ContentResult> result;
  std::string reason;
  std::string failed_condition;
  std::vector<CheckReport> checks;
};

nlohmann::json to_json(const MethodRow& r);

/// Pairwise agreement of the ok rows: |a - b| <= err_a + err_b + rel_tol * max(|a|, |b|).
/// Returns objects {a, b, rel_diff, agree}.
nlohmann::json agreement_flags(const std::vector<MethodRow>& rows, double rel_tol = 0.03);

/// Lazily computed rasters, samples, checks and formula results for one scene.
class Pipeline {
 public:
  explicit Pipeline(Scene scene, PipelineOptions opt = {});

  const Scene& scene() const { return scene_; }
  double delta() const { return delta_; }
  int per_decade() const { return per_decade_; }
  const DimensionData& dimension() const { return dims_; }
  std::optional<double> lattice_base() const;
  bool full_dimensional() const;

  const RegionPtr& region();
  const TilingData& tiling();
  const DistanceField& F_field();
  double g_tilde();

  /// Geometric grid [eps_lower, upper] aligned to the lattice base, with r_i * upper added.
  std::vector<double> eps_to(double upper);
  std::pair<double, double> direct_window();

  VolumeSamples V_G();
  VolumeSamples V_T();
  VolumeSamples h();
  VolumeSamples F_on_O();
  VolumeSamples phi();
  VolumeSamples F_on_Gamma();
  /// H^1(bd F_eps cap G) on the grid up to g~.
  VolumeSamples boundary_in_G();
  /// Distance to F on a raster padded by a quarter of diam F (direct estimates without a mask).
  const DistanceField& plane_field();
  /// Direct estimates use A = cl O when the tiling is compatible (then lambda(F_eps cap cl O) =
  /// V(T, eps) and the rest of F_eps is a smooth band along bd O), otherwise the whole plane.
  bool direct_on_closure();
  /// lambda(F_eps cap A) over the direct window.
  VolumeSamples direct_samples();
  const ParallelVolume& plane_volume();
  VolumeSamples R_d();

  CurvatureSamples inner_curvature(int k);
  CurvatureSamples relative_curvature(int k);
  CurvatureSamples direct_curvature(int k);

  /// Cached check by name: osc, strong, compatible, projection, boundary_null (k = 1 in d = 2).
  const CheckReport& check(const std::string& name, int k = -1);
  std::vector<CheckReport> all_checks();

  std::vector<MethodRow> contents(const std::vector<std::string>& methods);
  std::vector<MethodRow> curvatures(const std::vector<int>& ks);

  nlohmann::json dim_report() const;
  nlohmann::json tiling_report();
  /// PGM layers of O, G, Gamma, tiles, F and F_eps at three eps values plus tiling.json.
  void render(const std::string& dir);
  /// CSV files of every sample set computed so far.
  void export_samples(const std::string& dir) const;

  static const std::vector<std::string>& content_methods();

 private:
  VolumeSamples remember(const std::string& key, VolumeSamples s);
  CurvatureSamples remember(const std::string& key, CurvatureSamples s);
  const VolumeTable& F_on_O_table();
  /// V(T, eps) with every tile separated from its neighbors.
  const VolumeTable& T_table();
  MethodRow content_row(const std::string& method);
  std::vector<MethodRow> direct_rows();

  Scene scene_;
  PipelineOptions opt_;
  double delta_;
  int per_decade_;
  DimensionData dims_;
  RegionPtr region_;
  std::optional<TilingData> tiling_;
  std::optional<DistanceField> F_field_;
  std::optional<double> g_tilde_;
  std::optional<VolumeTable> F_on_O_table_;
  std::optional<VolumeTable> T_table_;
  std::optional<DistanceField> plane_field_;
  double plane_pad_ = 0.0;
  std::optional<ParallelVolume> plane_;
  std::map<std::string, CheckReport> checks_;
  std::map<std::string, VolumeSamples> volume_cache_;
  std::map<std::string, CurvatureSamples> curvature_cache_;
};

}  // namespace ftl
