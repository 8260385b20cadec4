#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ftl/ifs.hpp"
#include "ftl/raster.hpp"

namespace ftl {

enum class VolumeKind { V_G, V_T, F_eps_on_A, F_eps, h, phi, R_d };
std::string to_string(VolumeKind k);

/// Sampled scalar function of eps. Where the function jumps at a sample point (indicator
/// terms), values hold the left limit and jumps the right limit.
struct VolumeSamples {
  VolumeKind kind = VolumeKind::V_G;
  int dim = 2;
  std::vector<double> eps;
  std::vector<double> values;
  /// Resolution tolerance per sample (same length as eps).
  std::vector<double> tol;
  /// (index into eps, right-limit value) for samples at discontinuities.
  std::vector<std::pair<std::size_t, double>> jumps;
  double delta = 0.0;
  std::string region_tag;
  /// Some values came from monotone interpolation instead of exact lookups.
  bool interpolated = false;
};

/// Geometric grid ending exactly at hi with about per_decade points per decade. With a lattice
/// base h the step divides h, so eps * e^{m h} stays on the grid. extra points are merged in.
std::vector<double> eps_grid(double lo, double hi, int per_decade,
                             std::optional<double> lattice_base = std::nullopt,
                             const std::vector<double>& extra = {});

/// Table of V(U, eps) for a raster U (boundary distance = center distance - delta/2).
VolumeTable inner_volume_table(const Grid& U, std::size_t extra_cells = 0);
/// Table of lambda_d(F_eps cap A) (A = nullptr: whole grid).
VolumeTable restricted_volume_table(const DistanceField& F_field, const Grid* A);

VolumeSamples sample_table(const VolumeTable& t, const std::vector<double>& eps, VolumeKind kind,
                           const std::string& tag = "");
/// values[i] = V(U, eps[i]).
VolumeSamples sample_inner_volume(const Grid& U, const std::vector<double>& eps);
/// values[i] = delta^d #{cells of A with d(., F) <= eps[i]}.
VolumeSamples sample_restricted_volume(const DistanceField& F_field, const Grid& A,
                                       const std::vector<double>& eps, const std::string& tag = "A");

/// h(eps) = V(T,eps) - sum_i 1_{(0, r_i g]}(eps) r_i^d V(T, eps/r_i), V(T, .) read from the table.
VolumeSamples h_function(const VolumeTable& V_T, const IFS& ifs, double g,
                         const std::vector<double>& eps);
/// Same from samples: exact lookups where eps/r_i is a sample, monotone cubic interpolation
/// in log eps otherwise (flagged); constant continuation above the last sample.
VolumeSamples h_function(const VolumeSamples& V_T, const IFS& ifs, double g);

/// phi(eps) = f(eps) - sum_i 1_{(0, r_i g~]}(eps) r_i^d f(eps/r_i), f = lambda_d(F_eps cap O).
VolumeSamples phi_function(const VolumeTable& F_on_O, const IFS& ifs, double g_tilde,
                           const std::vector<double>& eps);
VolumeSamples phi_function(const VolumeSamples& F_on_O, const IFS& ifs, double g_tilde);

/// lambda_d(F_eps) over a wide eps range from a fine raster (eps <= fine_limit) and a
/// coarser raster with a larger pad.
class ParallelVolume {
 public:
  ParallelVolume() = default;
  ParallelVolume(VolumeTable fine, double fine_limit, std::optional<VolumeTable> coarse,
                 double coarse_limit);
  double volume(double eps) const;
  double tolerance(double eps) const;
  double max_eps() const { return coarse_ ? coarse_limit_ : fine_limit_; }
  double delta() const { return fine_.delta(); }
  int dim() const { return fine_.dim(); }

 private:
  VolumeTable fine_;
  double fine_limit_ = 0.0;
  std::optional<VolumeTable> coarse_;
  double coarse_limit_ = 0.0;
};

/// R_d(eps) = lambda_d(F_eps) - sum_i 1_{(0, r_i]}(eps) r_i^d lambda_d(F_{eps/r_i}).
VolumeSamples gatzouras_Rd(const ParallelVolume& F, const IFS& ifs, const std::vector<double>& eps);

/// CSV with columns eps,value,kind,delta,region_tag,tol.
void write_csv(const VolumeSamples& s, const std::string& path);

}  // namespace ftl
