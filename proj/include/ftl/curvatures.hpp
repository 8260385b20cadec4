#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ftl/contents.hpp"
#include "ftl/raster.hpp"

namespace ftl {

/// C_k of parallel sets sampled over eps. values are signed for k = 0; variation holds the
/// total-variation proxy (sum of |turning| / 2 pi for k = 0, equal to values for k = d-1).
struct CurvatureSamples {
  int k = 0;
  int dim = 2;
  std::vector<double> eps;
  std::vector<double> values;
  std::vector<double> variation;
  double delta = 0.0;
  std::string region_tag;
};

/// Samples C_k of {sqrt(sq) - shift_cells <= eps / delta} inside mask (nullptr: whole grid).
/// k = d-1 = 1: half the boundary length; k = 0: turning / 2 pi (d = 2) or half the number of
/// boundary points (d = 1). Inner parallel sets U_{-eps} use the complement distance of U with
/// shift 0.5 (the curvature of U_{-eps} is that of the closed complement's eps-parallel set).
/// Throws ResolutionError when the level set reaches the outermost cell ring (only checked
/// when there is no mask or the mask itself touches that ring).
CurvatureSamples sample_curvature(const DistanceField& f, double shift_cells, int k,
                                  const std::vector<double>& eps, const Grid* mask = nullptr,
                                  const std::string& region_tag = "");

/// C_k(U_{-eps}) for a raster U.
CurvatureSamples sample_inner_curvature(const Grid& U, int k, const std::vector<double>& eps);

struct ExponentCheck {
  double gamma = 0.0;  ///< fitted slope minus (k - D); +inf when the samples vanish
  double slope = 0.0;
  bool pass = true;
};

/// Least-squares slope of log variation against log eps over the lower half of the window;
/// pass iff slope >= k - D + 0.02.
ExponentCheck cbc_exponent_check(const CurvatureSamples& s, double D, int k);

/// (1/eta) times the integral of eps^{D-k-1} C_k(G_{-eps}) over (0, g]; no tail. The last
/// sample is the left limit at g. error_components: quadrature, head, and resolution
/// (delta/2 times the total variation of the integrand).
/// Throws PreconditionError("exponent") when the variation bound check fails.
ContentResult generator_curvature(const CurvatureSamples& G_samples, double D, double eta, int k, double g);

/// (1/eta) times the integral of eps^{D-k-1} C_k(F_eps, G) over (0, g~].
ContentResult relative_generator_curvature(const CurvatureSamples& FG_samples, double D, double eta, int k,
                                           double g_tilde);

/// Direct limit and average of eps^{D-k} C_k(F_eps) over the sampled window.
std::pair<ContentResult, ContentResult> direct_fractal_curvature(const CurvatureSamples& s, double D, int k,
                                                                 std::optional<double> lattice_base,
                                                                 double min_decades = 1.5);

/// CSV with columns eps,value,variation,k,region_tag.
void write_csv(const CurvatureSamples& s, const std::string& path);

}  // namespace ftl
