#pragma once

#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ftl/quadrature.hpp"
#include "ftl/volume.hpp"

namespace ftl {

/// Result of one content or curvature formula.
struct ContentResult {
  double value = 0.0;
  double s = 0.0;  ///< dimension used
  std::string method;
  std::optional<double> delta;  ///< raster resolution; empty for exact formulas
  double error_estimate = 0.0;
  /// Named parts of error_estimate (quadrature, head, resolution, oscillation, ...).
  std::map<std::string, double> error_components;
  std::string lattice_note;
  std::vector<std::string> flags;
  /// Oscillation band [min, max] reported instead of a limit for lattice sets.
  std::optional<std::pair<double, double>> band;
  std::optional<std::pair<double, double>> eps_window;
  /// Fitted small-eps exponent of the integrand.
  std::optional<double> fitted_exponent;
  std::vector<std::string> checks_passed;
};

nlohmann::json to_json(const ContentResult& r);

/// Inner parallel volume V(G, eps) = sum_k kappa_k eps^{d-k} on (0, g].
struct MonophaseData {
  std::vector<double> kappa;  ///< kappa_0 .. kappa_{d-1}
  double g = 0.0;
};

/// Piecewise polynomial V(G, eps) = sum_k kappa^l_k eps^{d-k} on (eps_{l-1}, eps_l].
struct PluriphaseData {
  std::vector<double> breakpoints;         ///< 0 = eps_0 < eps_1 < ... < eps_m = g
  std::vector<std::vector<double>> kappa;  ///< kappa[l-1][k], l = 1..m
};

/// Integral formula from V(G, eps) samples ending at eps = g, plus the closed tail.
/// Throws PreconditionError("exponent") when the fitted small-eps exponent of V(G, .) is
/// below d - D + 0.02, PreconditionError("dimension") when D >= d.
ContentResult generator_content(const VolumeSamples& V_G, double D, double eta, int d, double g);

/// Integral of eps^{D-d-1} h over (0, g]; h samples end at g.
ContentResult tiling_content_via_h(const VolumeSamples& h, double D, double eta, int d, double g);

/// Closed forms (no quadrature). Throw PreconditionError("dimension") unless d-1 < D < d.
ContentResult monophase_content(const MonophaseData& m, double D, double eta, int d);
ContentResult pluriphase_content(const PluriphaseData& p, double D, double eta, int d);

/// (1/eta) times the integral of eps^{D-d-1} R_d over (0, 1]. Throws ResolutionError when the
/// result is negative beyond its error bars.
ContentResult gatzouras_content(const VolumeSamples& R_d, double D, double eta, int d);

/// Integral of eps^{D-d-1} lambda(F_eps cap Gamma) over (0, g~] plus lambda(Gamma) g~^{D-d}/(d-D).
ContentResult relative_generator_content(const VolumeSamples& F_on_Gamma, double D, double eta, int d,
                                         double g_tilde, double lambda_Gamma);

/// (1/((d-D) eta)) times the integral of eps^{D-d} H^{d-1}(bd F_eps cap G) over (0, g~].
ContentResult s_content(const VolumeSamples& boundary, double D, double eta, int d, double g_tilde);

/// Direct estimates from samples x(eps) scaled by eps^{scale_exponent}: the limit (mean with
/// oscillation amplitude, or the band over one period for lattice sets) and the log-average.
/// Throws ConfigError when the window spans less than min_decades.
std::pair<ContentResult, ContentResult> direct_estimates(const SampledFunction& x, double s,
                                                         double scale_exponent,
                                                         std::optional<double> lattice_base,
                                                         double min_decades = 1.5);

/// Direct Minkowski content estimates from lambda(F_eps cap A) samples over the window.
std::pair<ContentResult, ContentResult> direct_content(const VolumeSamples& F_on_A, double D, int d,
                                                       std::optional<double> lattice_base,
                                                       double min_decades = 1.5);

/// Full-dimensional attractor: content lambda_d(O), flagged, no quadrature.
ContentResult full_dimensional_content(double lambda_O, int d, std::optional<double> delta);

/// Adapter from VolumeSamples to the quadrature input.
SampledFunction to_sampled(const VolumeSamples& s);

}  // namespace ftl
