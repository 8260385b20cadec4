#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace ftl {

/// Sampled integrand on an increasing eps grid. values hold left limits at jump points.
struct SampledFunction {
  std::vector<double> eps;
  std::vector<double> values;
  std::vector<double> tol;  ///< optional per-sample resolution tolerance
  std::vector<std::pair<std::size_t, double>> jumps;
  /// Raster cell volume behind tol (0: unknown). tol counts cells whose individual errors are
  /// independent, so the typical error is sqrt(tol * cell_volume) rather than tol.
  double cell_volume = 0.0;
};

enum class HeadMode {
  none,       ///< integral starts at the first sample
  power_fit,  ///< fit |f| = a eps^b on the smallest resolved decade and integrate the power law
  envelope,   ///< no extrapolation; bound the head by a power-law envelope of `envelope`
};

struct QuadratureOptions {
  HeadMode head = HeadMode::power_fit;
  /// Envelope samples (same grid) for HeadMode::envelope, e.g. a variation proxy.
  const std::vector<double>* envelope = nullptr;
  /// Exponent floor: the fitted b must satisfy p + b + 1 >= min_margin.
  double min_margin = 0.0;
};

struct QuadratureResult {
  double value = 0.0;       ///< body + head
  double body = 0.0;        ///< trapezoid over the samples
  double head = 0.0;        ///< extrapolated integral over (0, head_end)
  /// Lower end of the trapezoid body: eps_0, or the first resolved sample for power_fit heads
  /// (earlier samples, below twice their tolerance, are replaced by the fitted power law).
  double head_end = 0.0;
  double quad_error = 0.0;  ///< |T_h - T_2h| / 3
  double head_error = 0.0;
  double resolution_error = 0.0;  ///< integral of the tolerance envelope
  std::optional<double> head_exponent;  ///< fitted b
  bool head_ok = true;  ///< p + b + 1 > min_margin
};

/// Integral of eps^p f(eps) over (0, eps_n] (HeadMode none: over [eps_0, eps_n]) by the
/// trapezoid rule in log eps applied to eps^{p+1} f.
QuadratureResult log_quadrature(const SampledFunction& f, double p, const QuadratureOptions& opt = {});

/// Least-squares slope and intercept of log y against log x over the points with y > 0.
struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t points = 0;
};
std::optional<PowerFit> fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// Indices of the smallest decade of eps (at least min_points samples).
std::pair<std::size_t, std::size_t> lowest_decade(const std::vector<double>& eps, std::size_t min_points = 4);

}  // namespace ftl
