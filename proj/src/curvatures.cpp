#include "ftl/curvatures.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ftl/errors.hpp"
#include "ftl/level_set.hpp"

namespace ftl {

namespace {

void require_upper(const CurvatureSamples& s, double upper) {
  if (s.eps.size() < 2) throw ConfigError("curvature samples: at least two samples required");
  if (std::abs(s.eps.back() - upper) > 1e-9 * upper)
    throw ConfigError("curvature samples must end at the upper limit " + std::to_string(upper));
}

SampledFunction to_sampled(const CurvatureSamples& s) {
  SampledFunction f;
  f.eps = s.eps;
  f.values = s.values;
  return f;
}

ContentResult curvature_integral(const CurvatureSamples& s, double D, double eta, int k, const char* method) {
  if (s.k != k) throw ConfigError("curvature samples have the wrong index k");
  if (!(D > k)) throw PreconditionError("dimension", "curvature formula needs D > k");
  const auto check = cbc_exponent_check(s, D, k);
  if (!check.pass) {
    std::ostringstream os;
    os << method << ": variation slope " << check.slope << " is below k - D + 0.02 = " << (k - D + 0.02);
    throw PreconditionError("exponent", os.str());
  }
  QuadratureOptions opt;
  // k = d-1 values are nonnegative and extrapolate by a power law; signed k = 0 values only
  // bound the head through the variation envelope.
  if (k == s.dim - 1) {
    opt.head = HeadMode::power_fit;
  } else {
    opt.head = HeadMode::envelope;
    opt.envelope = &s.variation;
  }
  const auto q = log_quadrature(to_sampled(s), D - k - 1.0, opt);
  ContentResult r;
  r.method = method;
  r.s = D;
  r.delta = s.delta;
  r.value = q.value / eta;
  r.error_components["quadrature"] = q.quad_error / eta;
  r.error_components["head"] = q.head_error / eta;
  // Level sets are located to half a cell: shifting the integrand by delta/2 changes the
  // integral by at most delta/2 times its total variation (including the drop to zero).
  double tv = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < s.eps.size(); ++i) {
    const double w = std::pow(s.eps[i], D - k - 1.0) * s.values[i];
    if (i) tv += std::abs(w - prev);
    prev = w;
  }
  tv += std::abs(prev);
  const double resolution = 0.5 * s.delta * tv;
  r.error_components["resolution"] = resolution / eta;
  r.error_estimate = (q.quad_error + q.head_error + resolution) / eta;
  r.fitted_exponent = check.slope;
  r.eps_window = std::make_pair(s.eps.front(), s.eps.back());
  return r;
}

}  // namespace

CurvatureSamples sample_curvature(const DistanceField& f, double shift_cells, int k,
                                  const std::vector<double>& eps, const Grid* mask,
                                  const std::string& region_tag) {
  const int d = f.geo.dim;
  if (k < 0 || k > d - 1) throw ConfigError("curvature index k must lie in 0..d-1");
  CurvatureSamples s;
  s.k = k;
  s.dim = d;
  s.eps = eps;
  s.delta = f.geo.delta;
  s.region_tag = region_tag;
  s.values.reserve(eps.size());
  s.variation.reserve(eps.size());
  for (double e : eps) {
    const auto st = level_set_stats(f, e, shift_cells, mask);
    if (st.border_contact && (!mask || mask->border_occupied())) {
      std::ostringstream os;
      os << "level set at eps = " << e << " reaches the raster border";
      throw ResolutionError(os.str());
    }
    if (k == d - 1 && d == 2) {
      s.values.push_back(0.5 * st.length);
      s.variation.push_back(0.5 * st.length);
    } else {
      s.values.push_back(st.turning);
      s.variation.push_back(st.variation);
    }
  }
  return s;
}

CurvatureSamples sample_inner_curvature(const Grid& U, int k, const std::vector<double>& eps) {
  return sample_curvature(complement_distance(U), 0.5, k, eps, nullptr, "inner");
}

ExponentCheck cbc_exponent_check(const CurvatureSamples& s, double D, int k) {
  ExponentCheck c;
  const std::size_t n = s.eps.size();
  if (n == 0) {
    c.gamma = c.slope = std::numeric_limits<double>::infinity();
    return c;
  }
  const double mid = std::sqrt(s.eps.front() * s.eps.back());
  std::vector<double> x, y;
  for (std::size_t j = 0; j < n; ++j)
    if (s.eps[j] <= mid * (1.0 + 1e-12)) {
      x.push_back(s.eps[j]);
      y.push_back(std::abs(s.variation[j]));
    }
  auto fit = fit_power_law(x, y);
  if (!fit) {
    c.gamma = c.slope = std::numeric_limits<double>::infinity();
    return c;
  }
  c.slope = fit->slope;
  c.gamma = fit->slope - (k - D);
  c.pass = c.gamma >= 0.02;
  return c;
}

ContentResult generator_curvature(const CurvatureSamples& G_samples, double D, double eta, int k, double g) {
  require_upper(G_samples, g);
  return curvature_integral(G_samples, D, eta, k, "generator_curvature");
}

ContentResult relative_generator_curvature(const CurvatureSamples& FG_samples, double D, double eta, int k,
                                           double g_tilde) {
  require_upper(FG_samples, g_tilde);
  return curvature_integral(FG_samples, D, eta, k, "relative_generator_curvature");
}

std::pair<ContentResult, ContentResult> direct_fractal_curvature(const CurvatureSamples& s, double D, int k,
                                                                 std::optional<double> lattice_base,
                                                                 double min_decades) {
  auto res = direct_estimates(to_sampled(s), D, D - k, lattice_base, min_decades);
  res.first.method = "direct_curvature_limit";
  res.second.method = "direct_curvature_average";
  res.first.delta = res.second.delta = s.delta;
  return res;
}

void write_csv(const CurvatureSamples& s, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  os.precision(17);
  os << "eps,value,variation,k,region_tag\n";
  for (std::size_t i = 0; i < s.eps.size(); ++i)
    os << s.eps[i] << ',' << s.values[i] << ',' << s.variation[i] << ',' << s.k << ',' << s.region_tag << '\n';
}

}  // namespace ftl
