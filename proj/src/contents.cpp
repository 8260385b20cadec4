#include "ftl/contents.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ftl/errors.hpp"

namespace ftl {

namespace {

constexpr double kExponentMargin = 0.02;

void require_dimension_below(double D, int d, const char* what) {
  if (!(D < d)) {
    std::ostringstream os;
    os << what << " needs D < d (D = " << D << ", d = " << d << ")";
    throw PreconditionError("dimension", os.str());
  }
}

void require_ends_at(const VolumeSamples& s, double upper, const char* name) {
  if (s.eps.size() < 2) throw ConfigError(std::string(name) + ": at least two samples required");
  if (std::abs(s.eps.back() - upper) > 1e-9 * upper)
    throw ConfigError(std::string(name) + ": samples must end at the upper limit " + std::to_string(upper));
}

void set_errors(ContentResult& r, const QuadratureResult& q, double scale, double extra_resolution = 0.0) {
  r.error_components["quadrature"] = std::abs(scale) * q.quad_error;
  r.error_components["head"] = std::abs(scale) * q.head_error;
  r.error_components["resolution"] = std::abs(scale) * (q.resolution_error + extra_resolution);
  r.error_estimate = 0.0;
  for (const auto& [k, v] : r.error_components) r.error_estimate += v;
  r.fitted_exponent = q.head_exponent;
}

void exponent_check(const QuadratureResult& q, double D, int d, const char* what) {
  if (q.head_ok) return;
  std::ostringstream os;
  os << what << ": fitted small-eps exponent " << (q.head_exponent ? *q.head_exponent : 0.0)
     << " is below d - D + " << kExponentMargin << " = " << (d - D + kExponentMargin)
     << " (dim_M of the generator boundary exceeds D)";
  throw PreconditionError("exponent", os.str());
}

double tail_term(double value_at_upper, double upper, double D, int d) {
  return value_at_upper * std::pow(upper, D - d) / (d - D);
}

}  // namespace

nlohmann::json to_json(const ContentResult& r) {
  nlohmann::json j;
  j["method"] = r.method;
  j["value"] = r.value;
  j["s"] = r.s;
  if (r.delta)
    j["resolution"] = *r.delta;
  else
    j["resolution"] = "exact";
  j["error_estimate"] = r.error_estimate;
  j["error_components"] = r.error_components;
  if (!r.lattice_note.empty()) j["lattice_note"] = r.lattice_note;
  j["flags"] = r.flags;
  if (r.band) j["band"] = {r.band->first, r.band->second};
  if (r.eps_window) j["eps_window"] = {r.eps_window->first, r.eps_window->second};
  if (r.fitted_exponent) j["fitted_exponent"] = *r.fitted_exponent;
  j["checks_passed"] = r.checks_passed;
  return j;
}

SampledFunction to_sampled(const VolumeSamples& s) {
  SampledFunction f;
  f.eps = s.eps;
  f.values = s.values;
  f.tol = s.tol;
  f.jumps = s.jumps;
  f.cell_volume = std::pow(s.delta, s.dim);
  return f;
}

ContentResult generator_content(const VolumeSamples& V_G, double D, double eta, int d, double g) {
  require_dimension_below(D, d, "generator formula");
  require_ends_at(V_G, g, "V(G, eps)");
  QuadratureOptions opt;
  opt.min_margin = kExponentMargin;
  const auto q = log_quadrature(to_sampled(V_G), D - d - 1.0, opt);
  exponent_check(q, D, d, "generator formula");
  ContentResult r;
  r.method = "generator_integral";
  r.s = D;
  r.delta = V_G.delta;
  const double tail = tail_term(V_G.values.back(), g, D, d);
  r.value = (q.value + tail) / eta;
  set_errors(r, q, 1.0 / eta, tail_term(V_G.tol.empty() ? 0.0 : V_G.tol.back(), g, D, d));
  r.eps_window = std::make_pair(V_G.eps.front(), g);
  if (V_G.interpolated) r.flags.push_back("interpolated");
  return r;
}

ContentResult tiling_content_via_h(const VolumeSamples& h, double D, double eta, int d, double g) {
  require_dimension_below(D, d, "tiling formula");
  require_ends_at(h, g, "h(eps)");
  QuadratureOptions opt;
  opt.min_margin = kExponentMargin;
  const auto q = log_quadrature(to_sampled(h), D - d - 1.0, opt);
  exponent_check(q, D, d, "tiling formula");
  ContentResult r;
  r.method = "tiling_via_h";
  r.s = D;
  r.delta = h.delta;
  r.value = q.value / eta;
  set_errors(r, q, 1.0 / eta);
  r.eps_window = std::make_pair(h.eps.front(), g);
  if (h.interpolated) r.flags.push_back("interpolated");
  return r;
}

ContentResult monophase_content(const MonophaseData& m, double D, double eta, int d) {
  if (!(D > d - 1 && D < d)) throw PreconditionError("dimension", "monophase formula needs d - 1 < D < d");
  if (static_cast<int>(m.kappa.size()) != d) throw ConfigError("monophase data needs d coefficients");
  if (!(m.g > 0)) throw ConfigError("monophase data needs g > 0");
  double sum = 0.0;
  for (int k = 0; k < d; ++k) sum += (d - k) / (D - k) * m.kappa[k] * std::pow(m.g, D - k);
  ContentResult r;
  r.method = "monophase";
  r.s = D;
  r.value = sum / ((d - D) * eta);
  return r;
}

ContentResult pluriphase_content(const PluriphaseData& p, double D, double eta, int d) {
  if (!(D > d - 1 && D < d)) throw PreconditionError("dimension", "pluriphase formula needs d - 1 < D < d");
  const std::size_t m = p.kappa.size();
  if (m == 0 || p.breakpoints.size() != m + 1) throw ConfigError("pluriphase data needs m + 1 breakpoints");
  if (p.breakpoints.front() != 0.0) throw ConfigError("pluriphase breakpoints must start at 0");
  for (std::size_t l = 0; l < m; ++l) {
    if (!(p.breakpoints[l + 1] > p.breakpoints[l])) throw ConfigError("pluriphase breakpoints must increase");
    if (static_cast<int>(p.kappa[l].size()) != d) throw ConfigError("pluriphase data needs d coefficients per phase");
  }
  auto V = [&](std::size_t l, double e) {
    double v = 0.0;
    for (int k = 0; k < d; ++k) v += p.kappa[l][k] * std::pow(e, d - k);
    return v;
  };
  for (std::size_t l = 0; l + 1 < m; ++l) {
    const double e = p.breakpoints[l + 1];
    const double a = V(l, e), b = V(l + 1, e);
    if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a)))
      throw ConfigError("pluriphase volume is discontinuous at breakpoint " + std::to_string(e));
  }
  const double g = p.breakpoints.back();
  double sum = 0.0;
  for (int k = 0; k < d; ++k) {
    double inner = 0.0;
    for (std::size_t l = 0; l + 1 < m; ++l)
      inner += (p.kappa[l][k] - p.kappa[l + 1][k]) * std::pow(p.breakpoints[l + 1], D - k);
    inner += (d - k) / (d - D) * p.kappa[m - 1][k] * std::pow(g, D - k);
    sum += inner / (D - k);
  }
  ContentResult r;
  r.method = "pluriphase";
  r.s = D;
  r.value = sum / eta;
  return r;
}

ContentResult gatzouras_content(const VolumeSamples& R_d, double D, double eta, int d) {
  require_dimension_below(D, d, "Gatzouras formula");
  require_ends_at(R_d, 1.0, "R_d(eps)");
  QuadratureOptions opt;
  opt.min_margin = kExponentMargin;
  const auto q = log_quadrature(to_sampled(R_d), D - d - 1.0, opt);
  exponent_check(q, D, d, "Gatzouras formula");
  ContentResult r;
  r.method = "gatzouras";
  r.s = D;
  r.delta = R_d.delta;
  r.value = q.value / eta;
  set_errors(r, q, 1.0 / eta);
  r.eps_window = std::make_pair(R_d.eps.front(), 1.0);
  if (r.value < -r.error_estimate)
    throw ResolutionError("Gatzouras integral is negative beyond its error bars: " + std::to_string(r.value));
  return r;
}

ContentResult relative_generator_content(const VolumeSamples& F_on_Gamma, double D, double eta, int d,
                                         double g_tilde, double lambda_Gamma) {
  require_dimension_below(D, d, "relative generator formula");
  require_ends_at(F_on_Gamma, g_tilde, "lambda(F_eps cap Gamma)");
  QuadratureOptions opt;
  opt.min_margin = kExponentMargin;
  const auto q = log_quadrature(to_sampled(F_on_Gamma), D - d - 1.0, opt);
  exponent_check(q, D, d, "relative generator formula");
  ContentResult r;
  r.method = "relative_generator";
  r.s = D;
  r.delta = F_on_Gamma.delta;
  const double tail = tail_term(lambda_Gamma, g_tilde, D, d);
  r.value = (q.value + tail) / eta;
  // The sampled value at g~ should equal lambda(Gamma); their gap measures the raster error.
  const double gap = std::abs(F_on_Gamma.values.back() - lambda_Gamma);
  set_errors(r, q, 1.0 / eta, tail_term(gap, g_tilde, D, d));
  r.eps_window = std::make_pair(F_on_Gamma.eps.front(), g_tilde);
  return r;
}

ContentResult s_content(const VolumeSamples& boundary, double D, double eta, int d, double g_tilde) {
  if (d != 2) throw ConfigError("S-content formula is implemented for d = 2");
  require_dimension_below(D, d, "S-content formula");
  require_ends_at(boundary, g_tilde, "H^1(bd F_eps cap G)");
  QuadratureOptions opt;
  opt.min_margin = kExponentMargin;
  const auto q = log_quadrature(to_sampled(boundary), D - d, opt);
  exponent_check(q, D, d - 1, "S-content formula");
  ContentResult r;
  r.method = "s_content";
  r.s = D;
  r.delta = boundary.delta;
  const double scale = 1.0 / ((d - D) * eta);
  r.value = q.value * scale;
  set_errors(r, q, scale);
  r.eps_window = std::make_pair(boundary.eps.front(), g_tilde);
  return r;
}

std::pair<ContentResult, ContentResult> direct_estimates(const SampledFunction& x, double s,
                                                         double scale_exponent,
                                                         std::optional<double> lattice_base,
                                                         double min_decades) {
  const std::size_t n = x.eps.size();
  if (n < 3) throw ConfigError("direct estimate needs at least three samples");
  const double a = x.eps.front(), b = x.eps.back();
  const double decades = std::log10(b / a);
  if (decades < min_decades - 1e-9) {
    std::ostringstream os;
    os << "eps window [" << a << ", " << b << "] spans " << decades << " decades, at least " << min_decades
       << " required";
    throw ConfigError(os.str());
  }
  SampledFunction y = x;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::pow(x.eps[j], scale_exponent);
    y.values[j] = w * x.values[j];
    if (j < y.tol.size()) y.tol[j] = w * x.tol[j];
  }
  for (auto& [k, v] : y.jumps) v *= std::pow(x.eps[k], scale_exponent);

  ContentResult lim;
  lim.s = s;
  lim.method = "direct_limit";
  lim.eps_window = std::make_pair(a, b);
  if (lattice_base) {
    const double top = a * std::exp(*lattice_base) * (1.0 + 1e-9);
    double lo = y.values[0], hi = y.values[0];
    for (std::size_t j = 0; j < n && x.eps[j] <= top; ++j) {
      lo = std::min(lo, y.values[j]);
      hi = std::max(hi, y.values[j]);
    }
    lim.band = std::make_pair(lo, hi);
    lim.value = 0.5 * (lo + hi);
    lim.error_components["oscillation"] = 0.5 * (hi - lo);
    lim.flags.push_back("lattice: oscillation band over one period reported instead of a limit");
  } else {
    double sum = 0.0, lo = y.values[0], hi = y.values[0];
    for (double v : y.values) {
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    lim.value = sum / static_cast<double>(n);
    lim.error_components["oscillation"] = 0.5 * (hi - lo);
  }
  lim.error_estimate = lim.error_components["oscillation"];

  QuadratureOptions opt;
  opt.head = HeadMode::none;
  const auto q = log_quadrature(y, -1.0, opt);
  const double L = std::log(b / a);
  ContentResult avg;
  avg.s = s;
  avg.method = "direct_average";
  avg.eps_window = std::make_pair(a, b);
  avg.value = q.body / L;
  avg.error_components["quadrature"] = q.quad_error / L;
  avg.error_components["resolution"] = q.resolution_error / L;
  avg.error_estimate = (q.quad_error + q.resolution_error) / L;
  if (lattice_base) {
    const double periods = L / *lattice_base;
    if (std::abs(periods - std::round(periods)) > 1e-6)
      avg.flags.push_back("window is not a whole number of lattice periods");
  }
  return {lim, avg};
}

std::pair<ContentResult, ContentResult> direct_content(const VolumeSamples& F_on_A, double D, int d,
                                                       std::optional<double> lattice_base,
                                                       double min_decades) {
  auto res = direct_estimates(to_sampled(F_on_A), D, D - d, lattice_base, min_decades);
  res.first.delta = res.second.delta = F_on_A.delta;
  return res;
}

ContentResult full_dimensional_content(double lambda_O, int d, std::optional<double> delta) {
  ContentResult r;
  r.method = "full_dimensional";
  r.s = d;
  r.value = lambda_O;
  r.delta = delta;
  r.flags.push_back("full-dimensional attractor: content equals lambda_d(O), no quadrature");
  return r;
}

}  // namespace ftl
