#include "ftl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ftl/errors.hpp"

namespace ftl {

namespace {

double right_value(const SampledFunction& f, std::size_t j) {
  for (const auto& [k, v] : f.jumps)
    if (k == j) return v;
  return f.values[j];
}

// Trapezoid in log eps over consecutive nodes of `nodes`, integrand eps^{p+1} * value.
double trapezoid(const SampledFunction& f, const std::vector<double>& vals, bool use_jumps, double p,
                 const std::vector<std::size_t>& nodes) {
  double s = 0.0;
  for (std::size_t n = 0; n + 1 < nodes.size(); ++n) {
    const std::size_t a = nodes[n], b = nodes[n + 1];
    const double ea = f.eps[a], eb = f.eps[b];
    const double va = use_jumps ? right_value(f, a) : vals[a];
    const double ua = std::pow(ea, p + 1.0) * va;
    const double ub = std::pow(eb, p + 1.0) * vals[b];
    s += 0.5 * (ua + ub) * std::log(eb / ea);
  }
  return s;
}

struct Head {
  double value = 0.0;
  double error = 0.0;
  std::optional<double> exponent;
  bool ok = true;
};

Head envelope_head(const std::vector<double>& eps, const std::vector<double>& env, double p,
                   double min_margin) {
  Head h;
  auto [i0, i1] = lowest_decade(eps);
  std::vector<double> x(eps.begin() + i0, eps.begin() + i1), y;
  for (std::size_t j = i0; j < i1; ++j) y.push_back(std::abs(env[j]));
  if (std::all_of(y.begin(), y.end(), [](double v) { return v == 0.0; })) return h;
  auto fit = fit_power_law(x, y);
  const double e0 = eps.front();
  if (!fit || fit->points < 2) {
    // Too few positive samples for a fit: bound with the largest sample held constant.
    const double m = p + 1.0;
    if (m <= min_margin) {
      h.ok = false;
      h.error = std::numeric_limits<double>::infinity();
      return h;
    }
    h.error = *std::max_element(y.begin(), y.end()) * std::pow(e0, m) / m;
    return h;
  }
  h.exponent = fit->slope;
  const double m = p + fit->slope + 1.0;
  if (m <= min_margin) {
    h.ok = false;
    h.error = std::numeric_limits<double>::infinity();
    return h;
  }
  h.error = std::exp(fit->intercept) * std::pow(e0, m) / m;
  return h;
}

// Noise scale of sample j: four typical errors when the cell volume is known, else twice the
// worst-case tolerance.
double noise_scale(const SampledFunction& f, std::size_t j) {
  if (f.cell_volume > 0) return 4.0 * std::sqrt(f.tol[j] * f.cell_volume);
  return 2.0 * f.tol[j];
}

// First index from which every sample over a factor-3 span exceeds its noise scale
// (n when no such span exists). Samples without tolerances count as resolved.
std::size_t resolved_start(const SampledFunction& f) {
  const std::size_t n = f.eps.size();
  if (f.tol.size() != n) return 0;
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t count = 0;
    bool all = true;
    for (std::size_t j = s; j < n && f.eps[j] <= 3.0 * f.eps[s]; ++j, ++count)
      if (!(std::abs(f.values[j]) > noise_scale(f, j))) {
        all = false;
        break;
      }
    if (all && count >= 4) return s;
  }
  return n;
}

Head power_head(const SampledFunction& f, double p, double min_margin) {
  const std::size_t start = resolved_start(f);
  if (start == f.eps.size()) {
    std::vector<double> env(f.values.size());
    for (std::size_t j = 0; j < env.size(); ++j) env[j] = std::abs(f.values[j]) + f.tol[j];
    return envelope_head(f.eps, env, p, min_margin);
  }
  const std::vector<double> xs(f.eps.begin() + start, f.eps.end());
  const std::vector<double> vs(f.values.begin() + start, f.values.end());
  auto [i0, i1] = lowest_decade(xs);
  bool pos = false, neg = false, zero = false;
  for (std::size_t j = i0; j < i1; ++j) {
    if (vs[j] > 0) pos = true;
    else if (vs[j] < 0) neg = true;
    else zero = true;
  }
  if (!pos && !neg) return {};
  if ((pos && neg) || zero) return envelope_head(f.eps, f.values, p, min_margin);
  std::vector<double> x(xs.begin() + i0, xs.begin() + i1), y;
  for (std::size_t j = i0; j < i1; ++j) y.push_back(std::abs(vs[j]));
  auto fit = fit_power_law(x, y);
  if (!fit) return envelope_head(f.eps, f.values, p, min_margin);
  Head h;
  h.exponent = fit->slope;
  const double m = p + fit->slope + 1.0;
  if (m <= min_margin) {
    h.ok = false;
    h.error = std::numeric_limits<double>::infinity();
    return h;
  }
  const double sign = pos ? 1.0 : -1.0;
  const double scale = std::exp(fit->intercept) * std::pow(f.eps.front(), m);
  h.value = sign * scale / m;
  const double m_lo = m - 2.0 * fit->slope_stderr;
  const double spread = m_lo > 0 ? scale * std::abs(1.0 / m_lo - 1.0 / m) : std::abs(h.value);
  h.error = 0.05 * std::abs(h.value) + spread;
  return h;
}

}  // namespace

std::optional<PowerFit> fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  const std::size_t n = lx.size();
  if (n < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0) return std::nullopt;
  PowerFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = n;
  if (n > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ly[i] - (f.intercept + f.slope * lx[i]);
      rss += r * r;
    }
    f.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  }
  return f;
}

std::pair<std::size_t, std::size_t> lowest_decade(const std::vector<double>& eps, std::size_t min_points) {
  std::size_t end = 0;
  while (end < eps.size() && eps[end] <= eps.front() * 10.0 * (1.0 + 1e-12)) ++end;
  end = std::min(eps.size(), std::max(end, min_points));
  return {0, end};
}

QuadratureResult log_quadrature(const SampledFunction& f, double p, const QuadratureOptions& opt) {
  const std::size_t n = f.eps.size();
  if (n < 2 || f.values.size() != n) throw ConfigError("quadrature needs at least two samples");
  for (std::size_t j = 0; j + 1 < n; ++j)
    if (!(f.eps[j] > 0 && f.eps[j + 1] > f.eps[j])) throw ConfigError("eps samples must increase");
  if (opt.head == HeadMode::power_fit && f.tol.size() == n) {
    const std::size_t start = resolved_start(f);
    if (start > 0 && start + 4 <= n) {
      SampledFunction g;
      g.eps.assign(f.eps.begin() + start, f.eps.end());
      g.values.assign(f.values.begin() + start, f.values.end());
      g.tol.assign(f.tol.begin() + start, f.tol.end());
      g.cell_volume = f.cell_volume;
      for (const auto& [k, v] : f.jumps)
        if (k >= start) g.jumps.emplace_back(k - start, v);
      return log_quadrature(g, p, opt);
    }
  }
  QuadratureResult q;
  q.head_end = f.eps.front();
  std::vector<std::size_t> fine(n), coarse;
  for (std::size_t j = 0; j < n; ++j) fine[j] = j;
  for (std::size_t j = 0; j < n; ++j) {
    const bool jump = std::any_of(f.jumps.begin(), f.jumps.end(), [&](const auto& pr) { return pr.first == j; });
    if (j % 2 == 0 || j + 1 == n || jump) coarse.push_back(j);
  }
  q.body = trapezoid(f, f.values, true, p, fine);
  q.quad_error = std::abs(q.body - trapezoid(f, f.values, true, p, coarse)) / 3.0;
  if (f.tol.size() == n) q.resolution_error = std::abs(trapezoid(f, f.tol, false, p, fine));

  Head h;
  switch (opt.head) {
    case HeadMode::none: break;
    case HeadMode::power_fit: h = power_head(f, p, opt.min_margin); break;
    case HeadMode::envelope:
      h = envelope_head(f.eps, opt.envelope ? *opt.envelope : f.values, p, opt.min_margin);
      break;
  }
  q.head = h.value;
  q.head_error = h.error;
  q.head_exponent = h.exponent;
  q.head_ok = h.ok;
  // Resolution tolerance below the first sample scales like the head itself.
  if (f.tol.size() == n && std::abs(f.values.front()) > 0)
    q.resolution_error += std::abs(q.head) * std::min(1.0, f.tol.front() / std::abs(f.values.front()));
  q.value = q.body + q.head;
  return q;
}

}  // namespace ftl
