#include "ftl/volume.hpp"

#include <algorithm>
#include <math.h>  // boost pchip calls unqualified isnan
#include <boost/math/interpolators/pchip.hpp>
#include <cmath>
#include <fstream>

#include "ftl/errors.hpp"

namespace ftl {

std::string to_string(VolumeKind k) {
  switch (k) {
    case VolumeKind::V_G: return "V_G";
    case VolumeKind::V_T: return "V_T";
    case VolumeKind::F_eps_on_A: return "F_eps_on_A";
    case VolumeKind::F_eps: return "F_eps";
    case VolumeKind::h: return "h";
    case VolumeKind::phi: return "phi";
    case VolumeKind::R_d: return "R_d";
  }
  return "unknown";
}

std::vector<double> eps_grid(double lo, double hi, int per_decade, std::optional<double> lattice_base,
                             const std::vector<double>& extra) {
  if (!(lo > 0 && hi > lo)) throw ConfigError("eps grid needs 0 < lo < hi");
  if (per_decade < 2) throw ConfigError("eps grid needs at least 2 points per decade");
  double step = std::log(10.0) / per_decade;
  if (lattice_base && *lattice_base > 0) {
    const double k = std::max(1.0, std::round(*lattice_base / step));
    step = *lattice_base / k;
  }
  std::vector<double> out;
  const double span = std::log(hi / lo);
  const long n = static_cast<long>(std::floor(span / step + 1e-9));
  out.reserve(static_cast<std::size_t>(n) + 1 + extra.size());
  for (long j = n; j >= 0; --j) out.push_back(j == 0 ? hi : hi * std::exp(-static_cast<double>(j) * step));
  for (double e : extra)
    if (e > lo && e < hi) out.push_back(e);
  std::sort(out.begin(), out.end());
  std::vector<double> uniq;
  for (double e : out)
    if (uniq.empty() || e > uniq.back() * (1.0 + 1e-9)) uniq.push_back(e);
  return uniq;
}

VolumeTable inner_volume_table(const Grid& U, std::size_t extra_cells) {
  if (U.count() == 0) throw ResolutionError("inner parallel volume of an empty region");
  return VolumeTable(complement_distance(U), &U, 0.5, extra_cells);
}

VolumeTable restricted_volume_table(const DistanceField& F_field, const Grid* A) {
  return VolumeTable(F_field, A, 0.0, 0);
}

VolumeSamples sample_table(const VolumeTable& t, const std::vector<double>& eps, VolumeKind kind,
                           const std::string& tag) {
  VolumeSamples s;
  s.kind = kind;
  s.dim = t.dim();
  s.delta = t.delta();
  s.region_tag = tag;
  s.eps = eps;
  s.values.resize(eps.size());
  s.tol.resize(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    s.values[i] = t.volume(eps[i]);
    s.tol[i] = t.tolerance(eps[i]);
  }
  return s;
}

VolumeSamples sample_inner_volume(const Grid& U, const std::vector<double>& eps) {
  return sample_table(inner_volume_table(U), eps, VolumeKind::V_G, "U");
}

VolumeSamples sample_restricted_volume(const DistanceField& F_field, const Grid& A,
                                       const std::vector<double>& eps, const std::string& tag) {
  return sample_table(restricted_volume_table(F_field, &A), eps, VolumeKind::F_eps_on_A, tag);
}

namespace {

// Renewal-type difference f(eps) - sum_i 1_{(0, r_i c]}(eps) r_i^d f(eps/r_i) with f given by a
// callable returning (value, tolerance).
template <class F>
VolumeSamples renewal_difference(F&& f, const IFS& ifs, double cutoff, const std::vector<double>& eps,
                                 VolumeKind kind, double delta, int dim) {
  VolumeSamples s;
  s.kind = kind;
  s.dim = dim;
  s.delta = delta;
  s.eps = eps;
  s.values.resize(eps.size());
  s.tol.resize(eps.size());
  const auto r = ifs.ratios();
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const double e = eps[k];
    auto [v, tol] = f(e);
    double right = v;
    bool jump = false;
    for (double ri : r) {
      const double edge = ri * cutoff;
      if (e > edge * (1.0 + 1e-12)) continue;
      auto [w, wt] = f(e / ri);
      const double term = std::pow(ri, dim) * w;
      v -= term;
      tol += std::pow(ri, dim) * wt;
      if (e >= edge * (1.0 - 1e-12))
        jump = true;  // the indicator switches off just above this sample
      else
        right -= term;
    }
    s.values[k] = v;
    s.tol[k] = tol;
    if (jump) s.jumps.emplace_back(k, right);
  }
  return s;
}

// Lookup of a sampled monotone function at x: exact sample, pchip in log eps, or constant
// continuation beyond the last sample.
class SampleLookup {
 public:
  explicit SampleLookup(const VolumeSamples& s) : s_(s) {
    if (s.eps.size() >= 4) {
      std::vector<double> x(s.eps.size()), y(s.values);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::log(s.eps[i]);
      interp_.emplace(std::move(x), std::move(y));
    }
  }
  std::pair<double, double> operator()(double e, bool& interpolated) const {
    const auto& eps = s_.eps;
    if (e >= eps.back() * (1.0 - 1e-9)) return {s_.values.back(), s_.tol.back()};
    auto it = std::lower_bound(eps.begin(), eps.end(), e * (1.0 - 1e-9));
    const std::size_t i = static_cast<std::size_t>(it - eps.begin());
    if (it != eps.end() && std::abs(*it - e) <= 1e-9 * e) return {s_.values[i], s_.tol[i]};
    interpolated = true;
    if (e < eps.front() || !interp_) {
      const std::size_t j = std::min(i, eps.size() - 1);
      return {s_.values[j], s_.tol[j]};
    }
    const double tol = std::max(s_.tol[i == 0 ? 0 : i - 1], s_.tol[std::min(i, eps.size() - 1)]);
    return {(*interp_)(std::log(e)), tol};
  }

 private:
  const VolumeSamples& s_;
  std::optional<boost::math::interpolators::pchip<std::vector<double>>> interp_;
};

}  // namespace

VolumeSamples h_function(const VolumeTable& V_T, const IFS& ifs, double g, const std::vector<double>& eps) {
  auto f = [&](double e) { return std::make_pair(V_T.volume(e), V_T.tolerance(e)); };
  auto s = renewal_difference(f, ifs, g, eps, VolumeKind::h, V_T.delta(), V_T.dim());
  s.region_tag = "T";
  return s;
}

VolumeSamples h_function(const VolumeSamples& V_T, const IFS& ifs, double g) {
  if (V_T.eps.empty()) throw ConfigError("empty V_T samples");
  SampleLookup look(V_T);
  bool interpolated = false;
  auto f = [&](double e) { return look(e, interpolated); };
  auto s = renewal_difference(f, ifs, g, V_T.eps, VolumeKind::h, V_T.delta, V_T.dim);
  s.region_tag = V_T.region_tag;
  s.interpolated = interpolated;
  return s;
}

VolumeSamples phi_function(const VolumeTable& F_on_O, const IFS& ifs, double g_tilde,
                           const std::vector<double>& eps) {
  auto f = [&](double e) { return std::make_pair(F_on_O.volume(e), F_on_O.tolerance(e)); };
  auto s = renewal_difference(f, ifs, g_tilde, eps, VolumeKind::phi, F_on_O.delta(), F_on_O.dim());
  s.region_tag = "O";
  return s;
}

VolumeSamples phi_function(const VolumeSamples& F_on_O, const IFS& ifs, double g_tilde) {
  if (F_on_O.eps.empty()) throw ConfigError("empty samples");
  SampleLookup look(F_on_O);
  bool interpolated = false;
  auto f = [&](double e) { return look(e, interpolated); };
  auto s = renewal_difference(f, ifs, g_tilde, F_on_O.eps, VolumeKind::phi, F_on_O.delta, F_on_O.dim);
  s.region_tag = F_on_O.region_tag;
  s.interpolated = interpolated;
  return s;
}

ParallelVolume::ParallelVolume(VolumeTable fine, double fine_limit, std::optional<VolumeTable> coarse,
                               double coarse_limit)
    : fine_(std::move(fine)), fine_limit_(fine_limit), coarse_(std::move(coarse)), coarse_limit_(coarse_limit) {}

double ParallelVolume::volume(double eps) const {
  if (eps <= fine_limit_ || !coarse_) {
    if (eps > fine_limit_ * (1.0 + 1e-12))
      throw ResolutionError("eps beyond the padded raster: " + std::to_string(eps));
    return fine_.volume(eps);
  }
  if (eps > coarse_limit_ * (1.0 + 1e-12))
    throw ResolutionError("eps beyond the coarse raster: " + std::to_string(eps));
  return coarse_->volume(eps);
}

double ParallelVolume::tolerance(double eps) const {
  if (eps <= fine_limit_ || !coarse_) return fine_.tolerance(eps);
  return coarse_->tolerance(eps);
}

VolumeSamples gatzouras_Rd(const ParallelVolume& F, const IFS& ifs, const std::vector<double>& eps) {
  for (double e : eps)
    if (!(e > 0 && e <= 1.0 + 1e-12)) throw ConfigError("R_d is sampled on (0, 1]");
  auto f = [&](double e) { return std::make_pair(F.volume(e), F.tolerance(e)); };
  auto s = renewal_difference(f, ifs, 1.0, eps, VolumeKind::R_d, F.delta(), F.dim());
  s.region_tag = "plane";
  return s;
}

void write_csv(const VolumeSamples& s, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  os.precision(17);
  os << "eps,value,kind,delta,region_tag,tol\n";
  for (std::size_t i = 0; i < s.eps.size(); ++i)
    os << s.eps[i] << ',' << s.values[i] << ',' << to_string(s.kind) << ',' << s.delta << ','
       << s.region_tag << ',' << (i < s.tol.size() ? s.tol[i] : 0.0) << '\n';
}

}  // namespace ftl
