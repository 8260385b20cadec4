#include "ftl/raster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>

#include "ftl/errors.hpp"
#include "ftl/parallel.hpp"

namespace ftl {

namespace {
constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// Rational number num/den with den > 0.
struct Rat {
  __int128 num;
  __int128 den;
};

inline bool rat_le(const Rat& a, const Rat& b) { return a.num * b.den <= b.num * a.den; }
inline bool rat_lt_int(const Rat& a, std::int64_t q) { return a.num < static_cast<__int128>(q) * a.den; }

// Lower envelope of parabolas (x - q)^2 + f[q] evaluated at integer x, exact in integers.
void envelope_1d(const std::int64_t* f, int n, std::int64_t* out, std::vector<int>& v,
                 std::vector<Rat>& z) {
  v.resize(static_cast<std::size_t>(n) + 1);
  z.resize(static_cast<std::size_t>(n) + 2);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] >= kInf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = {-1, 0};  // minus infinity, never compared
      continue;
    }
    Rat s{};
    while (true) {
      const std::int64_t vk = v[k];
      s.num = static_cast<__int128>(f[q]) + static_cast<__int128>(q) * q - f[vk] -
              static_cast<__int128>(vk) * vk;
      s.den = 2 * static_cast<__int128>(q - vk);
      if (k > 0 && rat_le(s, z[k])) {
        --k;
        continue;
      }
      break;
    }
    ++k;
    v[k] = q;
    z[k] = s;
  }
  if (k < 0) {
    std::fill(out, out + n, kInf);
    return;
  }
  int kk = 0;
  for (int q = 0; q < n; ++q) {
    while (kk < k && rat_lt_int(z[kk + 1], q)) ++kk;
    const std::int64_t d = q - v[kk];
    out[q] = d * d + f[v[kk]];
  }
}

DistanceField edt_from_sites(const GridGeometry& geo, const std::vector<std::uint8_t>& occ,
                             bool site_value) {
  const int nx = geo.nx, ny = geo.ny;
  std::vector<std::int64_t> tmp(geo.cells());
  bool any = false;
  for (std::uint8_t o : occ)
    if ((o != 0) == site_value) {
      any = true;
      break;
    }
  if (!any) throw ResolutionError("distance transform of a raster without sites");

  // Along x: 1D nearest-site distance by two sweeps.
  parallel_for(
      static_cast<std::size_t>(ny),
      [&](std::size_t j) {
        const std::size_t row = j * static_cast<std::size_t>(nx);
        std::int64_t last = -kInf;
        for (int i = 0; i < nx; ++i) {
          if ((occ[row + i] != 0) == site_value) last = i;
          tmp[row + i] = last > -kInf ? static_cast<std::int64_t>(i) - last : kInf;
        }
        last = kInf;
        for (int i = nx - 1; i >= 0; --i) {
          if ((occ[row + i] != 0) == site_value) last = i;
          if (last < kInf) tmp[row + i] = std::min(tmp[row + i], last - i);
        }
        for (int i = 0; i < nx; ++i) {
          const std::int64_t d = tmp[row + i];
          tmp[row + i] = d >= kInf ? kInf : d * d;
        }
      },
      16);

  DistanceField out{geo, std::vector<std::uint64_t>(geo.cells())};
  if (ny == 1) {
    for (std::size_t c = 0; c < tmp.size(); ++c) out.sq[c] = static_cast<std::uint64_t>(tmp[c]);
    return out;
  }
  // Along y: exact lower envelope, columns processed in blocks for locality.
  constexpr int kBlock = 16;
  const std::size_t blocks = (static_cast<std::size_t>(nx) + kBlock - 1) / kBlock;
  parallel_for(
      blocks,
      [&](std::size_t b) {
        const int i0 = static_cast<int>(b) * kBlock;
        const int w = std::min(kBlock, nx - i0);
        std::vector<std::int64_t> col(static_cast<std::size_t>(w) * ny), res(ny);
        std::vector<int> v;
        std::vector<Rat> z;
        for (int j = 0; j < ny; ++j)
          for (int c = 0; c < w; ++c)
            col[static_cast<std::size_t>(c) * ny + j] = tmp[geo.index(i0 + c, j)];
        for (int c = 0; c < w; ++c) {
          envelope_1d(&col[static_cast<std::size_t>(c) * ny], ny, res.data(), v, z);
          std::copy(res.begin(), res.end(), col.begin() + static_cast<std::ptrdiff_t>(c) * ny);
        }
        for (int j = 0; j < ny; ++j)
          for (int c = 0; c < w; ++c)
            out.sq[geo.index(i0 + c, j)] =
                static_cast<std::uint64_t>(col[static_cast<std::size_t>(c) * ny + j]);
      },
      1);
  return out;
}
}  // namespace

bool GridGeometry::locate(const Vec2& p, int& i, int& j) const {
  const double fx = std::floor((p.x - origin.x) / delta);
  const double fy = dim == 1 ? 0.0 : std::floor((p.y - origin.y) / delta);
  if (fx < 0 || fy < 0 || fx >= nx || fy >= ny) return false;
  i = static_cast<int>(fx);
  j = static_cast<int>(fy);
  return true;
}

bool GridGeometry::same_as(const GridGeometry& o) const {
  return dim == o.dim && nx == o.nx && ny == o.ny && delta == o.delta && origin.x == o.origin.x &&
         origin.y == o.origin.y;
}

GridGeometry GridGeometry::covering(const Box& b, double delta, int dim, double pad,
                                    std::size_t cap) {
  if (!(delta > 0)) throw ConfigError("resolution delta must be positive");
  if (b.empty()) throw ConfigError("cannot cover an empty box");
  GridGeometry g;
  g.dim = dim;
  g.delta = delta;
  const int pc = static_cast<int>(std::ceil(pad / delta));
  const double wx = std::ceil((b.hi.x - b.lo.x) / delta - 1e-9);
  if (wx + 2.0 * pc + 2 > 2e9) throw ResolutionError("grid extent overflows");
  g.nx = static_cast<int>(wx) + 2 * pc + 2;
  g.origin.x = b.lo.x - (pc + 0.5) * delta;
  if (dim == 1) {
    g.ny = 1;
    g.origin.y = -0.5 * delta;
  } else {
    const double wy = std::ceil((b.hi.y - b.lo.y) / delta - 1e-9);
    if (wy + 2.0 * pc + 2 > 2e9) throw ResolutionError("grid extent overflows");
    g.ny = static_cast<int>(wy) + 2 * pc + 2;
    g.origin.y = b.lo.y - (pc + 0.5) * delta;
  }
  if (static_cast<double>(g.nx) * static_cast<double>(g.ny) > static_cast<double>(cap))
    throw ResolutionError("raster of " + std::to_string(g.nx) + " x " + std::to_string(g.ny) +
                          " cells exceeds the cell cap " + std::to_string(cap));
  return g;
}

GridGeometry GridGeometry::sub(int i0, int j0, int snx, int sny) const {
  GridGeometry s = *this;
  s.origin = {origin.x + i0 * delta, origin.y + j0 * delta};
  s.nx = snx;
  s.ny = sny;
  return s;
}

std::size_t Grid::count() const {
  std::size_t n = 0;
  for (std::uint8_t o : occ) n += o != 0;
  return n;
}

std::size_t Grid::boundary_cells() const {
  std::size_t n = 0;
  const int nx = geo.nx, ny = geo.ny;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!at(i, j)) continue;
      bool b = i == 0 || i == nx - 1 || !at(i - 1, j) || !at(i + 1, j);
      if (geo.dim == 2) b = b || j == 0 || j == ny - 1 || !at(i, j - 1) || !at(i, j + 1);
      n += b;
    }
  return n;
}

CellRect Grid::occupied_rect() const {
  CellRect r{geo.nx, geo.ny, 0, 0};
  for (int j = 0; j < geo.ny; ++j)
    for (int i = 0; i < geo.nx; ++i)
      if (at(i, j)) {
        r.i0 = std::min(r.i0, i);
        r.j0 = std::min(r.j0, j);
        r.i1 = std::max(r.i1, i + 1);
        r.j1 = std::max(r.j1, j + 1);
      }
  if (r.i1 == 0) return {};
  return r;
}

bool Grid::border_occupied() const {
  for (int i = 0; i < geo.nx; ++i)
    if (at(i, 0) || at(i, geo.ny - 1)) return true;
  for (int j = 0; j < geo.ny; ++j)
    if (at(0, j) || at(geo.nx - 1, j)) return true;
  return false;
}

namespace {
template <class Op>
Grid combine(const Grid& a, const Grid& b, Op op) {
  if (!a.geo.same_as(b.geo)) throw ConfigError("grid geometries differ");
  Grid out(a.geo);
  for (std::size_t c = 0; c < out.occ.size(); ++c) out.occ[c] = op(a.occ[c] != 0, b.occ[c] != 0);
  return out;
}
}  // namespace

Grid grid_union(const Grid& a, const Grid& b) {
  return combine(a, b, [](bool x, bool y) { return x || y; });
}
Grid grid_intersection(const Grid& a, const Grid& b) {
  return combine(a, b, [](bool x, bool y) { return x && y; });
}
Grid grid_difference(const Grid& a, const Grid& b) {
  return combine(a, b, [](bool x, bool y) { return x && !y; });
}

Grid dilate(const Grid& g, int r) {
  const int nx = g.geo.nx, ny = g.geo.ny;
  Grid rows(g.geo);
  for (int j = 0; j < ny; ++j) {
    int last = -1000000000;
    for (int i = 0; i < nx; ++i) {
      if (g.at(i, j)) last = i;
      if (i - last <= r) rows.occ[g.geo.index(i, j)] = 1;
    }
    last = 2000000000;
    for (int i = nx - 1; i >= 0; --i) {
      if (g.at(i, j)) last = i;
      if (last - i <= r) rows.occ[g.geo.index(i, j)] = 1;
    }
  }
  if (g.geo.dim == 1) return rows;
  Grid out(g.geo);
  for (int i = 0; i < nx; ++i) {
    int last = -1000000000;
    for (int j = 0; j < ny; ++j) {
      if (rows.at(i, j)) last = j;
      if (j - last <= r) out.occ[g.geo.index(i, j)] = 1;
    }
    last = 2000000000;
    for (int j = ny - 1; j >= 0; --j) {
      if (rows.at(i, j)) last = j;
      if (last - j <= r) out.occ[g.geo.index(i, j)] = 1;
    }
  }
  return out;
}

Grid crop(const Grid& g, const GridGeometry& sub, int i0, int j0) {
  Grid out(sub);
  for (int j = 0; j < sub.ny; ++j)
    for (int i = 0; i < sub.nx; ++i) {
      const int gi = i + i0, gj = j + j0;
      if (gi >= 0 && gj >= 0 && gi < g.geo.nx && gj < g.geo.ny)
        out.occ[sub.index(i, j)] = g.occ[g.geo.index(gi, gj)];
    }
  return out;
}

double DistanceField::value(std::size_t idx) const {
  const std::uint64_t s = sq[idx];
  if (s >= static_cast<std::uint64_t>(kInf)) return std::numeric_limits<double>::infinity();
  return std::sqrt(static_cast<double>(s)) * geo.delta;
}

std::uint64_t DistanceField::max_sq() const {
  std::uint64_t m = 0;
  for (auto s : sq) m = std::max(m, s);
  return m;
}

DistanceField distance_transform(const Grid& g) { return edt_from_sites(g.geo, g.occ, true); }
DistanceField complement_distance(const Grid& g) { return edt_from_sites(g.geo, g.occ, false); }

std::uint64_t sq_threshold(double e_cells, double shift_cells) {
  const double t = e_cells + shift_cells;
  if (t < 0) return std::numeric_limits<std::uint64_t>::max();  // sentinel: nothing qualifies
  const double s = t * t;
  if (s >= 1.8e19) return std::numeric_limits<std::uint64_t>::max() - 1;
  return static_cast<std::uint64_t>(std::floor(s * (1.0 + 1e-13)));
}

double parallel_volume(const DistanceField& f, double eps) {
  if (eps < 0) throw ConfigError("eps must be nonnegative");
  const std::uint64_t thr = sq_threshold(eps / f.geo.delta, 0.0);
  std::size_t n = 0;
  for (auto s : f.sq) n += s <= thr;
  return static_cast<double>(n) * f.geo.cell_volume();
}

double inner_parallel_volume(const Grid& U, double eps) {
  if (eps < 0) throw ConfigError("eps must be nonnegative");
  if (U.count() == 0) return 0.0;
  const DistanceField f = complement_distance(U);
  const double t = eps / U.geo.delta + 0.5;
  const std::uint64_t thr = sq_threshold(t, 0.0);
  std::size_t n = 0;
  for (std::size_t c = 0; c < f.sq.size(); ++c) n += U.occ[c] && f.sq[c] <= thr;
  return static_cast<double>(n) * U.geo.cell_volume();
}

double inradius(const Grid& U, const DistanceField& complement) {
  std::uint64_t best = 0;
  bool any = false;
  for (std::size_t c = 0; c < U.occ.size(); ++c)
    if (U.occ[c]) {
      any = true;
      best = std::max(best, complement.sq[c]);
    }
  if (!any) throw ResolutionError("inradius of an empty region");
  return (std::sqrt(static_cast<double>(best)) - 0.5) * U.geo.delta;
}

double inradius(const Grid& U) {
  if (U.count() == 0) throw ResolutionError("inradius of an empty region");
  return inradius(U, complement_distance(U));
}

VolumeTable::VolumeTable(const DistanceField& f, const Grid* mask, double shift_cells,
                         std::size_t extra_cells)
    : delta_(f.geo.delta),
      shift_(shift_cells),
      dim_(f.geo.dim),
      cell_volume_(f.geo.cell_volume()),
      extra_(extra_cells) {
  if (mask && !mask->geo.same_as(f.geo)) throw ConfigError("mask geometry differs from field");
  std::vector<std::uint64_t> vals;
  vals.reserve(mask ? f.sq.size() / 4 : f.sq.size());
  for (std::size_t c = 0; c < f.sq.size(); ++c)
    if (!mask || mask->occ[c]) vals.push_back(f.sq[c]);
  masked_ = vals.size();
  std::sort(vals.begin(), vals.end());
  for (std::size_t k = 0; k < vals.size();) {
    std::size_t e = k;
    while (e < vals.size() && vals[e] == vals[k]) ++e;
    keys_.push_back(vals[k]);
    cum_.push_back(e);
    k = e;
  }
  if (mask) mask_boundary_ = mask->boundary_cells();
}

std::size_t VolumeTable::count(double eps) const {
  const std::uint64_t thr = sq_threshold(eps / delta_, shift_);
  if (thr == std::numeric_limits<std::uint64_t>::max()) return extra_;
  auto it = std::upper_bound(keys_.begin(), keys_.end(), thr);
  if (it == keys_.begin()) return extra_;
  return cum_[static_cast<std::size_t>(it - keys_.begin()) - 1] + extra_;
}

double VolumeTable::volume(double eps) const { return static_cast<double>(count(eps)) * cell_volume_; }

double VolumeTable::tolerance(double eps) const {
  const double h = 0.5 * delta_;
  const std::size_t hi = count(eps + h);
  const std::size_t lo = eps - h >= 0 ? count(eps - h) : extra_;
  return static_cast<double>(hi - lo + mask_boundary_) * cell_volume_;
}

double VolumeTable::total() const { return static_cast<double>(masked_ + extra_) * cell_volume_; }

double VolumeTable::max_distance() const {
  if (keys_.empty()) return 0.0;
  return std::max(0.0, std::sqrt(static_cast<double>(keys_.back())) - shift_) * delta_;
}

void write_pgm(const Grid& g, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path);
  os << "P5\n" << g.geo.nx << ' ' << g.geo.ny << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(g.geo.nx));
  for (int j = g.geo.ny - 1; j >= 0; --j) {
    for (int i = 0; i < g.geo.nx; ++i) row[i] = g.at(i, j) ? 255 : 0;
    os.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
}

void write_pgm(const DistanceField& f, double max_value, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path);
  os << "P5\n" << f.geo.nx << ' ' << f.geo.ny << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(f.geo.nx));
  for (int j = f.geo.ny - 1; j >= 0; --j) {
    for (int i = 0; i < f.geo.nx; ++i) {
      const double v = std::min(1.0, f.value(i, j) / max_value);
      row[i] = static_cast<unsigned char>(std::lround(255.0 * (1.0 - v)));
    }
    os.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
}

void write_occupancy_csv(const Grid& g, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  os << "i,j,x,y\n";
  os.precision(17);
  for (int j = 0; j < g.geo.ny; ++j)
    for (int i = 0; i < g.geo.nx; ++i)
      if (g.at(i, j)) {
        const Vec2 c = g.geo.center(i, j);
        os << i << ',' << j << ',' << c.x << ',' << c.y << '\n';
      }
}

void write_distance_raw(const DistanceField& f, const std::string& base_path) {
  {
    std::ofstream os(base_path + ".raw", std::ios::binary);
    if (!os) throw ConfigError("cannot write " + base_path + ".raw");
    std::vector<float> buf(f.sq.size());
    for (std::size_t c = 0; c < buf.size(); ++c) buf[c] = static_cast<float>(f.value(c));
    os.write(reinterpret_cast<const char*>(buf.data()),
             static_cast<std::streamsize>(buf.size() * sizeof(float)));
  }
  nlohmann::json h;
  h["dtype"] = "float32";
  h["endianness"] = "little";
  h["layout"] = "row-major, j outer, i inner, j = 0 at origin";
  h["nx"] = f.geo.nx;
  h["ny"] = f.geo.ny;
  h["dim"] = f.geo.dim;
  h["origin"] = {f.geo.origin.x, f.geo.origin.y};
  h["delta"] = f.geo.delta;
  h["units"] = "length";
  std::ofstream os(base_path + ".json");
  os << h.dump(2) << '\n';
}

}  // namespace ftl
