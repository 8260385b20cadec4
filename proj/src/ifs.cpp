#include "ftl/ifs.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ftl/errors.hpp"

namespace ftl {

Box Similarity::image(const Box& b) const {
  Box out;
  out.include(apply(b.lo));
  out.include(apply(b.hi));
  out.include(apply({b.lo.x, b.hi.y}));
  out.include(apply({b.hi.x, b.lo.y}));
  return out;
}

Vec2 Similarity::fixed_point() const {
  // Solve (I - rQ) x = t.
  const Mat2 A{1.0 - ratio * Q.a, -ratio * Q.b, -ratio * Q.c, 1.0 - ratio * Q.d};
  const double det = A.det();
  return {(A.d * t.x - A.b * t.y) / det, (-A.c * t.x + A.a * t.y) / det};
}

bool Similarity::orthogonal(double tol) const {
  const Mat2 P = Q.transpose() * Q;
  return std::abs(P.a - 1) <= tol && std::abs(P.d - 1) <= tol && std::abs(P.b) <= tol &&
         std::abs(P.c) <= tol;
}

std::vector<double> IFS::ratios() const {
  std::vector<double> r;
  r.reserve(maps.size());
  for (const auto& m : maps) r.push_back(m.ratio);
  return r;
}

void IFS::validate() const {
  if (dim != 1 && dim != 2) throw ConfigError("ambient dimension must be 1 or 2");
  if (maps.size() < 2) throw ConfigError("an IFS needs at least two maps");
  if (maps.size() > 255) throw ConfigError("at most 255 maps are supported");
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto& m = maps[i];
    if (!(m.ratio > 0.0 && m.ratio < 1.0))
      throw ConfigError("map " + std::to_string(i + 1) + ": ratio must lie in (0,1)");
    if (!m.orthogonal(1e-12))
      throw ConfigError("map " + std::to_string(i + 1) + ": linear part is not orthogonal");
    if (dim == 1 && (m.Q.b != 0.0 || m.Q.c != 0.0 || m.Q.d != 1.0 || m.t.y != 0.0))
      throw ConfigError("map " + std::to_string(i + 1) + ": not a one-dimensional similarity");
  }
}

std::string word_to_string(const Word& w) {
  if (w.empty()) return "()";
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << '.';
    os << static_cast<int>(w[i]) + 1;
  }
  return os.str();
}

std::string LatticeVerdict::note() const {
  std::ostringstream os;
  if (lattice) {
    os << "lattice: all ln r_i commensurable (base " << *base << ", relation residual <= " << tol
       << ", denominators <= " << max_denominator << ")";
  } else {
    os << "nonlattice at this precision: no integer relation with denominator <= "
       << max_denominator << " and residual <= " << tol;
  }
  return os.str();
}

double similarity_dimension(const IFS& ifs, double tol) {
  ifs.validate();
  if (!(tol > 0)) throw ConfigError("tolerance must be positive");
  const auto r = ifs.ratios();
  auto f = [&](double s) {
    double sum = 0.0;
    for (double ri : r) sum += std::pow(ri, s);
    return sum - 1.0;
  };
  const double lo = 0.0, hi = 2.0 * ifs.dim;
  if (!(f(lo) > 0.0) || !(f(hi) < 0.0))
    throw ConvergenceError("dimension equation is not bracketed by [0, 2d]");
  std::uintmax_t iters = 200;
  auto stop = [](double a, double b) { return std::abs(b - a) <= 1e-9; };
  const auto bracket = boost::math::tools::bisect(f, lo, hi, stop, iters);
  if (iters >= 200) throw ConvergenceError("bisection exceeded its iteration cap");
  auto fd = [&](double s) {
    double sum = 0.0, der = 0.0;
    for (double ri : r) {
      const double p = std::pow(ri, s);
      sum += p;
      der += p * std::log(ri);
    }
    return std::make_pair(sum - 1.0, der);
  };
  std::uintmax_t newton_iters = 50;
  const double guess = 0.5 * (bracket.first + bracket.second);
  double D = boost::math::tools::newton_raphson_iterate(fd, guess, bracket.first - 1e-9,
                                                         bracket.second + 1e-9, 50, newton_iters);
  if (std::abs(f(D)) > std::max(tol, 1e-15) * 10)
    throw ConvergenceError("dimension residual above tolerance");
  return D;
}

double eta(const IFS& ifs, double D) {
  double e = 0.0;
  for (double r : ifs.ratios()) e += std::pow(r, D) * std::abs(std::log(r));
  return e;
}

namespace {
// Smallest-denominator convergent p/q of x with |q x - p| <= tol, if any with q <= qmax.
std::optional<std::pair<long long, long long>> rational_relation(double x, double tol, long qmax,
                                                                 double* residual) {
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rem = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(rem);
    if (a > 1e12) break;
    const long long ai = static_cast<long long>(a);
    const long long p2 = ai * p1 + p0;
    const long long q2 = ai * q1 + q0;
    if (q2 > qmax) break;
    const double res = std::abs(static_cast<double>(q2) * x - static_cast<double>(p2));
    if (res <= tol) {
      *residual = res;
      return std::make_pair(p2, q2);
    }
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = rem - a;
    if (frac <= 0.0) break;
    rem = 1.0 / frac;
  }
  return std::nullopt;
}
}  // namespace

LatticeVerdict is_lattice(const IFS& ifs, double tol, long max_denominator) {
  if (!(tol > 0.0 && tol <= 1e-6)) throw ConfigError("lattice tolerance must lie in (0, 1e-6]");
  LatticeVerdict v;
  v.tol = tol;
  v.max_denominator = max_denominator;
  const auto r = ifs.ratios();
  const double l1 = -std::log(r[0]);
  std::vector<std::pair<long long, long long>> rel;
  double worst = 0.0;
  for (std::size_t i = 1; i < r.size(); ++i) {
    double res = 0.0;
    auto pq = rational_relation(-std::log(r[i]) / l1, tol, max_denominator, &res);
    if (!pq) return v;
    worst = std::max(worst, res);
    rel.push_back(*pq);
  }
  long long L = 1;
  for (const auto& [p, q] : rel) {
    L = std::lcm(L, q);
    if (L > max_denominator) return v;
  }
  long long g = L;
  for (const auto& [p, q] : rel) g = std::gcd(g, p * (L / q));
  v.lattice = true;
  v.base = l1 / static_cast<double>(L) * static_cast<double>(g);
  v.worst_residual = worst;
  return v;
}

DimensionData dimension_data(const IFS& ifs) {
  DimensionData d;
  d.D = similarity_dimension(ifs);
  d.eta = eta(ifs, d.D);
  d.lattice = is_lattice(ifs);
  return d;
}

void enumerate_words(const IFS& ifs,
                     const std::function<bool(const Word&, const Similarity&)>& stop,
                     const std::function<void(const Word&, const Similarity&)>& emit,
                     std::size_t max_length) {
  Word w;
  std::vector<Similarity> stack{Similarity{1.0, Mat2::identity(), {0.0, 0.0}}};
  // Explicit recursion over the first letter keeps the identity word out of the stream.
  std::function<void()> rec = [&]() {
    for (std::size_t i = 0; i < ifs.maps.size(); ++i) {
      w.push_back(static_cast<std::uint8_t>(i));
      const Similarity s = stack.back().compose(ifs.maps[i]);
      if (stop(w, s)) {
        emit(w, s);
      } else {
        if (w.size() >= max_length)
          throw ConvergenceError("word length cap reached: stop predicate never fired");
        stack.push_back(s);
        rec();
        stack.pop_back();
      }
      w.pop_back();
    }
  };
  rec();
}

InvariantBall invariant_ball(const IFS& ifs) {
  Vec2 c{};
  for (const auto& m : ifs.maps) c += m.fixed_point();
  c = c * (1.0 / static_cast<double>(ifs.maps.size()));
  double R = 0.0;
  for (const auto& m : ifs.maps) R = std::max(R, norm(m.apply(c) - c) / (1.0 - m.ratio));
  return {c, R};
}

void attractor_points(const IFS& ifs, double spacing, const std::function<void(const Vec2&)>& sink,
                      int first_letter, const Similarity* pre) {
  const InvariantBall ball = invariant_ball(ifs);
  const double diam = std::max(2.0 * ball.radius, 1e-300);
  const Vec2 x0 = ifs.maps[0].fixed_point();
  const double pre_ratio = pre ? pre->ratio : 1.0;
  if (pre_ratio * diam <= spacing) {
    sink(pre ? pre->apply(x0) : x0);
    return;
  }
  const Similarity root = pre ? *pre : Similarity{1.0, Mat2::identity(), {0.0, 0.0}};
  std::vector<Similarity> stack;
  stack.reserve(128);
  std::function<void(const Similarity&, int)> rec = [&](const Similarity& s, int depth) {
    const std::size_t n = ifs.maps.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (depth == 0 && first_letter >= 0 && static_cast<int>(i) != first_letter) continue;
      const Similarity c = s.compose(ifs.maps[i]);
      if (c.ratio * diam <= spacing) {
        sink(c.apply(x0));
      } else {
        rec(c, depth + 1);
      }
    }
  };
  rec(root, 0);
}

Box attractor_bbox(const IFS& ifs, double tol) {
  const InvariantBall ball = invariant_ball(ifs);
  const double spacing = std::max(tol, 1e-9) * std::max(ball.radius, 1e-12);
  Box b;
  attractor_points(ifs, spacing, [&](const Vec2& p) { b.include(p); });
  return b.padded(spacing);
}

}  // namespace ftl
