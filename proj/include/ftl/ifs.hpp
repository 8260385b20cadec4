#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ftl/geometry.hpp"

namespace ftl {

/// Contracting similarity x -> ratio * Q x + t. In one dimension Q is diag(+-1, 1).
struct Similarity {
  double ratio = 0.5;
  Mat2 Q = Mat2::identity();
  Vec2 t{};

  Vec2 apply(const Vec2& x) const { return Q * x * ratio + t; }
  Vec2 apply_inverse(const Vec2& y) const { return Q.transpose() * (y - t) * (1.0 / ratio); }
  /// (this o other)(x) = this(other(x)).
  Similarity compose(const Similarity& other) const {
    return {ratio * other.ratio, Q * other.Q, apply(other.t)};
  }
  /// Inverse map; its ratio exceeds one.
  Similarity inverse() const {
    const Mat2 Qt = Q.transpose();
    const Vec2 ti = Qt * t * (-1.0 / ratio);
    return {1.0 / ratio, Qt, ti};
  }
  Box image(const Box& b) const;
  Vec2 fixed_point() const;
  bool orthogonal(double tol = 1e-12) const;
};

/// Iterated function system of at least two contracting similarities on R^dim.
struct IFS {
  int dim = 2;
  std::vector<Similarity> maps;

  std::size_t size() const { return maps.size(); }
  std::vector<double> ratios() const;
  /// Throws ConfigError when the system violates the type invariants.
  void validate() const;
};

/// Finite word over {0,...,N-1}; printed 1-based.
using Word = std::vector<std::uint8_t>;
std::string word_to_string(const Word& w);

struct LatticeVerdict {
  bool lattice = false;
  std::optional<double> base;  ///< generator h of the group spanned by -ln r_i
  double tol = 1e-9;
  long max_denominator = 1000000;
  /// Largest residual among the accepted rational relations (0 when nonlattice).
  double worst_residual = 0.0;
  std::string note() const;
};

struct DimensionData {
  double D = 0.0;
  double eta = 0.0;
  LatticeVerdict lattice;
};

/// Root of sum r_i^s = 1 by bisection on [0, 2 dim] followed by Newton polishing.
double similarity_dimension(const IFS& ifs, double tol = 1e-12);
/// eta = sum r_i^D |ln r_i|.
double eta(const IFS& ifs, double D);
/// Continued-fraction commensurability test of ln r_i / ln r_1.
LatticeVerdict is_lattice(const IFS& ifs, double tol = 1e-9, long max_denominator = 1000000);
DimensionData dimension_data(const IFS& ifs);

/// Depth-first enumeration of the prefix-minimal words for which stop() holds.
/// stop and emit receive the word together with the composed similarity S_sigma.
/// Throws ConvergenceError when a branch exceeds max_length.
void enumerate_words(const IFS& ifs,
                     const std::function<bool(const Word&, const Similarity&)>& stop,
                     const std::function<void(const Word&, const Similarity&)>& emit,
                     std::size_t max_length = 64);

/// Closed ball (center, radius) mapped into itself by every map; contains the attractor.
struct InvariantBall {
  Vec2 center;
  double radius = 0.0;
};
InvariantBall invariant_ball(const IFS& ifs);

/// Points S_sigma(x0) of the attractor, x0 the fixed point of the first map, over
/// prefix-minimal words with r_sigma * diameter <= spacing. Optional first-letter filter and
/// pre-applied similarity (pre o S_sigma)(x0) for neighbor images.
void attractor_points(const IFS& ifs, double spacing,
                      const std::function<void(const Vec2&)>& sink,
                      int first_letter = -1,
                      const Similarity* pre = nullptr);

/// Attractor bounding box estimated from points with spacing = tol (margin added).
Box attractor_bbox(const IFS& ifs, double tol = 5e-3);

}  // namespace ftl
