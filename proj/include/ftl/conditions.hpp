#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "ftl/ifs.hpp"
#include "ftl/raster.hpp"
#include "ftl/region.hpp"

namespace ftl {

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

/// Resolution-qualified verdict of a structural hypothesis.
struct CheckReport {
  std::string name;  ///< osc, strong, compatible, projection, boundary_null
  Verdict verdict = Verdict::inconclusive;
  nlohmann::json witness;  ///< point, eps-interval or defect measurement (always set on fail)
  double delta = 0.0;
  std::string detail;
  bool passed() const { return verdict == Verdict::pass; }
};

nlohmann::json to_json(const CheckReport& r);

/// S_i O inside O at every cell center, pairwise overlaps confined to seam cells. Image cells
/// whose preimage is less than 1/r_i cells deep in O (unresolved pieces) only count as seams.
CheckReport check_osc(const IFS& ifs, const Region& O, const GridGeometry& geo);

/// Some cell of O within delta of F lies at least three cells deeper inside O than its
/// distance to F (F meets O, not only its boundary).
CheckReport check_strong(const Grid& O, const DistanceField& F_field);

/// Every boundary cell of G lies within tol_cells * delta of F.
CheckReport check_compatibility(const Grid& G, const DistanceField& F_field, int tol_cells = 2);

/// Defect lambda((F_eps minus (S_i F)_eps) cap S_i O) for sampled eps <= r_i g~, compared with
/// 4 delta^d times the boundary cell count of S_i O.
CheckReport check_projection(const IFS& ifs, const Region& O, const DistanceField& F_field,
                             const std::vector<double>& eps, double g_tilde);

/// Boundary length (k = 1) or turning variation (k = 0) of F_eps running along the boundary of
/// O, extrapolated to zero collar width from two- and four-cell collars, stays below
/// 0.05 H^{d-1}(bd O) + 8 delta (k = 1) or a quarter turn (k = 0).
/// Passes trivially in d = 1.
CheckReport check_boundary_null(const Grid& O, const DistanceField& F_field, int k,
                                const std::vector<double>& eps);

}  // namespace ftl
