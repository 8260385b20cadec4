#pragma once

#include <cstddef>

#include "ftl/raster.hpp"

namespace ftl {

/// Boundary statistics of the sublevel set {sqrt(sq) - shift <= eps / delta} of a distance
/// field, polygonized by marching squares on the cell-center lattice.
struct LevelSetStats {
  /// H^{d-1} of the boundary inside the mask (length units; 0 in d = 1).
  double length = 0.0;
  /// Signed exterior turning / 2 pi inside the mask (d = 2); half the number of boundary
  /// points inside the mask (d = 1).
  double turning = 0.0;
  /// Sum of |turning| contributions / 2 pi (d = 2); equals turning in d = 1.
  double variation = 0.0;
  /// The boundary reaches the outermost cell ring (the grid is too small for this eps).
  bool border_contact = false;
  /// Every cell of the outermost ring lies in the set.
  bool border_inside = false;
  std::size_t crossings = 0;
};

/// Level-set statistics with the set's inside on the left of every contour segment.
/// Turning is assigned to masks by the cell nearest each crossing, length by the cell
/// nearest each segment midpoint. Ambiguous saddles separate diagonal inside corners
/// (4-connected set, 8-connected complement).
LevelSetStats level_set_stats(const DistanceField& f, double eps, double shift_cells = 0.0,
                              const Grid* mask = nullptr);

/// Euler characteristic of the sublevel set: vertices - edges + faces of the cubical
/// complex on inside cells with 4-adjacency.
long euler_characteristic(const DistanceField& f, double eps, double shift_cells = 0.0);
long euler_characteristic(const Grid& g);

/// Length of {f = eps} inside mask (d = 2). Throws ResolutionError on border contact.
double boundary_length(const DistanceField& f, double eps, const Grid* mask = nullptr);

struct EulerTurning {
  long chi = 0;
  double turning = 0.0;
  double variation = 0.0;
};
/// chi of {f <= eps} together with the masked turning. Throws ResolutionError on border contact.
EulerTurning euler_and_turning(const DistanceField& f, double eps, const Grid* mask = nullptr);

}  // namespace ftl
