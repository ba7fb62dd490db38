#pragma once

#include "chns/forward.hpp"

namespace chns {

/// Desired states for the distributed problem (u_d, phi_d, u_f, phi_f) or
/// measurements for assimilation (u_M, phi_M, u_M^f, phi_M^f). The tracked
/// series hold one field per trajectory node.
struct CostTargets {
  VectorSeries velocity;
  ScalarSeries phase;
  VectorField final_velocity;
  ScalarField final_phase;

  /// Targets met exactly along `traj`.
  static CostTargets from_trajectory(const Trajectory& traj);
  /// Time-independent tracking targets with the same fields as terminal data.
  static CostTargets steady(const VectorField& velocity, const ScalarField& phase, int nodes);

  /// Throws GridMismatch unless every field lives on `grid` and the series
  /// have `nodes` entries.
  void check(const GridPtr& grid, int nodes) const;
};

}  // namespace chns
