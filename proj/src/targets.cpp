#include "chns/targets.hpp"

namespace chns {

CostTargets CostTargets::from_trajectory(const Trajectory& traj) {
  CostTargets t;
  for (const auto& s : traj.states) {
    t.velocity.push_back(s.u);
    t.phase.push_back(s.phi);
  }
  t.final_velocity = traj.final_state().u;
  t.final_phase = traj.final_state().phi;
  return t;
}

CostTargets CostTargets::steady(const VectorField& velocity, const ScalarField& phase, int nodes) {
  CostTargets t;
  t.velocity.assign(static_cast<std::size_t>(nodes), velocity);
  t.phase.assign(static_cast<std::size_t>(nodes), phase);
  t.final_velocity = velocity;
  t.final_phase = phase;
  return t;
}

void CostTargets::check(const GridPtr& grid, int nodes) const {
  if (static_cast<int>(velocity.size()) != nodes || static_cast<int>(phase.size()) != nodes) {
    throw GridMismatch("CostTargets: series do not match the trajectory time grid");
  }
  for (const auto& v : velocity) require_same_grid(grid, v.grid(), "CostTargets");
  for (const auto& f : phase) require_same_grid(grid, f.grid(), "CostTargets");
  require_same_grid(grid, final_velocity.grid(), "CostTargets");
  require_same_grid(grid, final_phase.grid(), "CostTargets");
}

}  // namespace chns
