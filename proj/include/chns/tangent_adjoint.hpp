#pragma once

#include <vector>

#include "chns/targets.hpp"

namespace chns {

/// Linearized states (w, psi) on the base trajectory's time grid.
struct TangentTrajectory {
  double dt = 0.0;
  /// First node that was integrated; earlier entries are zero.
  int start = 0;
  VectorSeries w;
  ScalarSeries psi;

  int steps() const { return static_cast<int>(w.size()) - 1; }
};

enum class AdjointMode { distributed, assimilation };

/// Adjoint states (p, eta); p[n] and eta[n] live at t = n dt.
struct AdjointTrajectory {
  double dt = 0.0;
  AdjointMode mode = AdjointMode::distributed;
  VectorSeries p;
  ScalarSeries eta;

  int steps() const { return static_cast<int>(p.size()) - 1; }
};

/// Exact linearization of `step` around `base`, integrated from node
/// `start` with (w, psi) = (w0, psi0) there. A distributed delta_control
/// contributes delta U^n on step n -> n+1; an initial one is added to w0.
/// An empty delta_control is zero.
TangentTrajectory tangent_solve(const Model& model, const Trajectory& base,
                                const ControlSignal& delta_control, const VectorField& w0,
                                const ScalarField& psi0, int start = 0);

/// Backward sweep of the adjoint system from t = T to 0.
///
/// Velocity:  -p_t - nu Lap p + (grad u)^T p - (u.grad) p + eta grad phi + grad q = s_u
/// Phase:     -eta_t - (a + F''(phi)) Lap eta + J*Lap eta + J*(p.grad phi)
///            - (grad J*phi).p + (grad a.p) phi - u.grad eta = s_phi
///
/// distributed: s_u = -Lap(u - u_d), s_phi = phi - phi_d, p(T) = P(u(T) - u_f),
///              eta(T) = phi(T) - phi_f.
/// assimilation: s_u = u - u_M, s_phi = phi - phi_M, terminal data from the
///              final measurements.
///
/// Viscosity and a constant stabilization S Lap eta are implicit, everything
/// else is explicit at the later time level with base fields at the earlier.
AdjointTrajectory adjoint_solve(const Model& model, const Trajectory& base, AdjointMode mode,
                                const CostTargets& targets);

struct DualityReport {
  /// Directional derivative of the state part of the cost along the tangent.
  double state_pairing = 0.0;
  /// The same quantity through the adjoint: <delta U, p>.
  double control_pairing = 0.0;
  double gap = 0.0;
};

/// Compares the two pairings; gap = |lhs - rhs| / max(|lhs|, |rhs|), and 0
/// when both vanish. For assimilation, delta_control must be an initial
/// control.
DualityReport duality_gap(const Model& model, const Trajectory& base,
                          const ControlSignal& delta_control, AdjointMode mode,
                          const CostTargets& targets);

}  // namespace chns
