#pragma once

#include <optional>
#include <vector>

#include "chns/control_signal.hpp"
#include "chns/physics.hpp"

namespace chns {

struct SolverConfig {
  double nu = 0.1;
  double dt = 1e-3;
  double T = 0.5;
  /// Implicit Cahn-Hilliard stabilization S; unset means S = a.
  std::optional<double> stabilization;
  bool dealias = true;

  /// T / dt, which must be an integer to within roundoff.
  int steps() const;
};

/// Everything a sweep needs besides the state: grid, kernel, potential and
/// solver settings. Construction certifies the kernel/potential pair.
class Model {
 public:
  Model(GridPtr grid, Kernel kernel, Potential potential, SolverConfig solver);

  const GridPtr& grid() const { return grid_; }
  const Kernel& kernel() const { return kernel_; }
  const Potential& potential() const { return potential_; }
  const SolverConfig& solver() const { return solver_; }
  const AssumptionReport& assumptions() const { return report_; }
  /// Kernel weight a(x) and the stabilization constant actually used.
  const ScalarField& weight_a() const { return a_; }
  double stabilization() const { return stabilization_; }
  double dt() const { return solver_.dt; }
  int steps() const { return steps_; }

  /// Same physics with a different time step and horizon.
  Model with_time(double dt, double T) const;

 private:
  GridPtr grid_;
  Kernel kernel_;
  Potential potential_;
  SolverConfig solver_;
  AssumptionReport report_;
  ScalarField a_;
  double stabilization_ = 0.0;
  int steps_ = 0;
};

struct FlowState {
  VectorField u;
  ScalarField phi;
  double t = 0.0;
};

struct StepDiagnostics {
  double t = 0.0;
  double energy = 0.0;
  double kinetic = 0.0;
  double enstrophy = 0.0;
  double mass = 0.0;
  /// Energy-identity residual of the step that produced this node (NaN at t = 0).
  double residual = 0.0;
};

/// Dense forward trajectory; states[n] lives at t = n dt.
struct Trajectory {
  double dt = 0.0;
  std::vector<FlowState> states;
  std::vector<StepDiagnostics> diagnostics;

  int steps() const { return static_cast<int>(states.size()) - 1; }
  const FlowState& operator[](int n) const { return states.at(static_cast<std::size_t>(n)); }
  const FlowState& final_state() const { return states.back(); }
};

/// One IMEX step. `control` and `forcing` may be empty (zero).
///
/// Velocity: (1 + nu dt |k|^2) u^{n+1} = u^n + dt P[D(-(u.grad)u + mu grad phi) + h + U].
/// Phase:    (1 + S dt |k|^2) phi^{n+1} = phi^n + dt Lap D(mu - S phi) - dt div D(u phi).
/// D is the 2/3 truncation when dealiasing is on.
FlowState step(const Model& model, const FlowState& state, const VectorField& control,
               const VectorField& forcing);

/// Runs model.steps() steps. A distributed control supplies U^n on step
/// n -> n+1; an initial control replaces the initial velocity by its
/// projection. `forcing` is either empty or has one entry per node.
Trajectory simulate(const Model& model, const FlowState& initial, const ControlSignal& control,
                    const VectorSeries& forcing = {});

/// 1/2 ||u||^2 + 1/2 (<a phi, phi> - <J*phi, phi>) + int F(phi).
double energy(const FlowState& state, const Kernel& kernel, const Potential& potential);

/// r_n = (E^{n+1} - E^n)/dt + nu ||grad u^{n+1}||^2 + ||grad D mu^n||^2 - <h^n + U^n, u^{n+1}>
/// for n = 0..N-1, with D the truncation the step applies to mu.
std::vector<double> energy_identity_residual(const Model& model, const Trajectory& traj,
                                             const ControlSignal& control,
                                             const VectorSeries& forcing = {});

/// Distance used by the stability estimate: ||du||^2 + ||dphi||_{V'}^2.
double state_distance_sq(const FlowState& a, const FlowState& b);

struct DependenceReport {
  /// Initial distance, square root of state_distance_sq at t = 0.
  double delta = 0.0;
  /// sup_n of the distance between the two trajectories.
  double sup_difference = 0.0;
  /// sup_n distance^2 / delta^2.
  double amplification = 0.0;
  /// Distance at every node.
  std::vector<double> profile;
};

/// Runs `initial` and `initial` + (du0, dphi0) with the same control and
/// forcing and measures how far the trajectories separate.
DependenceReport continuous_dependence(const Model& model, const FlowState& initial,
                                       const VectorField& du0, const ScalarField& dphi0,
                                       const ControlSignal& control = {},
                                       const VectorSeries& forcing = {});

/// max |u| dt / dx over both directions.
double cfl_number(const VectorField& u, double dt);

}  // namespace chns
