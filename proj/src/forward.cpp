#include "chns/forward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sweep_detail.hpp"

namespace chns {

int SolverConfig::steps() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("solver.dt must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("solver.T must be positive");
  if (dt > T) throw ValidationError("solver.dt must not exceed solver.T");
  const double ratio = T / dt;
  const long long n = std::llround(ratio);
  if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio) {
    throw ValidationError("solver.T must be an integer multiple of solver.dt");
  }
  return static_cast<int>(n);
}

Model::Model(GridPtr grid, Kernel kernel, Potential potential, SolverConfig solver)
    : grid_(std::move(grid)),
      kernel_(std::move(kernel)),
      potential_(std::move(potential)),
      solver_(solver) {
  require_same_grid(grid_, kernel_.grid(), "Model");
  if (!(solver_.nu > 0.0) || !std::isfinite(solver_.nu)) {
    throw ValidationError("solver.nu must be positive");
  }
  steps_ = solver_.steps();
  report_ = validate_assumptions(kernel_, potential_);
  a_ = kernel_weight_a(kernel_, grid_);
  if (solver_.stabilization) {
    if (!(*solver_.stabilization >= 0.0)) throw ValidationError("solver.stabilization must be >= 0");
    stabilization_ = *solver_.stabilization;
  } else {
    stabilization_ = kernel_.mass();
  }
}

Model Model::with_time(double dt, double T) const {
  SolverConfig s = solver_;
  s.dt = dt;
  s.T = T;
  return Model(grid_, kernel_, potential_, s);
}

double state_distance_sq(const FlowState& a, const FlowState& b) {
  const VectorField du = a.u - b.u;
  return inner(du, du) + dual_norm_sq(a.phi - b.phi);
}

DependenceReport continuous_dependence(const Model& model, const FlowState& initial,
                                       const VectorField& du0, const ScalarField& dphi0,
                                       const ControlSignal& control, const VectorSeries& forcing) {
  FlowState shifted = initial;
  shifted.u += leray_project(du0);
  shifted.phi += dphi0;
  const Trajectory a = simulate(model, initial, control, forcing);
  const Trajectory b = simulate(model, shifted, control, forcing);
  DependenceReport rep;
  rep.profile.reserve(a.states.size());
  for (std::size_t n = 0; n < a.states.size(); ++n) {
    rep.profile.push_back(std::sqrt(state_distance_sq(a.states[n], b.states[n])));
  }
  rep.delta = rep.profile.front();
  rep.sup_difference = *std::max_element(rep.profile.begin(), rep.profile.end());
  if (!(rep.delta > 0.0)) throw ValidationError("continuous_dependence: perturbation is zero");
  rep.amplification = rep.sup_difference * rep.sup_difference / (rep.delta * rep.delta);
  return rep;
}

double cfl_number(const VectorField& u, double dt) {
  const auto& g = *u.grid();
  return std::max(u.x().max_abs() * dt / g.dx(), u.y().max_abs() * dt / g.dy());
}

FlowState step(const Model& model, const FlowState& state, const VectorField& control,
               const VectorField& forcing) {
  const GridPtr& grid = model.grid();
  require_same_grid(grid, state.u.grid(), "step");
  require_same_grid(grid, state.phi.grid(), "step");
  if (!state.u.finite() || !state.phi.finite()) throw NumericError("step: non-finite state");
  const double dt = model.dt();
  const double cfl = cfl_number(state.u, dt);
  if (cfl > 1.0) {
    throw StabilityError("step: CFL number " + std::to_string(cfl) + " exceeds 1 at t = " +
                         std::to_string(state.t));
  }
  const bool trunc = model.solver().dealias;
  const double S = model.stabilization();

  const ScalarField& phi = state.phi;
  const VectorField& u = state.u;
  const VectorField dphi = grad(phi);
  const ScalarField mu = chemical_potential(phi, model.kernel(), model.potential());
  const detail::Jacobian du = detail::jacobian(u);

  ScalarField nx(grid), ny(grid);
  for (std::size_t k = 0; k < nx.size(); ++k) {
    nx[k] = -(u.x()[k] * du.xx[k] + u.y()[k] * du.xy[k]) + mu[k] * dphi.x()[k];
    ny[k] = -(u.x()[k] * du.yx[k] + u.y()[k] * du.yy[k]) + mu[k] * dphi.y()[k];
  }
  Spectrum fx = detail::spectrum_of(nx, trunc);
  Spectrum fy = detail::spectrum_of(ny, trunc);
  for (const VectorField* extra : {&control, &forcing}) {
    if (extra->empty()) continue;
    require_same_grid(grid, extra->grid(), "step");
    spectral::axpy(fx, 1.0, transform(extra->x()));
    spectral::axpy(fy, 1.0, transform(extra->y()));
  }

  FlowState next;
  next.t = state.t + dt;
  next.u = detail::implicit_velocity_update(u, fx, fy, dt, model.solver().nu * dt);

  ScalarField g = mu;
  g.axpy(-S, phi);
  next.phi = detail::implicit_phase_update(phi, detail::spectrum_of(g, trunc),
                                           detail::spectrum_of(hadamard(u.x(), phi), trunc),
                                           detail::spectrum_of(hadamard(u.y(), phi), trunc), dt,
                                           S * dt);
  if (!next.u.finite() || !next.phi.finite()) {
    throw NumericError("step: non-finite state at t = " + std::to_string(next.t));
  }
  return next;
}

double energy(const FlowState& state, const Kernel& kernel, const Potential& potential) {
  const ScalarField& phi = state.phi;
  const ScalarField a = kernel_weight_a(kernel, phi.grid());
  const double kinetic = 0.5 * inner(state.u, state.u);
  const double nonlocal = 0.5 * (inner(hadamard(a, phi), phi) - inner(convolve(kernel.symbol(), phi), phi));
  double bulk = 0.0;
  for (double s : phi.values()) bulk += potential.F(s);
  return kinetic + nonlocal + bulk * phi.grid()->cell_area();
}

namespace {

const VectorField& node_or_empty(const VectorSeries& series, int n) {
  static const VectorField none;
  return series.empty() ? none : series[static_cast<std::size_t>(n)];
}

const VectorField& control_at(const ControlSignal& control, int n) {
  static const VectorField none;
  if (control.empty() || control.kind() == ControlSignal::Kind::initial) return none;
  return control[n];
}

double work_rate(const VectorField& control, const VectorField& forcing, const VectorField& u) {
  double w = 0.0;
  if (!control.empty()) w += inner(control, u);
  if (!forcing.empty()) w += inner(forcing, u);
  return w;
}

double step_residual(const Model& model, const FlowState& s0, const FlowState& s1, double e0,
                     double e1, const VectorField& control, const VectorField& forcing) {
  const ScalarField mu = chemical_potential(s0.phi, model.kernel(), model.potential());
  return (e1 - e0) / model.dt() + model.solver().nu * gradient_norm_sq(s1.u) +
         gradient_norm_sq(model.solver().dealias ? dealias(mu) : mu) - work_rate(control, forcing, s1.u);
}

StepDiagnostics diagnose(const Model& model, const FlowState& s) {
  StepDiagnostics d;
  d.t = s.t;
  d.energy = energy(s, model.kernel(), model.potential());
  d.kinetic = 0.5 * inner(s.u, s.u);
  d.enstrophy = gradient_norm_sq(s.u);
  d.mass = s.phi.mean();
  d.residual = std::numeric_limits<double>::quiet_NaN();
  return d;
}

void check_series(const Model& model, const ControlSignal& control, const VectorSeries& forcing) {
  const int nodes = model.steps() + 1;
  if (!forcing.empty() && static_cast<int>(forcing.size()) != nodes) {
    throw GridMismatch("simulate: forcing must have one entry per trajectory node");
  }
  if (!control.empty() && control.kind() == ControlSignal::Kind::distributed) {
    if (control.nodes() != nodes || std::abs(control.dt() - model.dt()) > 1e-12 * model.dt()) {
      throw GridMismatch("simulate: control does not match the trajectory time grid");
    }
  }
}

}  // namespace

Trajectory simulate(const Model& model, const FlowState& initial, const ControlSignal& control,
                    const VectorSeries& forcing) {
  check_series(model, control, forcing);
  Trajectory traj;
  traj.dt = model.dt();
  const int n_steps = model.steps();
  traj.states.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.diagnostics.reserve(static_cast<std::size_t>(n_steps) + 1);

  FlowState s0 = initial;
  s0.t = 0.0;
  if (!control.empty() && control.kind() == ControlSignal::Kind::initial) {
    s0.u = leray_project(control.initial_value());
  }
  traj.states.push_back(s0);
  traj.diagnostics.push_back(diagnose(model, s0));

  for (int n = 0; n < n_steps; ++n) {
    const VectorField& U = control_at(control, n);
    const VectorField& h = node_or_empty(forcing, n);
    FlowState next = step(model, traj.states.back(), U, h);
    next.t = (n + 1) * model.dt();
    StepDiagnostics d = diagnose(model, next);
    d.residual = step_residual(model, traj.states.back(), next, traj.diagnostics.back().energy,
                               d.energy, U, h);
    traj.states.push_back(std::move(next));
    traj.diagnostics.push_back(d);
  }
  return traj;
}

std::vector<double> energy_identity_residual(const Model& model, const Trajectory& traj,
                                             const ControlSignal& control,
                                             const VectorSeries& forcing) {
  if (traj.steps() != model.steps()) throw ReplayError("energy_identity_residual: step count mismatch");
  check_series(model, control, forcing);
  std::vector<double> r;
  r.reserve(static_cast<std::size_t>(traj.steps()));
  double e0 = energy(traj[0], model.kernel(), model.potential());
  for (int n = 0; n < traj.steps(); ++n) {
    const double e1 = energy(traj[n + 1], model.kernel(), model.potential());
    r.push_back(step_residual(model, traj[n], traj[n + 1], e0, e1, control_at(control, n),
                              node_or_empty(forcing, n)));
    e0 = e1;
  }
  return r;
}

}  // namespace chns
