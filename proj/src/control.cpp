#include "chns/control.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "chns/synthetic.hpp"

namespace chns {

double cost_ocp(const Trajectory& traj, const ControlSignal& control, const CostTargets& targets,
                GradientForm form) {
  const int N = traj.steps();
  const GridPtr& grid = traj[0].u.grid();
  targets.check(grid, N + 1);
  const bool has_control = !control.empty();
  if (has_control) {
    if (control.kind() != ControlSignal::Kind::distributed || control.nodes() != N + 1) {
      throw GridMismatch("cost_ocp: control does not match the trajectory time grid");
    }
  }
  double acc = 0.0;
  for (int n = 0; n <= N; ++n) {
    const VectorField du = traj[n].u - targets.velocity[n];
    const double tracking = form == GradientForm::curl ? inner(curl2d(du), curl2d(du)) : gradient_norm_sq(du);
    const ScalarField dphi = traj[n].phi - targets.phase[n];
    double integrand = tracking + inner(dphi, dphi);
    if (has_control) integrand += inner(control[n], control[n]);
    acc += 0.5 * node_weight(n, N, traj.dt) * integrand;
  }
  const VectorField ef = traj[N].u - targets.final_velocity;
  const ScalarField pf = traj[N].phi - targets.final_phase;
  return acc + 0.5 * inner(ef, ef) + 0.5 * inner(pf, pf);
}

ControlSignal reduced_gradient_ocp(const ControlSignal& control, const AdjointTrajectory& adjoint) {
  if (control.kind() != ControlSignal::Kind::distributed || control.nodes() != adjoint.steps() + 1 ||
      std::abs(control.dt() - adjoint.dt) > 1e-12 * adjoint.dt) {
    throw GridMismatch("reduced_gradient_ocp: control and adjoint time grids differ");
  }
  ControlSignal g = control;
  for (int n = 0; n < g.nodes(); ++n) g[n] += adjoint.p[static_cast<std::size_t>(n)];
  return g;
}

void OptimizerConfig::validate() const {
  if (max_iters < 0) throw ValidationError("optimizer.max_iters must be >= 0");
  if (!(step0 > 0.0) || !std::isfinite(step0)) throw ValidationError("optimizer.step0 must be positive");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw ValidationError("optimizer.armijo_c must lie in (0, 1)");
  if (!(armijo_shrink > 0.0 && armijo_shrink < 1.0)) {
    throw ValidationError("optimizer.armijo_shrink must lie in (0, 1)");
  }
  if (!(grad_tol >= 0.0)) throw ValidationError("optimizer.grad_tol must be >= 0");
  if (!(radius > 0.0)) throw ValidationError("optimizer.radius must be positive");
}

DistributedControlProblem::DistributedControlProblem(Model model, FlowState initial,
                                                     CostTargets targets, VectorSeries forcing)
    : model_(std::move(model)),
      initial_(std::move(initial)),
      targets_(std::move(targets)),
      forcing_(std::move(forcing)) {
  targets_.check(model_.grid(), model_.steps() + 1);
}

ControlSignal DistributedControlProblem::zero_control() const {
  return ControlSignal::zeros(model_.grid(), model_.steps() + 1, model_.dt());
}

Trajectory DistributedControlProblem::solve(const ControlSignal& control) const {
  return simulate(model_, initial_, control, forcing_);
}

double DistributedControlProblem::cost(const ControlSignal& control) const {
  return cost_ocp(solve(control), control, targets_);
}

OptimizationProblem::Evaluation DistributedControlProblem::evaluate(const ControlSignal& control) const {
  const Trajectory traj = solve(control);
  const AdjointTrajectory adj = adjoint_solve(model_, traj, AdjointMode::distributed, targets_);
  return {cost_ocp(traj, control, targets_), reduced_gradient_ocp(control, adj)};
}

ControlSignal project_admissible(ControlSignal control, double radius) {
  for (int n = 0; n < control.nodes(); ++n) {
    VectorField v = leray_project(control[n]);
    if (std::isfinite(radius)) {
      const double nv = norm(v);
      if (nv > radius) v *= radius / nv;
    }
    control[n] = std::move(v);
  }
  return control;
}

OptimizationResult optimize(const OptimizationProblem& problem, const ControlSignal& initial_guess,
                            const OptimizerConfig& config, const StopRule& stop) {
  config.validate();
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };

  OptimizationResult res;
  res.control = config.max_iters == 0 ? initial_guess : project_admissible(initial_guess, config.radius);
  OptimizationProblem::Evaluation ev = problem.evaluate(res.control);
  double gnorm = norm(ev.gradient);
  res.history.push_back({0, ev.cost, gnorm, 0.0, elapsed()});
  auto small = [&] {
    return gnorm / std::max(1.0, norm(res.control)) <= config.grad_tol ||
           (stop && stop(res.control, ev.gradient));
  };

  for (int k = 1; k <= config.max_iters; ++k) {
    if (small()) break;
    double s = config.step0;
    bool accepted = false;
    ControlSignal trial;
    for (int shrink = 0; shrink <= 40; ++shrink) {
      trial = res.control;
      trial.axpy(-s, ev.gradient);
      trial = project_admissible(std::move(trial), config.radius);
      const double predicted = inner(ev.gradient, trial - res.control);
      const double jt = problem.cost(trial);
      if (std::isfinite(jt) && jt <= ev.cost + config.armijo_c * predicted) {
        accepted = true;
        break;
      }
      if (shrink < 40) s *= config.armijo_shrink;
    }
    if (!accepted) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "line search stalled at iteration " << k << ": cost " << ev.cost << ", |G| " << gnorm
          << ", last step " << s;
      throw LineSearchStall(msg.str(), k, ev.cost, gnorm, s);
    }
    res.control = std::move(trial);
    ev = problem.evaluate(res.control);
    gnorm = norm(ev.gradient);
    res.history.push_back({k, ev.cost, gnorm, s, elapsed()});
  }
  res.converged = small();
  return res;
}

std::vector<TaylorRow> taylor_test(const OptimizationProblem& problem, const ControlSignal& control,
                                   const ControlSignal& direction, const std::vector<double>& steps) {
  const OptimizationProblem::Evaluation ev = problem.evaluate(control);
  const double slope = inner(ev.gradient, direction);
  std::vector<TaylorRow> rows;
  for (double h : steps) {
    ControlSignal trial = control;
    trial.axpy(h, direction);
    TaylorRow r{h, std::abs(problem.cost(trial) - ev.cost - h * slope),
                std::numeric_limits<double>::quiet_NaN()};
    if (!rows.empty()) {
      r.order = std::log(rows.back().remainder / r.remainder) / std::log(rows.back().h / h);
    }
    rows.push_back(r);
  }
  return rows;
}

ControlSignal spike_variation(const ControlSignal& control, double tau, double h, const VectorField& W) {
  if (control.kind() != ControlSignal::Kind::distributed || control.empty()) {
    throw ValidationError("spike_variation: needs a distributed control");
  }
  const double dt = control.dt();
  const double T = (control.nodes() - 1) * dt;
  const double tol = 1e-9 * dt;
  if (!(h > 0.0) || h > tau + tol || tau > T + tol) {
    throw ValidationError("spike_variation: need 0 < h <= tau <= T");
  }
  require_same_grid(control.grid(), W.grid(), "spike_variation");
  ControlSignal out = control;
  for (int n = 0; n < out.nodes(); ++n) {
    const double t = n * dt;
    if (t > tau - h + tol && t <= tau + tol) out[n] = W;
  }
  return out;
}

TangentTrajectory spike_tangent(const Model& model, const Trajectory& base,
                                const ControlSignal& control, double tau, const VectorField& W) {
  const double dt = model.dt();
  const int N = model.steps();
  const int m = static_cast<int>(std::lround(tau / dt));
  if (std::abs(m * dt - tau) > 1e-9 * dt || m < 0 || m >= N) {
    throw ValidationError("spike_tangent: tau must be a grid node before T");
  }
  require_same_grid(model.grid(), W.grid(), "spike_tangent");
  VectorField jump = W;
  if (!control.empty()) jump -= control[m];
  Spectrum sx = transform(jump.x());
  Spectrum sy = transform(jump.y());
  spectral::project(sx, sy);
  spectral::implicit_solve(sx, model.solver().nu * dt);
  spectral::implicit_solve(sy, model.solver().nu * dt);
  const VectorField a(synthesize(sx), synthesize(sy));
  const ScalarField zero(model.grid());
  if (m + 1 == N) return tangent_solve(model, base, ControlSignal(), a, zero, m + 1);
  // A K-node spike averages Phi^j a over j < K; its h -> 0 limit is Phi^{-1/2} a.
  const TangentTrajectory one = tangent_solve(model, base, ControlSignal(), a, zero, m + 1);
  const VectorField w0 = 1.5 * a - 0.5 * one.w[m + 2];
  const ScalarField psi0 = -0.5 * one.psi[m + 2];
  return tangent_solve(model, base, ControlSignal(), w0, psi0, m + 1);
}

double ekeland_metric(const ControlSignal& a, const ControlSignal& b) {
  require_compatible(a, b, "ekeland_metric");
  if (a.kind() != ControlSignal::Kind::distributed) {
    throw ValidationError("ekeland_metric: defined for distributed controls");
  }
  const int last = a.nodes() - 1;
  double d = 0.0;
  for (int n = 0; n <= last; ++n) {
    const double scale = std::max(a[n].max_abs(), b[n].max_abs());
    if ((a[n] - b[n]).max_abs() > 1e-14 * scale) d += node_weight(n, last, a.dt());
  }
  return d;
}

double hamiltonian(const Model& model, const FlowState& state, const VectorField& control_value,
                   const VectorField& p, const ScalarField& eta, const VectorField& u_target,
                   const ScalarField& phi_target, const VectorField& forcing) {
  const VectorField& u = state.u;
  const ScalarField& phi = state.phi;
  const VectorField du = u - u_target;
  const ScalarField dphi = phi - phi_target;
  const double lagrangian =
      0.5 * (gradient_norm_sq(du) + inner(dphi, dphi) + inner(control_value, control_value));

  const ScalarField mu = chemical_potential(phi, model.kernel(), model.potential());
  const VectorField gphi = grad(phi);
  const VectorField gux = grad(u.x());
  const VectorField guy = grad(u.y());
  VectorField n1 = model.solver().nu * laplacian(u);
  n1 -= VectorField(dot(u, gux), dot(u, guy));
  n1 += scale(mu, gphi);
  n1 += control_value;
  if (!forcing.empty()) n1 += forcing;
  const ScalarField n2 = laplacian(mu) - dot(u, gphi);
  return lagrangian + inner(p, n1) + inner(eta, n2);
}

TrialControls default_trial_controls(const GridPtr& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  VectorSeries shapes;
  for (int i = 0; i < 7; ++i) shapes.push_back(random_divergence_free(grid, rng, 1.0));
  return [shapes, grid](int, const VectorField& p) {
    const double np = norm(p);
    VectorSeries trials{VectorField(grid), -1.0 * p};
    for (const auto& r : shapes) {
      trials.push_back(np * r);
      trials.push_back(-np * r);
    }
    return trials;
  };
}

std::vector<double> minimum_principle_residual(const ControlSignal& control,
                                               const AdjointTrajectory& adjoint,
                                               const TrialControls& trials) {
  if (control.kind() != ControlSignal::Kind::distributed || control.nodes() != adjoint.steps() + 1) {
    throw GridMismatch("minimum_principle_residual: control and adjoint time grids differ");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(control.nodes()));
  for (int n = 0; n < control.nodes(); ++n) {
    const VectorField& p = adjoint.p[static_cast<std::size_t>(n)];
    const VectorField& U = control[n];
    const double at_u = 0.5 * inner(U, U) + inner(p, U);
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& W : trials(n, p)) worst = std::max(worst, at_u - (0.5 * inner(W, W) + inner(p, W)));
    out.push_back(worst);
  }
  return out;
}

}  // namespace chns
