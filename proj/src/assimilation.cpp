#include "chns/assimilation.hpp"

#include <cmath>
#include <random>

namespace chns {

double cost_da(const Trajectory& traj, const VectorField& U, const CostTargets& measurements) {
  const int N = traj.steps();
  measurements.check(traj[0].u.grid(), N + 1);
  double acc = 0.0;
  for (int n = 0; n <= N; ++n) {
    const VectorField du = traj[n].u - measurements.velocity[n];
    const ScalarField dphi = traj[n].phi - measurements.phase[n];
    acc += 0.5 * node_weight(n, N, traj.dt) * (inner(du, du) + inner(dphi, dphi));
  }
  const VectorField ef = traj[N].u - measurements.final_velocity;
  const ScalarField pf = traj[N].phi - measurements.final_phase;
  return 0.5 * inner(U, U) + acc + 0.5 * inner(ef, ef) + 0.5 * inner(pf, pf);
}

VectorField reduced_gradient_da(const VectorField& U, const AdjointTrajectory& adjoint) {
  if (adjoint.p.empty()) throw ReplayError("reduced_gradient_da: empty adjoint");
  return leray_project(U + adjoint.p.front());
}

AssimilationProblem::AssimilationProblem(Model model, ScalarField phi0, CostTargets measurements,
                                         VectorSeries forcing)
    : model_(std::move(model)),
      phi0_(std::move(phi0)),
      measurements_(std::move(measurements)),
      forcing_(std::move(forcing)) {
  require_same_grid(model_.grid(), phi0_.grid(), "AssimilationProblem");
  if (!measurements_.velocity.empty()) measurements_.check(model_.grid(), model_.steps() + 1);
}

AssimilationProblem AssimilationProblem::with_measurements(CostTargets measurements) const {
  return AssimilationProblem(model_, phi0_, std::move(measurements), forcing_);
}

Trajectory AssimilationProblem::solve(const VectorField& U) const {
  const FlowState init{VectorField(model_.grid()), phi0_, 0.0};
  return simulate(model_, init, ControlSignal::initial(U), forcing_);
}

double AssimilationProblem::cost(const ControlSignal& control) const {
  const VectorField& U = control.initial_value();
  return cost_da(solve(U), U, measurements_);
}

OptimizationProblem::Evaluation AssimilationProblem::evaluate(const ControlSignal& control) const {
  const VectorField& U = control.initial_value();
  const Trajectory traj = solve(U);
  const AdjointTrajectory adj = adjoint_solve(model_, traj, AdjointMode::assimilation, measurements_);
  return {cost_da(traj, U, measurements_), ControlSignal::initial(reduced_gradient_da(U, adj))};
}

namespace {

template <class Field>
void add_noise(Field& f, double level, std::mt19937_64& rng);

template <>
void add_noise(ScalarField& f, double level, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  ScalarField xi(f.grid());
  for (std::size_t k = 0; k < xi.size(); ++k) xi[k] = nd(rng);
  const double nx = norm(xi);
  if (nx > 0.0) f.axpy(level * norm(f) / nx, xi);
}

template <>
void add_noise(VectorField& f, double level, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  VectorField xi(f.grid());
  for (std::size_t k = 0; k < xi.x().size(); ++k) {
    xi.x()[k] = nd(rng);
    xi.y()[k] = nd(rng);
  }
  const double nx = norm(xi);
  if (nx > 0.0) f.axpy(level * norm(f) / nx, xi);
}

}  // namespace

TwinReport twin_experiment(const VectorField& U_true, double noise_level,
                           const AssimilationProblem& problem_template,
                           const OptimizerConfig& config, std::uint64_t seed) {
  if (!(noise_level >= 0.0)) throw ValidationError("twin_experiment: noise level must be >= 0");
  if (relative_divergence(U_true) > 1e-12) {
    throw ValidationError("twin_experiment: true initial velocity must be divergence-free");
  }
  CostTargets meas = CostTargets::from_trajectory(problem_template.solve(U_true));
  if (noise_level > 0.0) {
    std::mt19937_64 rng(seed);
    for (auto& v : meas.velocity) add_noise(v, noise_level, rng);
    for (auto& f : meas.phase) add_noise(f, noise_level, rng);
    add_noise(meas.final_velocity, noise_level, rng);
    add_noise(meas.final_phase, noise_level, rng);
  }
  const AssimilationProblem problem = problem_template.with_measurements(std::move(meas));
  const GridPtr& grid = problem.model().grid();
  const OptimizationResult res = optimize(problem, ControlSignal::initial(VectorField(grid)), config);

  TwinReport rep;
  rep.history = res.history;
  rep.converged = res.converged;
  rep.initial_cost = res.history.front().cost;
  rep.final_cost = res.history.back().cost;
  rep.cost_ratio = rep.initial_cost > 0.0 ? rep.final_cost / rep.initial_cost : 0.0;
  rep.recovered = res.control.initial_value();
  const double nt = norm(U_true);
  const double err = norm(rep.recovered - U_true);
  rep.recovery_error = nt > 0.0 ? err / nt : err;
  return rep;
}

}  // namespace chns
