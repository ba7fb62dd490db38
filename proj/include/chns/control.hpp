#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "chns/tangent_adjoint.hpp"

namespace chns {

enum class GradientForm { gradient, curl };

/// Distributed-control cost with trapezoidal time weights:
///   1/2 int ||grad(u - u_d)||^2 + 1/2 int ||phi - phi_d||^2 + 1/2 int ||U||^2
///   + 1/2 ||u(T) - u_f||^2 + 1/2 ||phi(T) - phi_f||^2.
/// GradientForm::curl evaluates the first term as ||curl(u - u_d)||^2.
double cost_ocp(const Trajectory& traj, const ControlSignal& control, const CostTargets& targets,
                GradientForm form = GradientForm::gradient);

/// G(t) = U(t) + p(t).
ControlSignal reduced_gradient_ocp(const ControlSignal& control, const AdjointTrajectory& adjoint);

struct OptimizerConfig {
  int max_iters = 50;
  double step0 = 1.0;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  double grad_tol = 1e-6;
  /// Per-node L2 ball radius; infinity means no bound.
  double radius = std::numeric_limits<double>::infinity();

  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double cost = 0.0;
  double grad_norm = 0.0;
  /// Step accepted to reach this iterate (0 for the initial guess).
  double step = 0.0;
  double wall_seconds = 0.0;
};

struct OptimizationResult {
  ControlSignal control;
  std::vector<IterationRecord> history;
  bool converged = false;
};

class LineSearchStall : public NumericError {
 public:
  LineSearchStall(const std::string& what, int iteration, double cost, double grad_norm,
                  double last_step)
      : NumericError(what), iteration_(iteration), cost_(cost), grad_norm_(grad_norm),
        last_step_(last_step) {}
  int iteration() const { return iteration_; }
  double cost() const { return cost_; }
  double grad_norm() const { return grad_norm_; }
  double last_step() const { return last_step_; }

 private:
  int iteration_;
  double cost_;
  double grad_norm_;
  double last_step_;
};

/// Reduced problem seen by the optimizer.
class OptimizationProblem {
 public:
  struct Evaluation {
    double cost = 0.0;
    ControlSignal gradient;
  };

  virtual ~OptimizationProblem() = default;
  virtual double cost(const ControlSignal& control) const = 0;
  virtual Evaluation evaluate(const ControlSignal& control) const = 0;
};

class DistributedControlProblem : public OptimizationProblem {
 public:
  DistributedControlProblem(Model model, FlowState initial, CostTargets targets,
                            VectorSeries forcing = {});

  const Model& model() const { return model_; }
  const FlowState& initial() const { return initial_; }
  const CostTargets& targets() const { return targets_; }
  const VectorSeries& forcing() const { return forcing_; }

  Trajectory solve(const ControlSignal& control) const;
  double cost(const ControlSignal& control) const override;
  Evaluation evaluate(const ControlSignal& control) const override;
  ControlSignal zero_control() const;

 private:
  Model model_;
  FlowState initial_;
  CostTargets targets_;
  VectorSeries forcing_;
};

/// Leray projection of every node, then radial projection onto the ball.
ControlSignal project_admissible(ControlSignal control, double radius);

/// Extra termination test on the current iterate and its gradient.
using StopRule = std::function<bool(const ControlSignal& control, const ControlSignal& gradient)>;

/// Projected gradient descent with Armijo backtracking. Every iteration
/// restarts from step0; 40 failed shrinks raise LineSearchStall. Stops when
/// ||G|| / max(1, ||U||) <= grad_tol, when `stop` returns true, or after
/// max_iters iterations.
OptimizationResult optimize(const OptimizationProblem& problem, const ControlSignal& initial_guess,
                            const OptimizerConfig& config, const StopRule& stop = {});

struct TaylorRow {
  double h = 0.0;
  double remainder = 0.0;
  /// log10 ratio to the previous row; NaN on the first row.
  double order = 0.0;
};

/// |J(U + hV) - J(U) - h <G, V>| for each h.
std::vector<TaylorRow> taylor_test(const OptimizationProblem& problem, const ControlSignal& control,
                                   const ControlSignal& direction, const std::vector<double>& steps);

/// Control equal to W on nodes with t in (tau - h, tau], unchanged elsewhere.
ControlSignal spike_variation(const ControlSignal& control, double tau, double h,
                              const VectorField& W);

/// Limit of (u^h - u)/h for spikes ending at the grid node tau = m dt. With
/// a = (1 + nu dt |k|^2)^{-1} P(W - U^m) and Phi one tangent step, a spike of
/// K nodes responds like the mean of Phi^j a, j < K; the limit K -> 0 of that
/// mean is Phi^{-1/2} a ~ 1.5 a - 0.5 Phi a, used as the state at node m + 1.
TangentTrajectory spike_tangent(const Model& model, const Trajectory& base,
                                const ControlSignal& control, double tau, const VectorField& W);

/// Trapezoid-weighted measure of the nodes where two controls differ by more
/// than 1e-14 relative; identical controls give 0, everywhere-different ones T.
double ekeland_metric(const ControlSignal& a, const ControlSignal& b);

/// L(u, phi, U) + <p, N1(u, phi, U)> + <eta, N2(u, phi)> with
/// N1 = nu Lap u - (u.grad)u + mu grad phi + h + U and N2 = -u.grad phi + Lap mu.
/// Gradient parts of N1 vanish against a divergence-free p.
double hamiltonian(const Model& model, const FlowState& state, const VectorField& control_value,
                   const VectorField& p, const ScalarField& eta, const VectorField& u_target,
                   const ScalarField& phi_target, const VectorField& forcing = VectorField());

/// Trial set generator: given a node index and p at that node, returns the
/// candidate controls W.
using TrialControls = std::function<VectorSeries(int node, const VectorField& p)>;

/// {0, -p, +-r_1..r_7} with r_i random divergence-free fields scaled to ||p||.
TrialControls default_trial_controls(const GridPtr& grid, std::uint64_t seed);

/// Per node: max over trials W of [1/2||U||^2 + (p,U)] - [1/2||W||^2 + (p,W)].
std::vector<double> minimum_principle_residual(const ControlSignal& control,
                                               const AdjointTrajectory& adjoint,
                                               const TrialControls& trials);

}  // namespace chns
