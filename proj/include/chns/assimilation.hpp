#pragma once

#include <cstdint>

#include "chns/control.hpp"

namespace chns {

/// 1/2 ||U||^2 + 1/2 int ||u - u_M||^2 + 1/2 int ||phi - phi_M||^2
/// + 1/2 ||u(T) - u_M^f||^2 + 1/2 ||phi(T) - phi_M^f||^2, trapezoidal in time.
double cost_da(const Trajectory& traj, const VectorField& U, const CostTargets& measurements);

/// P(U + p(0)).
VectorField reduced_gradient_da(const VectorField& U, const AdjointTrajectory& adjoint);

/// Recover the initial velocity from full-field measurements; phi(0) is known.
class AssimilationProblem : public OptimizationProblem {
 public:
  AssimilationProblem(Model model, ScalarField phi0, CostTargets measurements,
                      VectorSeries forcing = {});

  const Model& model() const { return model_; }
  const ScalarField& phi0() const { return phi0_; }
  const CostTargets& measurements() const { return measurements_; }
  const VectorSeries& forcing() const { return forcing_; }

  /// Same problem with different measurements.
  AssimilationProblem with_measurements(CostTargets measurements) const;

  Trajectory solve(const VectorField& U) const;
  double cost(const ControlSignal& control) const override;
  Evaluation evaluate(const ControlSignal& control) const override;

 private:
  Model model_;
  ScalarField phi0_;
  CostTargets measurements_;
  VectorSeries forcing_;
};

struct TwinReport {
  double initial_cost = 0.0;
  double final_cost = 0.0;
  double cost_ratio = 0.0;
  /// ||U_rec - U_true|| / ||U_true|| (absolute error when U_true = 0).
  double recovery_error = 0.0;
  bool converged = false;
  VectorField recovered;
  std::vector<IterationRecord> history;
};

/// Simulates from U_true, perturbs every measurement by Gaussian noise of
/// relative size noise_level, then optimizes from U = 0.
TwinReport twin_experiment(const VectorField& U_true, double noise_level,
                           const AssimilationProblem& problem_template,
                           const OptimizerConfig& config, std::uint64_t seed);

}  // namespace chns
