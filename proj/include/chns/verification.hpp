#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chns/config.hpp"

namespace chns::verify {

struct Outcome {
  int id = 0;
  std::string name;
  bool pass = false;
  /// Measured quantities in the order they were computed.
  std::vector<std::pair<std::string, double>> values;
  std::string note;
  /// Optimizer histories produced along the way.
  std::vector<std::vector<IterationRecord>> histories;
};

/// Desk-scale experiment: 64^2, nu 0.1, dt 1e-3, T 0.5, gaussian kernel of
/// mass 5, double well, Taylor-Green 0.5 velocity, 0.1 sin sin phase,
/// targets offset from the uncontrolled run by random fields of norm 0.1.
ExperimentConfig desk_scale();

// Thresholds.
inline constexpr double kMassTol = 1e-12;
inline constexpr double kDivergenceTol = 1e-12;
inline constexpr double kEnergyOrderMin = 0.9;
inline constexpr double kEquilibriumTol = 1e-14;
inline constexpr int kEquilibriumSteps = 500;
inline constexpr double kCurlGradTol = 1e-10;
inline constexpr int kCurlGradFields = 20;
inline constexpr double kOrderOneLow = 0.8;
inline constexpr double kOrderOneHigh = 1.2;
inline constexpr double kDualityGapMax = 5e-3;
inline constexpr double kTaylorOrderMin = 1.8;
inline constexpr int kTaylorDirections = 5;
inline constexpr double kStationarityTol = 1e-3;
inline constexpr double kMinimumPrincipleTol = 5e-7;
inline constexpr double kTwinCostRatio = 0.01;
inline constexpr double kTwinRecovery = 0.1;
inline constexpr int kTwinIterations = 200;
inline constexpr double kTwinGradTol = 1e-4;
inline constexpr double kTwinHorizon = 0.25;
inline constexpr double kHalvingLow = 0.4;
inline constexpr double kHalvingHigh = 0.6;
inline constexpr double kCertifiedC0 = 1.0;

Outcome mass_conservation(const ExperimentConfig& cfg);
Outcome incompressibility(const ExperimentConfig& cfg);
/// Ladder {2 dt, dt, dt/2}; sup_n |r_n| per run.
Outcome energy_identity(const ExperimentConfig& cfg);
Outcome equilibrium(const ExperimentConfig& cfg);
Outcome curl_gradient_identity(const ExperimentConfig& cfg);
/// h in {1e-1, 1e-2, 1e-3}.
Outcome tangent_consistency(const ExperimentConfig& cfg);
/// Distributed pairing at dt and dt/2.
Outcome duality(const ExperimentConfig& cfg);
Outcome taylor(const ExperimentConfig& cfg);
Outcome minimum_principle(const ExperimentConfig& cfg);
/// h in {8, 4, 2, 1} dt, spike ending at T/2.
Outcome spike_limit(const ExperimentConfig& cfg);
/// Noise-free twin on the configured grid with T = kTwinHorizon.
Outcome assimilation_twin(const ExperimentConfig& cfg);
/// Every history must be non-increasing.
Outcome monotonicity(const std::vector<std::vector<IterationRecord>>& histories);
Outcome assumption_validator(const ExperimentConfig& cfg);
/// delta and delta/2 perturbations of (u0, phi0).
Outcome continuous_dependence(const ExperimentConfig& cfg);

/// Invariant suite used by the `check` subcommand.
std::vector<Outcome> invariant_suite(const ExperimentConfig& cfg);

/// "name: key=value, ..." on one line.
std::string describe(const Outcome& o);

}  // namespace chns::verify
