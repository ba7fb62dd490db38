#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chns/assimilation.hpp"

namespace chns {

enum class ProblemKind { simulate, ocp, da, check, gradient_test };

ProblemKind parse_problem(const std::string& name);
std::string to_string(ProblemKind kind);

/// Built-in or file-backed field generator.
struct FieldSpec {
  /// taylor-green, single-mode, random, zero, constant, sine-product, file
  std::string type = "zero";
  double amplitude = 1.0;
  double mean = 0.0;
  double value = 0.0;
  double norm = 1.0;
  int mx = 1;
  int my = 1;
  int kmax = 4;
  std::filesystem::path path;
};

struct TargetsSpec {
  /// steady: fixed fields; offset: uncontrolled run plus fixed fields;
  /// twin: run driven by a known truth (constant control or initial velocity).
  std::string kind = "offset";
  FieldSpec velocity;
  FieldSpec phase;
  FieldSpec truth;
  double noise = 0.0;
};

struct GradientTestSpec {
  ProblemKind mode = ProblemKind::ocp;
  int directions = 5;
  std::vector<double> steps{1e-1, 1e-2, 1e-3};
};

struct ExperimentConfig {
  int nx = 64;
  int ny = 64;
  double lx = 0.0;
  double ly = 0.0;
  SolverConfig solver;
  KernelFamily kernel_family = KernelFamily::gaussian;
  double kernel_epsilon = 0.5;
  double kernel_mass = 5.0;
  std::vector<double> potential{1.0, 0.0, -2.0, 0.0, 1.0};
  FieldSpec initial_velocity;
  FieldSpec initial_phase;
  std::optional<ProblemKind> problem;
  TargetsSpec targets;
  GradientTestSpec gradient_test;
  OptimizerConfig optimizer;
  std::filesystem::path output_dir = "output";
  int dump_every = 0;
  std::uint64_t seed = 0;
};

/// Parses JSON text; relative paths resolve against `base_dir`. Throws
/// ValidationError naming the offending field for unknown keys, missing
/// required keys, wrong types and out-of-range values.
ExperimentConfig parse_config(const std::string& text,
                              const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Deterministic generator for one named stream of a run.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

GridPtr build_grid(const ExperimentConfig& cfg);
Model build_model(const ExperimentConfig& cfg, const GridPtr& grid);
VectorField make_velocity(const FieldSpec& spec, const GridPtr& grid, std::mt19937_64& rng);
ScalarField make_scalar(const FieldSpec& spec, const GridPtr& grid, std::mt19937_64& rng);
FlowState build_initial(const ExperimentConfig& cfg, const GridPtr& grid);

/// Targets for the distributed problem ("steady", "offset" or "twin" with a
/// constant-in-time truth control).
CostTargets build_ocp_targets(const ExperimentConfig& cfg, const Model& model,
                              const FlowState& initial);

/// Truth initial velocity for assimilation twins.
VectorField build_da_truth(const ExperimentConfig& cfg, const GridPtr& grid);

}  // namespace chns
