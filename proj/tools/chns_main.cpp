#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "chns/io.hpp"
#include "chns/synthetic.hpp"
#include "chns/verification.hpp"

using namespace chns;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

std::string fmt(double x) { return io::format_double(x); }

void require_problem(const ExperimentConfig& cfg, ProblemKind expected) {
  if (cfg.problem && *cfg.problem != expected) {
    throw ValidationError("problem: config says '" + to_string(*cfg.problem) + "' but the subcommand runs '" +
                          to_string(expected) + "'");
  }
}

void dump_state(const fs::path& dir, int n, const FlowState& s) {
  char name[32];
  std::snprintf(name, sizeof name, "u_%05d.bin", n);
  io::write_snapshot(dir / name, s.u);
  std::snprintf(name, sizeof name, "phi_%05d.bin", n);
  io::write_snapshot(dir / name, s.phi);
}

void dump_trajectory(const fs::path& dir, const Trajectory& tr, int every) {
  const int N = tr.steps();
  for (int n = 0; n <= N; ++n) {
    if (n == 0 || n == N || (every > 0 && n % every == 0)) dump_state(dir / "snapshots", n, tr[n]);
  }
}

int run_simulate(const ExperimentConfig& cfg) {
  const GridPtr grid = build_grid(cfg);
  const Model model = build_model(cfg, grid);
  const Trajectory tr = simulate(model, build_initial(cfg, grid), ControlSignal());
  io::write_diagnostics(cfg.output_dir / "diagnostics.csv", tr.diagnostics);
  dump_trajectory(cfg.output_dir, tr, cfg.dump_every);
  const auto& last = tr.diagnostics.back();
  io::write_report(cfg.output_dir / "report.txt",
                   {{"steps", std::to_string(tr.steps())},
                    {"final_energy", fmt(last.energy)},
                    {"final_mass", fmt(last.mass)},
                    {"c0", fmt(model.assumptions().c0)}});
  std::printf("simulate: %d steps, final energy %s\n", tr.steps(), fmt(last.energy).c_str());
  return kExitOk;
}

int run_optimize(const ExperimentConfig& cfg) {
  const GridPtr grid = build_grid(cfg);
  const Model model = build_model(cfg, grid);
  const FlowState init = build_initial(cfg, grid);
  const DistributedControlProblem prob(model, init, build_ocp_targets(cfg, model, init));
  const OptimizationResult res = optimize(prob, prob.zero_control(), cfg.optimizer);
  io::write_history(cfg.output_dir / "history.csv", res.history);
  io::write_control(cfg.output_dir / "control", "U", res.control);
  const Trajectory tr = prob.solve(res.control);
  io::write_diagnostics(cfg.output_dir / "diagnostics.csv", tr.diagnostics);
  dump_trajectory(cfg.output_dir, tr, cfg.dump_every);
  const auto& first = res.history.front();
  const auto& last = res.history.back();
  io::write_report(cfg.output_dir / "report.txt",
                   {{"iterations", std::to_string(last.iter)},
                    {"converged", res.converged ? "true" : "false"},
                    {"initial_cost", fmt(first.cost)},
                    {"final_cost", fmt(last.cost)},
                    {"final_grad_norm", fmt(last.grad_norm)}});
  std::printf("optimize: %d iterations, cost %s -> %s\n", last.iter, fmt(first.cost).c_str(),
              fmt(last.cost).c_str());
  return kExitOk;
}

int run_assimilate(const ExperimentConfig& cfg) {
  const GridPtr grid = build_grid(cfg);
  const Model model = build_model(cfg, grid);
  const FlowState init = build_initial(cfg, grid);
  const VectorField truth = build_da_truth(cfg, grid);
  const AssimilationProblem tmpl(model, init.phi, CostTargets());
  const TwinReport rep = twin_experiment(truth, cfg.targets.noise, tmpl, cfg.optimizer, cfg.seed);
  io::write_history(cfg.output_dir / "history.csv", rep.history);
  io::write_snapshot(cfg.output_dir / "recovered_u0.bin", rep.recovered);
  io::write_snapshot(cfg.output_dir / "true_u0.bin", truth);
  io::write_report(cfg.output_dir / "twin_report.txt",
                   {{"noise_level", fmt(cfg.targets.noise)},
                    {"iterations", std::to_string(rep.history.back().iter)},
                    {"converged", rep.converged ? "true" : "false"},
                    {"initial_cost", fmt(rep.initial_cost)},
                    {"final_cost", fmt(rep.final_cost)},
                    {"cost_ratio", fmt(rep.cost_ratio)},
                    {"recovery_error", fmt(rep.recovery_error)}});
  std::printf("assimilate: cost ratio %s, recovery error %s\n", fmt(rep.cost_ratio).c_str(),
              fmt(rep.recovery_error).c_str());
  return kExitOk;
}

int run_check(const ExperimentConfig& cfg) {
  const auto outcomes = verify::invariant_suite(cfg);
  std::vector<std::pair<std::string, std::string>> report;
  bool ok = true;
  for (const auto& o : outcomes) {
    ok = ok && o.pass;
    std::printf("%s %s\n", o.pass ? "PASS" : "FAIL", verify::describe(o).c_str());
    report.push_back({o.name, o.pass ? "pass" : "fail"});
    for (const auto& [k, v] : o.values) report.push_back({o.name + "." + k, fmt(v)});
  }
  io::write_report(cfg.output_dir / "check_report.txt", report);
  return ok ? kExitOk : kExitNumeric;
}

int run_gradient_test(const ExperimentConfig& cfg) {
  const GridPtr grid = build_grid(cfg);
  const Model model = build_model(cfg, grid);
  const FlowState init = build_initial(cfg, grid);
  const int N = model.steps();
  std::mt19937_64 rng = make_rng(cfg.seed, 200);
  std::vector<std::vector<double>> rows;
  double worst = std::numeric_limits<double>::infinity();

  auto record = [&](int d, const std::vector<TaylorRow>& table) {
    for (const auto& r : table) {
      rows.push_back({static_cast<double>(d), r.h, r.remainder, r.order});
      std::printf("direction %d  h %-8s remainder %-24s order %s\n", d, fmt(r.h).c_str(),
                  fmt(r.remainder).c_str(), fmt(r.order).c_str());
      if (!std::isnan(r.order)) worst = std::min(worst, r.order);
    }
  };

  if (cfg.gradient_test.mode == ProblemKind::ocp) {
    const DistributedControlProblem prob(model, init, build_ocp_targets(cfg, model, init));
    ControlSignal U = prob.zero_control();
    for (int n = 0; n <= N; ++n) U[n] = random_divergence_free(grid, rng, 1.0);
    for (int d = 0; d < cfg.gradient_test.directions; ++d) {
      const VectorField v = random_divergence_free(grid, rng, 1.0);
      ControlSignal V = prob.zero_control();
      for (int n = 0; n <= N; ++n) V[n] = std::cos(3.0 * n * model.dt()) * v;
      record(d, taylor_test(prob, U, V, cfg.gradient_test.steps));
    }
  } else {
    const VectorField truth = build_da_truth(cfg, grid);
    const AssimilationProblem tmpl(model, init.phi, CostTargets());
    const AssimilationProblem prob =
        tmpl.with_measurements(CostTargets::from_trajectory(tmpl.solve(truth)));
    const ControlSignal U = ControlSignal::initial(random_divergence_free(grid, rng, 1.0));
    for (int d = 0; d < cfg.gradient_test.directions; ++d) {
      const ControlSignal V = ControlSignal::initial(random_divergence_free(grid, rng, 1.0));
      record(d, taylor_test(prob, U, V, cfg.gradient_test.steps));
    }
  }
  io::write_csv(cfg.output_dir / "gradient_test.csv", {"direction", "h", "remainder", "order"}, rows);
  std::printf("observed order (min over directions): %s\n", fmt(worst).c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controlled nonlocal Cahn-Hilliard-Navier-Stokes toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::string> output_dir;
  std::optional<long long> seed;
  app.add_option("--config", config_path, "experiment configuration (JSON)")->required();
  app.add_option("--output", output_dir, "output directory (overrides the config)");
  app.add_option("--seed", seed, "random seed (overrides the config)");
  app.fallthrough();
  auto* sim = app.add_subcommand("simulate", "run the forward model");
  auto* opt = app.add_subcommand("optimize", "solve the distributed control problem");
  auto* da = app.add_subcommand("assimilate", "initial-velocity twin experiment");
  auto* chk = app.add_subcommand("check", "run the invariant suite");
  auto* grd = app.add_subcommand("gradient-test", "Taylor remainder table for the reduced gradient");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    ExperimentConfig cfg = load_config(config_path);
    if (output_dir) cfg.output_dir = *output_dir;
    if (seed) {
      if (*seed < 0) throw ValidationError("--seed: must be >= 0");
      cfg.seed = static_cast<std::uint64_t>(*seed);
    }
    fs::create_directories(cfg.output_dir);
    if (sim->parsed()) {
      require_problem(cfg, ProblemKind::simulate);
      return run_simulate(cfg);
    }
    if (opt->parsed()) {
      require_problem(cfg, ProblemKind::ocp);
      return run_optimize(cfg);
    }
    if (da->parsed()) {
      require_problem(cfg, ProblemKind::da);
      return run_assimilate(cfg);
    }
    if (chk->parsed()) {
      require_problem(cfg, ProblemKind::check);
      return run_check(cfg);
    }
    if (grd->parsed()) {
      require_problem(cfg, ProblemKind::gradient_test);
      return run_gradient_test(cfg);
    }
  } catch (const AssumptionViolation& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitValidation;
}
