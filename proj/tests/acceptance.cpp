// Runs every acceptance criterion at desk scale and prints one line each.
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>

#include "chns/verification.hpp"

using namespace chns;

namespace {

/// Short radius-constrained run so the projection branch is exercised too.
std::vector<IterationRecord> constrained_run(const ExperimentConfig& cfg) {
  const GridPtr grid = build_grid(cfg);
  const Model model = build_model(cfg, grid);
  const FlowState init = build_initial(cfg, grid);
  const DistributedControlProblem prob(model, init, build_ocp_targets(cfg, model, init));
  OptimizerConfig oc = cfg.optimizer;
  oc.max_iters = 5;
  oc.radius = 0.05;
  return optimize(prob, prob.zero_control(), oc).history;
}

}  // namespace

int main() {
  const ExperimentConfig cfg = verify::desk_scale();
  std::vector<std::vector<IterationRecord>> histories;
  int failures = 0;

  auto run = [&](int id, const char* name, const std::function<verify::Outcome()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    verify::Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o.id = id;
      o.name = name;
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (auto& h : o.histories) histories.push_back(std::move(h));
    if (!o.pass) ++failures;
    std::printf("%s criterion %d %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, verify::describe(o).c_str(), secs);
    std::fflush(stdout);
  };

  run(1, "mass conservation", [&] { return verify::mass_conservation(cfg); });
  run(2, "incompressibility", [&] { return verify::incompressibility(cfg); });
  run(3, "energy identity", [&] { return verify::energy_identity(cfg); });
  run(4, "equilibrium fixed point", [&] { return verify::equilibrium(cfg); });
  run(5, "curl/grad identity", [&] { return verify::curl_gradient_identity(cfg); });
  run(6, "tangent consistency", [&] { return verify::tangent_consistency(cfg); });
  run(7, "duality gap", [&] { return verify::duality(cfg); });
  run(8, "gradient Taylor test", [&] { return verify::taylor(cfg); });
  run(9, "minimum principle", [&] { return verify::minimum_principle(cfg); });
  run(10, "spike-variation limit", [&] { return verify::spike_limit(cfg); });
  run(11, "assimilation twin", [&] { return verify::assimilation_twin(cfg); });
  run(12, "optimizer monotonicity", [&] {
    histories.push_back(constrained_run(cfg));
    return verify::monotonicity(histories);
  });
  run(13, "assumption validator", [&] { return verify::assumption_validator(cfg); });
  run(14, "continuous dependence", [&] { return verify::continuous_dependence(cfg); });

  std::printf("%d of 14 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
