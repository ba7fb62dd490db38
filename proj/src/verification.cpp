#include "chns/verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chns/io.hpp"
#include "chns/synthetic.hpp"

namespace chns::verify {

namespace {

// Random streams; the config's own generators use 1..4.
constexpr std::uint64_t kStreamCurl = 101;
constexpr std::uint64_t kStreamTangent = 102;
constexpr std::uint64_t kStreamDuality = 103;
constexpr std::uint64_t kStreamTaylor = 104;
constexpr std::uint64_t kStreamTrials = 105;
constexpr std::uint64_t kStreamSpike = 106;
constexpr std::uint64_t kStreamTwin = 107;
constexpr std::uint64_t kStreamDependence = 108;

struct Setup {
  GridPtr grid;
  Model model;
  FlowState initial;
};

Setup setup(const ExperimentConfig& cfg) {
  GridPtr grid = build_grid(cfg);
  Model model = build_model(cfg, grid);
  FlowState init = build_initial(cfg, grid);
  return {grid, std::move(model), std::move(init)};
}

double order(double coarse, double fine, double ratio) { return std::log(coarse / fine) / std::log(ratio); }

double state_error(const FlowState& a, const FlowState& b, double scale, const VectorField& w,
                   const ScalarField& psi) {
  const VectorField eu = scale * (a.u - b.u) - w;
  const ScalarField ep = scale * (a.phi - b.phi) - psi;
  return std::sqrt(inner(eu, eu) + inner(ep, ep));
}

ControlSignal smooth_control(const GridPtr& grid, int nodes, double dt, const VectorField& shape,
                             double freq, double phase) {
  ControlSignal c = ControlSignal::zeros(grid, nodes, dt);
  for (int n = 0; n < nodes; ++n) c[n] = std::cos(phase + freq * n * dt) * shape;
  return c;
}

}  // namespace

ExperimentConfig desk_scale() {
  ExperimentConfig cfg;
  cfg.nx = cfg.ny = 64;
  cfg.lx = cfg.ly = 2.0 * std::numbers::pi;
  cfg.solver.nu = 0.1;
  cfg.solver.dt = 1e-3;
  cfg.solver.T = 0.5;
  cfg.kernel_family = KernelFamily::gaussian;
  cfg.kernel_epsilon = 0.5;
  cfg.kernel_mass = 5.0;
  cfg.initial_velocity.type = "taylor-green";
  cfg.initial_velocity.amplitude = 0.5;
  cfg.initial_phase.type = "sine-product";
  cfg.initial_phase.amplitude = 0.1;
  cfg.targets.kind = "offset";
  cfg.targets.velocity.type = "random";
  cfg.targets.velocity.norm = 0.1;
  cfg.targets.phase.type = "random";
  cfg.targets.phase.norm = 0.1;
  cfg.seed = 1;
  return cfg;
}

Outcome mass_conservation(const ExperimentConfig& cfg) {
  const Setup s = setup(cfg);
  const Trajectory tr = simulate(s.model, s.initial, ControlSignal());
  const double m0 = tr[0].phi.mean();
  double drift = 0.0;
  for (const auto& st : tr.states) drift = std::max(drift, std::abs(st.phi.mean() - m0));
  return {1, "mass conservation", drift <= kMassTol, {{"max_drift", drift}, {"tol", kMassTol}}, "", {}};
}

Outcome incompressibility(const ExperimentConfig& cfg) {
  const Setup s = setup(cfg);
  const Trajectory tr = simulate(s.model, s.initial, ControlSignal());
  double worst = 0.0;
  for (const auto& st : tr.states) worst = std::max(worst, relative_divergence(st.u));
  return {2, "incompressibility", worst <= kDivergenceTol,
          {{"max_rel_divergence", worst}, {"tol", kDivergenceTol}}, "", {}};
}

Outcome energy_identity(const ExperimentConfig& cfg) {
  const Setup s = setup(cfg);
  Outcome out{3, "energy identity", true, {}, "", {}};
  std::vector<double> sups;
  for (double dt : {2.0 * cfg.solver.dt, cfg.solver.dt, 0.5 * cfg.solver.dt}) {
    const Model m = s.model.with_time(dt, cfg.solver.T);
    const Trajectory tr = simulate(m, s.initial, ControlSignal());
    double sup = 0.0;
    for (std::size_t n = 1; n < tr.diagnostics.size(); ++n) sup = std::max(sup, std::abs(tr.diagnostics[n].residual));
    sups.push_back(sup);
    out.values.push_back({"sup_residual_dt=" + io::format_double(dt), sup});
  }
  for (std::size_t i = 1; i < sups.size(); ++i) {
    const double o = order(sups[i - 1], sups[i], 2.0);
    out.values.push_back({"order_" + std::to_string(i), o});
    out.pass = out.pass && o >= kEnergyOrderMin;
  }
  return out;
}

Outcome equilibrium(const ExperimentConfig& cfg) {
  const GridPtr grid = build_grid(cfg);
  const Model m = build_model(cfg, grid).with_time(cfg.solver.dt, kEquilibriumSteps * cfg.solver.dt);
  const double c = 0.3;
  const FlowState init{VectorField(grid), ScalarField(grid, c), 0.0};
  const Trajectory tr = simulate(m, init, ControlSignal());
  double dev = 0.0;
  for (const auto& st : tr.states) {
    dev = std::max({dev, st.u.max_abs(), (st.phi - ScalarField(grid, c)).max_abs()});
  }
  return {4, "equilibrium fixed point", dev <= kEquilibriumTol,
          {{"steps", static_cast<double>(m.steps())}, {"max_deviation", dev}, {"tol", kEquilibriumTol}},
          "", {}};
}

Outcome curl_gradient_identity(const ExperimentConfig& cfg) {
  const GridPtr grid = build_grid(cfg);
  std::mt19937_64 rng = make_rng(cfg.seed, kStreamCurl);
  double worst = 0.0;
  for (int i = 0; i < kCurlGradFields; ++i) {
    const VectorField u = random_divergence_free(grid, rng, 1.0, 8);
    const double g = std::sqrt(gradient_norm_sq(u));
    const double c = norm(curl2d(u));
    worst = std::max(worst, std::abs(c - g) / g);
  }
  return {5, "curl/grad identity", worst <= kCurlGradTol,
          {{"fields", static_cast<double>(kCurlGradFields)}, {"max_rel_diff", worst}, {"tol", kCurlGradTol}},
          "", {}};
}

Outcome tangent_consistency(const ExperimentConfig& cfg) {
  const Setup s = setup(cfg);
  const int N = s.model.steps();
  const double dt = s.model.dt();
  std::mt19937_64 rng = make_rng(cfg.seed, kStreamTangent);
  const ControlSignal U = smooth_control(s.grid, N + 1, dt, random_divergence_free(s.grid, rng, 1.0), 2.0, 0.0);
  const ControlSignal dU = smooth_control(s.grid, N + 1, dt, random_divergence_free(s.grid, rng, 1.0), 5.0, 1.0);
  const Trajectory base = simulate(s.model, s.initial, U);
  const TangentTrajectory tan = tangent_solve(s.model, base, dU, VectorField(s.grid), ScalarField(s.grid));
  Outcome out{6, "tangent consistency", true, {}, "", {}};
  std::vector<double> errs;
  for (double h : {1e-1, 1e-2, 1e-3}) {
    const Trajectory th = simulate(s.model, s.initial, U + h * dU);
    errs.push_back(state_error(th[N], base[N], 1.0 / h, tan.w[N], tan.psi[N]));
    out.values.push_back({"err_h=" + io::format_double(h), errs.back()});
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double o = order(errs[i - 1], errs[i], 10.0);
    out.values.push_back({"order_" + std::to_string(i), o});
    out.pass = out.pass && o >= kOrderOneLow && o <= kOrderOneHigh;
  }
  return out;
}

Outcome duality(const ExperimentConfig& cfg) {
  const Setup s = setup(cfg);
  std::mt19937_64 rng = make_rng(cfg.seed, kStreamDuality);
  const VectorField V = random_divergence_free(s.grid, rng, 1.0);
  Outcome out{7, "duality gap", true, {}, "", {}};
  std::vector<double> gaps;
  for (double dt : {cfg.solver.dt, 0.5 * cfg.solver.dt}) {
    const Model m = s.model.with_time(dt, cfg.solver.T);
    const CostTargets targets = build_ocp_targets(cfg, m, s.initial);
    const Trajectory base = simulate(m, s.initial, ControlSignal());
    const ControlSignal dU = ControlSignal::distributed(VectorSeries(static_cast<std::size_t>(m.steps()) + 1, V), dt);
    const DualityReport rep = duality_gap(m, base, dU, AdjointMode::distributed, targets);
    gaps.push_back(rep.gap);
    out.values.push_back({"gap_dt=" + io::format_double(dt), rep.gap});
  }
  const double o = order(gaps[0], gaps[1], 2.0);
  out.values.push_back({"order", o});
  out.pass = gaps[0] <= kDualityGapMax && o >= kOrderOneLow && o <= kOrderOneHigh;
  return out;
}

Outcome taylor(const ExperimentConfig& cfg) {
  const Setup s = setup(cfg);
  const int N = s.model.steps();
  const double dt = s.model.dt();
  const DistributedControlProblem prob(s.model, s.initial, build_ocp_targets(cfg, s.model, s.initial));
  std::mt19937_64 rng = make_rng(cfg.seed, kStreamTaylor);
  ControlSignal U = prob.zero_control();
  for (int n = 0; n <= N; ++n) U[n] = random_divergence_free(s.grid, rng, 1.0);
  Outcome out{8, "gradient Taylor test", true, {}, "", {}};
  double worst = std::numeric_limits<double>::infinity();
  for (int d = 0; d < kTaylorDirections; ++d) {
    const ControlSignal V = smooth_control(s.grid, N + 1, dt, random_divergence_free(s.grid, rng, 1.0), 3.0, 0.0);
    const auto rows = taylor_test(prob, U, V, {1e-1, 1e-2, 1e-3});
    for (std::size_t i = 1; i < rows.size(); ++i) {
      out.values.push_back({"dir" + std::to_string(d) + "_order_" + std::to_string(i), rows[i].order});
      worst = std::min(worst, rows[i].order);
    }
  }
  out.values.push_back({"min_order", worst});
  out.pass = worst >= kTaylorOrderMin;
  return out;
}

Outcome minimum_principle(const ExperimentConfig& cfg) {
  const Setup s = setup(cfg);
  const DistributedControlProblem prob(s.model, s.initial, build_ocp_targets(cfg, s.model, s.initial));
  // p = G - U on every node.
  auto stationarity = [](const ControlSignal& U, const ControlSignal& G) {
    double worst = 0.0;
    for (int n = 0; n < U.nodes(); ++n) {
      worst = std::max(worst, norm(G[n]) / std::max(1.0, norm(G[n] - U[n])));
    }
    return worst;
  };
  OptimizerConfig oc = cfg.optimizer;
  oc.grad_tol = 0.0;
  oc.max_iters = 50;
  Outcome out{9, "minimum principle", false, {}, "", {}};
  OptimizationResult res;
  try {
    res = optimize(prob, prob.zero_control(), oc,
                   [&](const ControlSignal& U, const ControlSignal& G) { return stationarity(U, G) <= kStationarityTol; });
  } catch (const LineSearchStall& e) {
    out.note = e.what();
    return out;
  }
  out.histories.push_back(res.history);
  const ControlSignal& U = res.control;
  const Trajectory tr = prob.solve(U);
  const AdjointTrajectory adj = adjoint_solve(s.model, tr, AdjointMode::distributed, prob.targets());
  const ControlSignal G = reduced_gradient_ocp(U, adj);
  const double stat = stationarity(U, G);
  const auto resid = minimum_principle_residual(U, adj, default_trial_controls(s.grid, cfg.seed + kStreamTrials));
  double worst_ratio = 0.0, worst = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < U.nodes(); ++n) {
    const double np = norm(adj.p[static_cast<std::size_t>(n)]);
    worst = std::max(worst, resid[static_cast<std::size_t>(n)]);
    worst_ratio = std::max(worst_ratio, resid[static_cast<std::size_t>(n)] / std::max(1.0, np * np));
  }
  out.values = {{"iterations", static_cast<double>(res.history.size() - 1)},
                {"stationarity", stat},
                {"max_residual", worst},
                {"max_scaled_residual", worst_ratio},
                {"trials", 16.0}};
  out.pass = stat <= kStationarityTol && worst_ratio <= kMinimumPrincipleTol;
  return out;
}

Outcome spike_limit(const ExperimentConfig& cfg) {
  const Setup s = setup(cfg);
  const int N = s.model.steps();
  const double dt = s.model.dt();
  std::mt19937_64 rng = make_rng(cfg.seed, kStreamSpike);
  const ControlSignal U = smooth_control(s.grid, N + 1, dt, random_divergence_free(s.grid, rng, 1.0), 2.0, 0.0);
  const VectorField W = random_divergence_free(s.grid, rng, 1.0);
  const Trajectory base = simulate(s.model, s.initial, U);
  const double tau = (N / 2) * dt;
  const TangentTrajectory lim = spike_tangent(s.model, base, U, tau, W);
  Outcome out{10, "spike-variation limit", true, {}, "", {}};
  std::vector<double> errs, hs;
  bool metric_ok = true;
  for (int K : {8, 4, 2, 1}) {
    const double h = K * dt;
    const ControlSignal Uh = spike_variation(U, tau, h, W);
    const double d = ekeland_metric(Uh, U);
    metric_ok = metric_ok && std::abs(d - h) <= 1e-12 * h;
    const Trajectory th = simulate(s.model, s.initial, Uh);
    errs.push_back(state_error(th[N], base[N], 1.0 / h, lim.w[N], lim.psi[N]));
    hs.push_back(h);
    out.values.push_back({"err_K=" + std::to_string(K), errs.back()});
    out.values.push_back({"ekeland_K=" + std::to_string(K), d});
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double o = order(errs[i - 1], errs[i], hs[i - 1] / hs[i]);
    out.values.push_back({"order_" + std::to_string(i), o});
    out.pass = out.pass && errs[i] < errs[i - 1] && o >= kOrderOneLow && o <= kOrderOneHigh;
  }
  out.pass = out.pass && metric_ok;
  return out;
}

Outcome assimilation_twin(const ExperimentConfig& cfg) {
  const GridPtr grid = build_grid(cfg);
  const Model m = build_model(cfg, grid).with_time(cfg.solver.dt, kTwinHorizon);
  const FlowState init = build_initial(cfg, grid);
  std::mt19937_64 rng = make_rng(cfg.seed, kStreamTwin);
  const VectorField truth = random_divergence_free(grid, rng, 1.0);
  const AssimilationProblem tmpl(m, init.phi, CostTargets());
  OptimizerConfig oc = cfg.optimizer;
  oc.max_iters = kTwinIterations;
  oc.grad_tol = kTwinGradTol;
  const TwinReport rep = twin_experiment(truth, 0.0, tmpl, oc, cfg.seed);
  Outcome out{11, "assimilation twin", rep.cost_ratio <= kTwinCostRatio && rep.recovery_error <= kTwinRecovery,
              {{"iterations", static_cast<double>(rep.history.size() - 1)},
               {"converged", rep.converged ? 1.0 : 0.0},
               {"cost_ratio", rep.cost_ratio},
               {"recovery_error", rep.recovery_error}},
              "", {rep.history}};
  if (!out.pass) out.note = "regularized minimizer differs from the truth";
  return out;
}

Outcome monotonicity(const std::vector<std::vector<IterationRecord>>& histories) {
  bool ok = !histories.empty();
  double worst = 0.0;
  std::size_t iters = 0;
  for (const auto& h : histories) {
    iters += h.size();
    for (std::size_t k = 1; k < h.size(); ++k) {
      worst = std::max(worst, h[k].cost - h[k - 1].cost);
      ok = ok && h[k].cost <= h[k - 1].cost;
    }
  }
  return {12, "optimizer monotonicity", ok,
          {{"runs", static_cast<double>(histories.size())},
           {"records", static_cast<double>(iters)},
           {"max_increase", worst}},
          "", {}};
}

Outcome assumption_validator(const ExperimentConfig& cfg) {
  const GridPtr grid = build_grid(cfg);
  Outcome out{13, "assumption validator", false, {}, "", {}};
  const AssumptionReport rep =
      validate_assumptions(Kernel(grid, cfg.kernel_family, cfg.kernel_epsilon, 5.0), Potential::double_well());
  out.values.push_back({"c0_mass5", rep.c0});
  bool rejected = false;
  try {
    (void)validate_assumptions(Kernel(grid, cfg.kernel_family, cfg.kernel_epsilon, 1.0), Potential::double_well());
  } catch (const AssumptionViolation& e) {
    out.note = e.what();
    rejected = out.note.find("item 2") != std::string::npos;
  }
  out.values.push_back({"mass1_rejected", rejected ? 1.0 : 0.0});
  out.pass = std::abs(rep.c0 - kCertifiedC0) <= 1e-12 && rep.s_min == -3.0 && rep.s_max == 3.0 && rejected;
  return out;
}

Outcome continuous_dependence(const ExperimentConfig& cfg) {
  const Setup s = setup(cfg);
  std::mt19937_64 rng = make_rng(cfg.seed, kStreamDependence);
  const VectorField du = random_divergence_free(s.grid, rng, 1.0);
  const ScalarField dp = random_scalar(s.grid, rng, 1.0);
  const double delta = 1e-2;
  const DependenceReport a = chns::continuous_dependence(s.model, s.initial, delta * du, delta * dp);
  const DependenceReport b = chns::continuous_dependence(s.model, s.initial, 0.5 * delta * du, 0.5 * delta * dp);
  const double ratio = b.sup_difference / a.sup_difference;
  return {14, "continuous dependence", ratio >= kHalvingLow && ratio <= kHalvingHigh,
          {{"sup_diff_delta", a.sup_difference},
           {"sup_diff_half", b.sup_difference},
           {"ratio", ratio},
           {"K_T", a.amplification},
           {"K_T_half", b.amplification}},
          "", {}};
}

std::vector<Outcome> invariant_suite(const ExperimentConfig& cfg) {
  return {mass_conservation(cfg), incompressibility(cfg), energy_identity(cfg),
          equilibrium(cfg), curl_gradient_identity(cfg), tangent_consistency(cfg),
          duality(cfg), assumption_validator(cfg), continuous_dependence(cfg)};
}

std::string describe(const Outcome& o) {
  std::ostringstream os;
  os << o.name << ":";
  for (std::size_t i = 0; i < o.values.size(); ++i) {
    os << (i ? ", " : " ") << o.values[i].first << "=" << io::format_double(o.values[i].second);
  }
  if (!o.note.empty()) os << " (" << o.note << ")";
  return os.str();
}

}  // namespace chns::verify
