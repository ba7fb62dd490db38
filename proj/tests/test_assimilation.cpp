#include <doctest.h>

#include "chns/assimilation.hpp"
#include "chns/synthetic.hpp"

using namespace chns;

namespace {

Model make_model(const GridPtr& g, double dt, double T) {
  SolverConfig s;
  s.dt = dt;
  s.T = T;
  return Model(g, Kernel(g, KernelFamily::gaussian, 0.5, 5.0), Potential::double_well(), s);
}

}  // namespace

TEST_CASE("assimilation cost examples") {
  auto g = TorusGrid::create(16, 16);
  const Model m = make_model(g, 1e-3, 0.01);
  std::mt19937_64 rng(3);
  const AssimilationProblem tmpl(m, sine_product(g, 0.1), CostTargets());
  const VectorField U = random_divergence_free(g, rng, 0.8);
  const Trajectory tr = tmpl.solve(U);
  const CostTargets meas = CostTargets::from_trajectory(tr);
  CHECK(cost_da(tr, VectorField(g), meas) == 0.0);
  CHECK(cost_da(tr, U, meas) == doctest::Approx(0.5 * inner(U, U)).epsilon(1e-12));
  const AssimilationProblem prob = tmpl.with_measurements(meas);
  CHECK(prob.cost(ControlSignal::initial(U)) == doctest::Approx(0.5 * inner(U, U)).epsilon(1e-12));
}

TEST_CASE("gradient equals U when the measurements come from U") {
  auto g = TorusGrid::create(16, 16);
  const Model m = make_model(g, 1e-3, 0.01);
  std::mt19937_64 rng(4);
  const AssimilationProblem tmpl(m, sine_product(g, 0.1), CostTargets());
  const VectorField U = random_divergence_free(g, rng, 0.8);
  const AssimilationProblem prob = tmpl.with_measurements(CostTargets::from_trajectory(tmpl.solve(U)));
  const auto ev = prob.evaluate(ControlSignal::initial(U));
  CHECK((ev.gradient.initial_value() - U).max_abs() <= 1e-15);
}

TEST_CASE("assimilation gradient passes a small Taylor test") {
  auto g = TorusGrid::create(16, 16);
  const Model m = make_model(g, 1e-3, 0.02);
  std::mt19937_64 rng(5);
  const AssimilationProblem tmpl(m, sine_product(g, 0.1), CostTargets());
  const AssimilationProblem prob =
      tmpl.with_measurements(CostTargets::from_trajectory(tmpl.solve(random_divergence_free(g, rng, 0.5))));
  const auto rows = taylor_test(prob, ControlSignal::initial(random_divergence_free(g, rng, 1.0)),
                                ControlSignal::initial(random_divergence_free(g, rng, 1.0)), {1e-1, 1e-2, 1e-3});
  CHECK(rows[1].order > 1.8);
  CHECK(rows[2].order > 1.8);
}

TEST_CASE("twin with a resting truth stays at rest") {
  auto g = TorusGrid::create(16, 16);
  const Model m = make_model(g, 1e-3, 0.01);
  const AssimilationProblem tmpl(m, sine_product(g, 0.1), CostTargets());
  OptimizerConfig oc;
  oc.max_iters = 5;
  const TwinReport rep = twin_experiment(VectorField(g), 0.0, tmpl, oc, 1);
  CHECK(rep.converged);
  CHECK(rep.recovered.max_abs() == 0.0);
  CHECK(rep.recovery_error == 0.0);
  CHECK(rep.final_cost == 0.0);
}

TEST_CASE("twin inputs are validated") {
  auto g = TorusGrid::create(16, 16);
  const Model m = make_model(g, 1e-3, 0.01);
  const AssimilationProblem tmpl(m, sine_product(g, 0.1), CostTargets());
  std::mt19937_64 rng(6);
  const VectorField compressible = grad(random_scalar(g, rng, 1.0));
  CHECK_THROWS_AS(twin_experiment(compressible, 0.0, tmpl, OptimizerConfig(), 1), ValidationError);
  CHECK_THROWS_AS(twin_experiment(VectorField(g), -0.1, tmpl, OptimizerConfig(), 1), ValidationError);
}

TEST_CASE("noisy twin is reproducible for a fixed seed") {
  auto g = TorusGrid::create(16, 16);
  const Model m = make_model(g, 1e-3, 0.01);
  const AssimilationProblem tmpl(m, sine_product(g, 0.1), CostTargets());
  std::mt19937_64 rng(7);
  const VectorField truth = random_divergence_free(g, rng, 0.5);
  OptimizerConfig oc;
  oc.max_iters = 3;
  oc.grad_tol = 0.0;
  const TwinReport a = twin_experiment(truth, 0.05, tmpl, oc, 11);
  const TwinReport b = twin_experiment(truth, 0.05, tmpl, oc, 11);
  const TwinReport c = twin_experiment(truth, 0.05, tmpl, oc, 12);
  CHECK(a.final_cost == b.final_cost);
  CHECK((a.recovered - b.recovered).max_abs() == 0.0);
  CHECK(a.initial_cost != c.initial_cost);
  for (std::size_t k = 1; k < a.history.size(); ++k) CHECK(a.history[k].cost <= a.history[k - 1].cost);
}
