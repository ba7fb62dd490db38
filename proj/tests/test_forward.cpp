#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chns/forward.hpp"
#include "chns/synthetic.hpp"

using namespace chns;

namespace {

Model make_model(int n, double dt, double T, double mass = 5.0) {
  auto g = TorusGrid::create(n, n);
  SolverConfig s;
  s.dt = dt;
  s.T = T;
  return Model(g, Kernel(g, KernelFamily::gaussian, 0.5, mass), Potential::double_well(), s);
}

double max_residual(const std::vector<double>& r) {
  double m = 0.0;
  for (double v : r) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("model validates solver settings") {
  auto g = TorusGrid::create(16, 16);
  Kernel k(g, KernelFamily::gaussian, 0.5, 5.0);
  SolverConfig s;
  s.dt = 3e-3;
  s.T = 0.01;
  CHECK_THROWS_AS(Model(g, k, Potential::double_well(), s), ValidationError);
  s.dt = 1e-3;
  s.nu = 0.0;
  CHECK_THROWS_AS(Model(g, k, Potential::double_well(), s), ValidationError);
  s.nu = 0.1;
  s.stabilization = -1.0;
  CHECK_THROWS_AS(Model(g, k, Potential::double_well(), s), ValidationError);
  s.stabilization.reset();
  CHECK_THROWS_AS(Model(g, Kernel(g, KernelFamily::gaussian, 0.5, 1.0), Potential::double_well(), s),
                  AssumptionViolation);
  const Model m(g, k, Potential::double_well(), s);
  CHECK(m.steps() == 10);
  CHECK(m.stabilization() == doctest::Approx(5.0));
}

TEST_CASE("energy closed forms") {
  auto g = TorusGrid::create(32, 32);
  Kernel k(g, KernelFamily::gaussian, 0.5, 5.0);
  const Potential dw = Potential::double_well();
  const double pi = std::numbers::pi;
  CHECK(std::abs(energy({VectorField(g), ScalarField(g, 1.0), 0.0}, k, dw)) < 1e-12);
  CHECK(energy({VectorField(g), ScalarField(g, 0.0), 0.0}, k, dw) == doctest::Approx(4 * pi * pi).epsilon(1e-14));
  CHECK(energy({taylor_green(g, 0.5), ScalarField(g, 1.0), 0.0}, k, dw) ==
        doctest::Approx(pi * pi * 0.25).epsilon(1e-12));
}

TEST_CASE("single-step scheme algebra") {
  const Model m = make_model(32, 1e-3, 0.01);
  const auto& g = m.grid();
  const double dt = m.dt(), nu = m.solver().nu;

  SUBCASE("equilibrium is stationary") {
    const FlowState s{VectorField(g), ScalarField(g, 0.37), 0.0};
    const FlowState n = step(m, s, VectorField(), VectorField());
    CHECK(n.u.max_abs() == 0.0);
    CHECK((n.phi - s.phi).max_abs() == 0.0);
  }
  SUBCASE("taylor-green decays by the implicit viscous factor") {
    const double A = 0.5;
    const FlowState s{taylor_green(g, A), ScalarField(g, 0.2), 0.0};
    const FlowState n = step(m, s, VectorField(), VectorField());
    const VectorField expect = (1.0 / (1.0 + 2.0 * nu * dt)) * taylor_green(g, A);
    CHECK((n.u - expect).max_abs() < 1e-14);
    CHECK((n.phi - s.phi).max_abs() < 1e-15);
  }
  SUBCASE("single-mode control") {
    const int mx = 2, my = 1;
    const VectorField f = single_mode_velocity(g, mx, my, 0.8);
    const FlowState s{VectorField(g), ScalarField(g, -0.1), 0.0};
    const FlowState n = step(m, s, f, VectorField());
    const double k2 = mx * mx + my * my;
    CHECK((n.u - (dt / (1.0 + nu * k2 * dt)) * f).max_abs() < 1e-15);
    // Forcing and control enter identically.
    const FlowState n2 = step(m, s, VectorField(), f);
    CHECK((n.u - n2.u).max_abs() == 0.0);
  }
  SUBCASE("CFL heuristic") {
    const FlowState s{taylor_green(g, 500.0), ScalarField(g), 0.0};
    CHECK_THROWS_AS(step(m, s, VectorField(), VectorField()), StabilityError);
  }
  SUBCASE("non-finite state") {
    FlowState s{VectorField(g), ScalarField(g), 0.0};
    s.phi[5] = INFINITY;
    CHECK_THROWS_AS(step(m, s, VectorField(), VectorField()), NumericError);
  }
}

TEST_CASE("simulate invariants") {
  const Model m = make_model(32, 2e-3, 0.1);
  const auto& g = m.grid();

  SUBCASE("zero data gives a constant trajectory") {
    const FlowState s{VectorField(g), ScalarField(g, 0.0), 0.0};
    const Trajectory tr = simulate(m, s, ControlSignal());
    CHECK(tr.steps() == 50);
    for (const auto& st : tr.states) {
      CHECK(st.u.max_abs() == 0.0);
      CHECK(st.phi.max_abs() == 0.0);
    }
    CHECK(max_residual(energy_identity_residual(m, tr, ControlSignal())) < 1e-12);
  }
  SUBCASE("viscous decay is monotone") {
    const FlowState s{taylor_green(g, 0.5), ScalarField(g, 1.0), 0.0};
    const Trajectory tr = simulate(m, s, ControlSignal());
    for (int n = 1; n <= tr.steps(); ++n) CHECK(tr.diagnostics[n].kinetic < tr.diagnostics[n - 1].kinetic);
    CHECK(std::isnan(tr.diagnostics[0].residual));
  }
  SUBCASE("mass, incompressibility and stored residuals") {
    std::mt19937_64 rng(3);
    const FlowState s{taylor_green(g, 0.5), sine_product(g, 0.1, 0.05), 0.0};
    const VectorSeries h(static_cast<std::size_t>(m.steps() + 1), random_divergence_free(g, rng, 2.0));
    const ControlSignal U = ControlSignal::distributed(
        VectorSeries(static_cast<std::size_t>(m.steps() + 1), random_divergence_free(g, rng, 1.0)), m.dt());
    const Trajectory tr = simulate(m, s, U, h);
    const double m0 = tr[0].phi.mean();
    for (const auto& st : tr.states) {
      CHECK(std::abs(st.phi.mean() - m0) <= 1e-12);
      CHECK(relative_divergence(st.u) <= 1e-12);
    }
    const auto r = energy_identity_residual(m, tr, U, h);
    for (int n = 0; n < tr.steps(); ++n) CHECK(r[n] == tr.diagnostics[n + 1].residual);
  }
  SUBCASE("initial control replaces the initial velocity") {
    const FlowState s{VectorField(g), ScalarField(g, 0.0), 0.0};
    const VectorField U0 = taylor_green(g, 0.3);
    const Trajectory tr = simulate(m, s, ControlSignal::initial(U0));
    CHECK((tr[0].u - U0).max_abs() < 1e-15);
  }
  SUBCASE("time-grid mismatch") {
    const FlowState s{VectorField(g), ScalarField(g, 0.0), 0.0};
    CHECK_THROWS_AS(simulate(m, s, ControlSignal::zeros(g, 10, m.dt())), GridMismatch);
    CHECK_THROWS_AS(simulate(m, s, ControlSignal(), VectorSeries(3, VectorField(g))), GridMismatch);
  }
}

TEST_CASE("energy residual is first order in dt") {
  // Forced generic run on a small grid; residual sup over the run.
  std::mt19937_64 rng(11);
  auto g = TorusGrid::create(32, 32);
  const VectorField force = random_divergence_free(g, rng, 3.0);
  double prev = 0.0;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    const Model m = make_model(32, dt, 0.08);
    const FlowState s{taylor_green(m.grid(), 0.5), sine_product(m.grid(), 0.1), 0.0};
    const VectorSeries h(static_cast<std::size_t>(m.steps() + 1), VectorField(force.x(), force.y(), true));
    const double r = max_residual(energy_identity_residual(m, simulate(m, s, ControlSignal(), h), ControlSignal(), h));
    if (prev > 0.0) CHECK(std::log2(prev / r) >= 0.9);
    prev = r;
  }
}
