#include <doctest.h>

#include <cmath>
#include <random>

#include "chns/operators.hpp"
#include "chns/physics.hpp"
#include "chns/synthetic.hpp"

using namespace chns;

namespace {

template <class Fn>
ScalarField sample(const GridPtr& g, Fn fn) {
  ScalarField f(g);
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i) f.at(i, j) = fn(g->x(i), g->y(j));
  return f;
}

double max_diff(const ScalarField& a, const ScalarField& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("grid rejects odd or tiny resolutions") {
  CHECK_THROWS_AS(TorusGrid::create(7, 8), std::invalid_argument);
  CHECK_THROWS_AS(TorusGrid::create(6, 6), std::invalid_argument);
  CHECK_THROWS_AS(TorusGrid::create(8, 8, -1.0, 1.0), std::invalid_argument);
  auto g = TorusGrid::create(16, 8);
  CHECK(g->size() == 128);
  CHECK(g->spectral_size() == 9 * 8);
}

TEST_CASE("poincare constant is the smallest nonzero |k|^2") {
  CHECK(TorusGrid::create(16, 16)->poincare_constant() == doctest::Approx(1.0));
  CHECK(TorusGrid::create(16, 16, 4.0 * std::numbers::pi, 2.0 * std::numbers::pi)->poincare_constant() ==
        doctest::Approx(0.25));
}

TEST_CASE("gradient of analytic fields") {
  auto g = TorusGrid::create(32, 32);
  const VectorField d1 = grad(sample(g, [](double x, double) { return std::sin(x); }));
  CHECK(max_diff(d1.x(), sample(g, [](double x, double) { return std::cos(x); })) < 1e-13);
  CHECK(d1.y().max_abs() < 1e-13);

  const VectorField d0 = grad(ScalarField(g, 3.0));
  CHECK(d0.max_abs() < 1e-14);

  const VectorField d2 = grad(sample(g, [](double x, double y) { return std::sin(x) * std::cos(2 * y); }));
  CHECK(max_diff(d2.x(), sample(g, [](double x, double y) { return std::cos(x) * std::cos(2 * y); })) < 1e-13);
  CHECK(max_diff(d2.y(), sample(g, [](double x, double y) { return -2 * std::sin(x) * std::sin(2 * y); })) < 1e-13);
  CHECK(std::abs(d2.x().mean()) < 1e-15);
}

TEST_CASE("divergence of analytic fields") {
  auto g = TorusGrid::create(32, 32);
  CHECK(div(taylor_green(g, 1.0)).max_abs() < 1e-13);
  CHECK(div(VectorField(ScalarField(g, 2.0), ScalarField(g, -1.0))).max_abs() < 1e-14);
  const VectorField v(sample(g, [](double x, double) { return std::sin(x); }),
                      sample(g, [](double, double y) { return std::sin(y); }));
  CHECK(max_diff(div(v), sample(g, [](double x, double y) { return std::cos(x) + std::cos(y); })) < 1e-13);
}

TEST_CASE("curl of analytic fields") {
  auto g = TorusGrid::create(32, 32);
  const ScalarField f = sample(g, [](double x, double y) { return std::exp(std::sin(x)) * std::cos(y); });
  CHECK(curl2d(grad(f)).max_abs() < 1e-12);
  const VectorField shear(sample(g, [](double, double y) { return -std::sin(y); }), ScalarField(g));
  CHECK(max_diff(curl2d(shear), sample(g, [](double, double y) { return std::cos(y); })) < 1e-13);
  CHECK(max_diff(curl2d(taylor_green(g, 1.0)),
                 sample(g, [](double x, double y) { return 2 * std::sin(x) * std::sin(y); })) < 1e-13);
}

TEST_CASE("leray projection examples") {
  auto g = TorusGrid::create(32, 32);
  const VectorField gr = grad(sample(g, [](double x, double y) { return std::sin(x) * std::cos(y); }));
  CHECK(leray_project(gr).max_abs() < 1e-14);

  const VectorField tg = taylor_green(g, 0.7);
  const VectorField ptg = leray_project(tg);
  CHECK((ptg - tg).max_abs() < 1e-14);
  CHECK(ptg.divergence_free());

  // (sin x, sin y): each mode is parallel to its wavevector.
  const VectorField lon(sample(g, [](double x, double) { return std::sin(x); }),
                        sample(g, [](double, double y) { return std::sin(y); }));
  CHECK(leray_project(lon).max_abs() < 1e-14);

  const VectorField mean_flow(ScalarField(g, 0.3), ScalarField(g, -0.2));
  const VectorField pm = leray_project(mean_flow);
  CHECK(pm.x().mean() == doctest::Approx(0.3));
  CHECK(pm.y().mean() == doctest::Approx(-0.2));
}

TEST_CASE("convolution examples") {
  auto g = TorusGrid::create(16, 16);
  const ScalarField f = sample(g, [](double x, double y) { return std::cos(x + 2 * y) + std::sin(3 * x); });

  Kernel delta(g, KernelFamily::discrete_delta, 1.0, 1.0);
  CHECK(max_diff(convolve(delta.symbol(), f), f) < 1e-14);

  Kernel gauss(g, KernelFamily::gaussian, 0.5, 5.0);
  const ScalarField c = convolve(gauss.symbol(), ScalarField(g, 2.0));
  CHECK(max_diff(c, ScalarField(g, 10.0)) < 1e-12);

  // Transform-domain oracle: J^(1,0) by direct quadrature against cos x.
  const ScalarField& J = gauss.samples();
  double jhat = 0.0;
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i) jhat += J.at(i, j) * std::cos(g->x(i));
  jhat *= g->cell_area();
  const ScalarField s = sample(g, [](double x, double) { return std::sin(x); });
  CHECK(max_diff(convolve(gauss.symbol(), s), jhat * s) < 1e-12);

  // Direct-sum oracle on the periodic lattice.
  ScalarField direct(g);
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i) {
      double acc = 0.0;
      for (int q = 0; q < g->ny(); ++q)
        for (int p = 0; p < g->nx(); ++p)
          acc += J.at((i - p + g->nx()) % g->nx(), (j - q + g->ny()) % g->ny()) * f.at(p, q);
      direct.at(i, j) = acc * g->cell_area();
    }
  CHECK(max_diff(convolve(gauss.symbol(), f), direct) < 1e-12);
}

TEST_CASE("operator invariants on random fields") {
  auto g = TorusGrid::create(32, 24, 5.0, 3.0);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  Kernel gauss(g, KernelFamily::gaussian, 0.4, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    ScalarField a(g), b(g), c(g);
    for (std::size_t k = 0; k < a.size(); ++k) {
      a[k] = nd(rng);
      b[k] = nd(rng);
      c[k] = nd(rng);
    }
    const VectorField v(a, b);
    const VectorField pv = leray_project(v);
    const VectorField ppv = leray_project(pv);
    CHECK(norm(ppv - pv) <= 1e-12 * norm(pv));
    CHECK(norm(leray_project(grad(c))) <= 1e-12 * norm(grad(c)));
    CHECK(relative_divergence(pv) <= 1e-12);
    CHECK(std::abs(inner(a, b) - spectral_inner(a, b)) <= 1e-12 * norm(a) * norm(b));
    const double lhs = inner(convolve(gauss.symbol(), a), b);
    const double rhs = inner(a, convolve(gauss.symbol(), b));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs) + 1e-14);
    // Zero-mean divergence-free: enstrophy equals the full gradient norm.
    const double cs = inner(curl2d(pv), curl2d(pv));
    VectorField zm = pv;
    zm.x() -= ScalarField(g, pv.x().mean());
    zm.y() -= ScalarField(g, pv.y().mean());
    CHECK(std::abs(cs - gradient_norm_sq(zm)) <= 1e-10 * cs);
  }
}

TEST_CASE("operators refuse mixed grids") {
  auto g1 = TorusGrid::create(16, 16);
  auto g2 = TorusGrid::create(32, 16);
  CHECK_THROWS_AS(inner(ScalarField(g1), ScalarField(g2)), GridMismatch);
  Kernel k(g1, KernelFamily::gaussian, 0.5, 1.0);
  CHECK_THROWS_AS(convolve(k.symbol(), ScalarField(g2)), GridMismatch);
  CHECK_THROWS_AS(VectorField(ScalarField(g1), ScalarField(g2)), GridMismatch);
}
