#include "chns/synthetic.hpp"

#include <cmath>

#include "chns/operators.hpp"

namespace chns {

namespace {

double xs(const GridPtr& g, int i) { return 2.0 * std::numbers::pi * g->x(i) / g->lx(); }
double ys(const GridPtr& g, int j) { return 2.0 * std::numbers::pi * g->y(j) / g->ly(); }

// Random trigonometric polynomial over the half plane of modes.
ScalarField random_trig(const GridPtr& grid, std::mt19937_64& rng, int kmax) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ScalarField f(grid);
  for (int my = 0; my <= kmax; ++my) {
    for (int mx = -kmax; mx <= kmax; ++mx) {
      if (my == 0 && mx <= 0) continue;
      const double decay = 1.0 / static_cast<double>(mx * mx + my * my);
      const double a = normal(rng) * decay;
      const double b = normal(rng) * decay;
      for (int j = 0; j < grid->ny(); ++j) {
        for (int i = 0; i < grid->nx(); ++i) {
          const double arg = mx * xs(grid, i) + my * ys(grid, j);
          f.at(i, j) += a * std::cos(arg) + b * std::sin(arg);
        }
      }
    }
  }
  return f;
}

VectorField rotated_gradient(const ScalarField& stream) {
  const VectorField g = grad(stream);
  return VectorField(g.y(), -1.0 * g.x(), true);
}

}  // namespace

VectorField taylor_green(const GridPtr& grid, double amplitude) {
  ScalarField ux(grid), uy(grid);
  for (int j = 0; j < grid->ny(); ++j) {
    for (int i = 0; i < grid->nx(); ++i) {
      const double x = xs(grid, i), y = ys(grid, j);
      ux.at(i, j) = amplitude * std::sin(x) * std::cos(y);
      uy.at(i, j) = -amplitude * std::cos(x) * std::sin(y);
    }
  }
  // Divergence-free only when lx == ly; otherwise let the flag say so.
  const bool square = grid->lx() == grid->ly();
  return VectorField(std::move(ux), std::move(uy), square);
}

VectorField single_mode_velocity(const GridPtr& grid, int mx, int my, double amplitude) {
  ScalarField stream(grid);
  for (int j = 0; j < grid->ny(); ++j) {
    for (int i = 0; i < grid->nx(); ++i) {
      stream.at(i, j) = amplitude * std::sin(mx * xs(grid, i) + my * ys(grid, j));
    }
  }
  return rotated_gradient(stream);
}

ScalarField sine_product(const GridPtr& grid, double amplitude, double mean) {
  ScalarField f(grid);
  for (int j = 0; j < grid->ny(); ++j) {
    for (int i = 0; i < grid->nx(); ++i) {
      f.at(i, j) = mean + amplitude * std::sin(xs(grid, i)) * std::sin(ys(grid, j));
    }
  }
  return f;
}

VectorField random_divergence_free(const GridPtr& grid, std::mt19937_64& rng, double l2_norm,
                                   int kmax) {
  VectorField v = rotated_gradient(random_trig(grid, rng, kmax));
  const double n = norm(v);
  if (n > 0.0) v *= l2_norm / n;
  return v;
}

ScalarField random_scalar(const GridPtr& grid, std::mt19937_64& rng, double l2_norm, int kmax) {
  ScalarField f = random_trig(grid, rng, kmax);
  const double n = norm(f);
  if (n > 0.0) f *= l2_norm / n;
  return f;
}

}  // namespace chns
