#pragma once

#include <cstdint>
#include <random>

#include "chns/field.hpp"

// Built-in field generators used by the CLI, tests and targets.

namespace chns {

/// (A sin x cos y, -A cos x sin y) scaled to the domain.
VectorField taylor_green(const GridPtr& grid, double amplitude);

/// Divergence-free field derived from the stream function
/// amplitude * sin(mx x' + my y'), with x' = 2 pi x / lx.
VectorField single_mode_velocity(const GridPtr& grid, int mx, int my, double amplitude);

/// mean + amplitude * sin(x') sin(y')
ScalarField sine_product(const GridPtr& grid, double amplitude, double mean = 0.0);

/// Random divergence-free field with modes 1 <= |m|_inf <= kmax, spectral
/// amplitudes decaying like 1/|m|^2, rescaled to the given L2 norm.
VectorField random_divergence_free(const GridPtr& grid, std::mt19937_64& rng, double l2_norm,
                                   int kmax = 4);

/// Random zero-mean scalar field, same spectral shape as above.
ScalarField random_scalar(const GridPtr& grid, std::mt19937_64& rng, double l2_norm, int kmax = 4);

}  // namespace chns
