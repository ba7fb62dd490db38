#pragma once

#include <vector>

#include "chns/field.hpp"
#include "chns/grid.hpp"

namespace chns {

/// Half-complex Fourier coefficients of a real field.
struct Spectrum {
  GridPtr grid;
  std::vector<Complex> c;

  Spectrum() = default;
  explicit Spectrum(GridPtr g) : grid(std::move(g)), c(grid->spectral_size()) {}
};

Spectrum transform(const ScalarField& f);
ScalarField synthesize(const Spectrum& s);

/// Fourier multiplier of a periodic convolution: (J * f)^ = multiplier * f^.
/// multiplier[0] is the total mass of J.
struct ConvolutionSymbol {
  GridPtr grid;
  std::vector<double> multiplier;
};

VectorField grad(const ScalarField& f);
ScalarField div(const VectorField& v);
/// Scalar vorticity d_x v_y - d_y v_x.
ScalarField curl2d(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& v);

/// Helmholtz-Hodge projection onto divergence-free fields. The mean mode
/// passes through unchanged.
VectorField leray_project(const VectorField& v);

/// Periodic convolution J * f evaluated spectrally.
ScalarField convolve(const ConvolutionSymbol& kernel, const ScalarField& f);

/// 2/3-rule truncation.
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& v);

/// ||div v|| / ||v|| (0 for the zero field).
double relative_divergence(const VectorField& v);
/// Frobenius norm squared of the velocity gradient, ||grad v||^2.
double gradient_norm_sq(const VectorField& v);
double gradient_norm_sq(const ScalarField& f);
/// <grad a, grad b> summed over components.
double gradient_inner(const VectorField& a, const VectorField& b);
/// Inner product evaluated on Fourier coefficients (Parseval).
double spectral_inner(const ScalarField& a, const ScalarField& b);
/// Squared H^1-dual norm: sum |f_k|^2 / (1 + |k|^2), scaled by the area.
double dual_norm_sq(const ScalarField& f);

/// In-place helpers on spectra used by the solvers.
namespace spectral {

void dealias(Spectrum& s);
/// i k_x s, i k_y s
Spectrum dx(const Spectrum& s);
Spectrum dy(const Spectrum& s);
/// Projects the pair (sx, sy) onto divergence-free modes.
void project(Spectrum& sx, Spectrum& sy);
/// Divergence of (sx, sy).
Spectrum divergence(const Spectrum& sx, const Spectrum& sy);
/// s <- s / (1 + coeff * |k|^2)
void implicit_solve(Spectrum& s, double coeff);
void scale_by_k2(Spectrum& s, double factor);
void axpy(Spectrum& y, Complex a, const Spectrum& x);

}  // namespace spectral

}  // namespace chns
