#include "chns/operators.hpp"

#include <cmath>

namespace chns {

Spectrum transform(const ScalarField& f) {
  Spectrum s(f.grid());
  f.grid()->forward(f.values(), s.c);
  return s;
}

ScalarField synthesize(const Spectrum& s) {
  ScalarField f(s.grid);
  s.grid->inverse(s.c, f.values());
  return f;
}

namespace spectral {

void dealias(Spectrum& s) {
  const auto keep = s.grid->dealias_mask();
  for (std::size_t k = 0; k < s.c.size(); ++k) s.c[k] *= keep[k];
}

Spectrum dx(const Spectrum& s) {
  Spectrum out(s.grid);
  const auto kx = s.grid->kx();
  for (std::size_t k = 0; k < s.c.size(); ++k) out.c[k] = Complex(0.0, kx[k]) * s.c[k];
  return out;
}

Spectrum dy(const Spectrum& s) {
  Spectrum out(s.grid);
  const auto ky = s.grid->ky();
  for (std::size_t k = 0; k < s.c.size(); ++k) out.c[k] = Complex(0.0, ky[k]) * s.c[k];
  return out;
}

void project(Spectrum& sx, Spectrum& sy) {
  require_same_grid(sx.grid, sy.grid, "leray_project");
  const auto kx = sx.grid->kx();
  const auto ky = sx.grid->ky();
  const auto k2 = sx.grid->k2();
  for (std::size_t k = 0; k < sx.c.size(); ++k) {
    if (k2[k] == 0.0) continue;
    const Complex kdotv = (kx[k] * sx.c[k] + ky[k] * sy.c[k]) / k2[k];
    sx.c[k] -= kx[k] * kdotv;
    sy.c[k] -= ky[k] * kdotv;
  }
}

Spectrum divergence(const Spectrum& sx, const Spectrum& sy) {
  require_same_grid(sx.grid, sy.grid, "div");
  Spectrum out(sx.grid);
  const auto kx = sx.grid->kx();
  const auto ky = sx.grid->ky();
  for (std::size_t k = 0; k < out.c.size(); ++k) {
    out.c[k] = Complex(0.0, 1.0) * (kx[k] * sx.c[k] + ky[k] * sy.c[k]);
  }
  return out;
}

void implicit_solve(Spectrum& s, double coeff) {
  const auto k2 = s.grid->k2();
  for (std::size_t k = 0; k < s.c.size(); ++k) s.c[k] /= (1.0 + coeff * k2[k]);
}

void scale_by_k2(Spectrum& s, double factor) {
  const auto k2 = s.grid->k2();
  for (std::size_t k = 0; k < s.c.size(); ++k) s.c[k] *= factor * k2[k];
}

void axpy(Spectrum& y, Complex a, const Spectrum& x) {
  for (std::size_t k = 0; k < y.c.size(); ++k) y.c[k] += a * x.c[k];
}

}  // namespace spectral

VectorField grad(const ScalarField& f) {
  const Spectrum s = transform(f);
  return VectorField(synthesize(spectral::dx(s)), synthesize(spectral::dy(s)));
}

ScalarField div(const VectorField& v) {
  return synthesize(spectral::divergence(transform(v.x()), transform(v.y())));
}

ScalarField curl2d(const VectorField& v) {
  const Spectrum vx = transform(v.x());
  const Spectrum vy = transform(v.y());
  Spectrum out(v.grid());
  const auto kx = v.grid()->kx();
  const auto ky = v.grid()->ky();
  for (std::size_t k = 0; k < out.c.size(); ++k) {
    out.c[k] = Complex(0.0, 1.0) * (kx[k] * vy.c[k] - ky[k] * vx.c[k]);
  }
  return synthesize(out);
}

ScalarField laplacian(const ScalarField& f) {
  Spectrum s = transform(f);
  spectral::scale_by_k2(s, -1.0);
  return synthesize(s);
}

VectorField laplacian(const VectorField& v) {
  return VectorField(laplacian(v.x()), laplacian(v.y()), v.divergence_free());
}

VectorField leray_project(const VectorField& v) {
  Spectrum sx = transform(v.x());
  Spectrum sy = transform(v.y());
  spectral::project(sx, sy);
  return VectorField(synthesize(sx), synthesize(sy), true);
}

ScalarField convolve(const ConvolutionSymbol& kernel, const ScalarField& f) {
  require_same_grid(kernel.grid, f.grid(), "convolve");
  Spectrum s = transform(f);
  for (std::size_t k = 0; k < s.c.size(); ++k) s.c[k] *= kernel.multiplier[k];
  return synthesize(s);
}

ScalarField dealias(const ScalarField& f) {
  Spectrum s = transform(f);
  spectral::dealias(s);
  return synthesize(s);
}

VectorField dealias(const VectorField& v) {
  return VectorField(dealias(v.x()), dealias(v.y()), v.divergence_free());
}

double relative_divergence(const VectorField& v) {
  const double n = norm(v);
  if (n == 0.0) return 0.0;
  return norm(div(v)) / n;
}

double gradient_norm_sq(const ScalarField& f) {
  const Spectrum s = transform(f);
  const auto k2 = f.grid()->k2();
  const auto w = f.grid()->mode_weight();
  double acc = 0.0;
  for (std::size_t k = 0; k < s.c.size(); ++k) acc += w[k] * k2[k] * std::norm(s.c[k]);
  return acc * f.grid()->area();
}

double gradient_norm_sq(const VectorField& v) {
  return gradient_norm_sq(v.x()) + gradient_norm_sq(v.y());
}

double gradient_inner(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "gradient_inner");
  const auto k2 = a.grid()->k2();
  const auto w = a.grid()->mode_weight();
  double acc = 0.0;
  for (int c = 0; c < 2; ++c) {
    const Spectrum sa = transform(c == 0 ? a.x() : a.y());
    const Spectrum sb = transform(c == 0 ? b.x() : b.y());
    for (std::size_t k = 0; k < sa.c.size(); ++k) {
      acc += w[k] * k2[k] * std::real(sa.c[k] * std::conj(sb.c[k]));
    }
  }
  return acc * a.grid()->area();
}

double spectral_inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "spectral_inner");
  const Spectrum sa = transform(a);
  const Spectrum sb = transform(b);
  const auto w = a.grid()->mode_weight();
  double acc = 0.0;
  for (std::size_t k = 0; k < sa.c.size(); ++k) acc += w[k] * std::real(sa.c[k] * std::conj(sb.c[k]));
  return acc * a.grid()->area();
}

double dual_norm_sq(const ScalarField& f) {
  const Spectrum s = transform(f);
  const auto k2 = f.grid()->k2();
  const auto w = f.grid()->mode_weight();
  double acc = 0.0;
  for (std::size_t k = 0; k < s.c.size(); ++k) acc += w[k] * std::norm(s.c[k]) / (1.0 + k2[k]);
  return acc * f.grid()->area();
}

}  // namespace chns
