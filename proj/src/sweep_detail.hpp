#pragma once

// Spectral building blocks shared by the forward, tangent and adjoint sweeps.

#include "chns/operators.hpp"

namespace chns::detail {

inline Spectrum spectrum_of(const ScalarField& f, bool truncate) {
  Spectrum s = transform(f);
  if (truncate) spectral::dealias(s);
  return s;
}

struct Jacobian {
  ScalarField xx, xy, yx, yy;  // d_x v_x, d_y v_x, d_x v_y, d_y v_y
};

inline Jacobian jacobian(const VectorField& v) {
  const Spectrum sx = transform(v.x());
  const Spectrum sy = transform(v.y());
  return {synthesize(spectral::dx(sx)), synthesize(spectral::dy(sx)),
          synthesize(spectral::dx(sy)), synthesize(spectral::dy(sy))};
}

/// (1 + coeff |k|^2) v_new = P(v + dt f), with f given as spectra.
inline VectorField implicit_velocity_update(const VectorField& v, const Spectrum& fx,
                                            const Spectrum& fy, double dt, double coeff) {
  Spectrum sx = transform(v.x());
  Spectrum sy = transform(v.y());
  spectral::axpy(sx, dt, fx);
  spectral::axpy(sy, dt, fy);
  spectral::project(sx, sy);
  spectral::implicit_solve(sx, coeff);
  spectral::implicit_solve(sy, coeff);
  return VectorField(synthesize(sx), synthesize(sy), true);
}

/// (1 + coeff |k|^2) f_new = f + dt Lap g - dt div q.
inline ScalarField implicit_phase_update(const ScalarField& f, const Spectrum& g,
                                         const Spectrum& qx, const Spectrum& qy, double dt,
                                         double coeff) {
  Spectrum s = transform(f);
  const auto kx = f.grid()->kx();
  const auto ky = f.grid()->ky();
  const auto k2 = f.grid()->k2();
  const Complex i(0.0, 1.0);
  for (std::size_t k = 0; k < s.c.size(); ++k) {
    s.c[k] += dt * (-k2[k] * g.c[k] - i * (kx[k] * qx.c[k] + ky[k] * qy.c[k]));
    s.c[k] /= (1.0 + coeff * k2[k]);
  }
  return synthesize(s);
}

}  // namespace chns::detail
