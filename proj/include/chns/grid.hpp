#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "chns/errors.hpp"

namespace chns {

using Complex = std::complex<double>;

/// Uniform periodic grid on [0, lx) x [0, ly) with its real-to-complex
/// Fourier machinery.
///
/// Physical samples are stored row-major with y as the slow index:
/// value(i, j) = f(x_i, y_j) lives at j * nx + i. Spectral coefficients use
/// the half-complex layout iy * (nx/2 + 1) + ix, normalized so that
/// coefficient 0 is the mean of the field.
///
/// All derivative symbols zero the Nyquist wavenumber so that div, grad,
/// curl, the Laplacian and the Leray projection are mutually consistent
/// (Laplacian == div o grad exactly).
class TorusGrid {
 public:
  static std::shared_ptr<const TorusGrid> create(int nx, int ny,
                                                 double lx = 2.0 * std::numbers::pi,
                                                 double ly = 2.0 * std::numbers::pi);

  ~TorusGrid();
  TorusGrid(const TorusGrid&) = delete;
  TorusGrid& operator=(const TorusGrid&) = delete;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  int nkx() const { return nx_ / 2 + 1; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t spectral_size() const { return static_cast<std::size_t>(nkx()) * ny_; }

  double dx() const { return lx_ / nx_; }
  double dy() const { return ly_ / ny_; }
  double area() const { return lx_ * ly_; }
  /// Quadrature weight of one node (trapezoidal rule on the torus).
  double cell_area() const { return area() / static_cast<double>(size()); }

  double x(int i) const { return dx() * i; }
  double y(int j) const { return dy() * j; }

  /// Derivative wavenumbers per spectral index (Nyquist set to zero).
  std::span<const double> kx() const { return kx_; }
  std::span<const double> ky() const { return ky_; }
  /// kx^2 + ky^2 per spectral index; minus the Laplacian symbol.
  std::span<const double> k2() const { return k2_; }
  /// 2/3-rule mask: 1 where a mode survives dealiasing, 0 otherwise.
  std::span<const double> dealias_mask() const { return keep_; }
  /// Multiplicity of a half-complex coefficient in the full spectrum (1 or 2).
  std::span<const double> mode_weight() const { return weight_; }

  /// Integer mode numbers of a spectral index.
  int mode_x(std::size_t s) const { return static_cast<int>(s % nkx()); }
  int mode_y(std::size_t s) const {
    const int iy = static_cast<int>(s / nkx());
    return iy <= ny_ / 2 ? iy : iy - ny_;
  }

  /// Smallest nonzero eigenvalue of -Laplacian (discrete Poincare constant).
  double poincare_constant() const { return lambda1_; }

  /// Normalized forward transform; `out` has spectral_size() entries.
  void forward(std::span<const double> in, std::span<Complex> out) const;
  /// Inverse transform; `in` is not modified.
  void inverse(std::span<const Complex> in, std::span<double> out) const;

  bool same_as(const TorusGrid& other) const {
    return this == &other || (nx_ == other.nx_ && ny_ == other.ny_ && lx_ == other.lx_ &&
                              ly_ == other.ly_);
  }

 private:
  TorusGrid(int nx, int ny, double lx, double ly);

  struct Plans;
  int nx_;
  int ny_;
  double lx_;
  double ly_;
  double lambda1_ = 0.0;
  std::vector<double> kx_, ky_, k2_, keep_, weight_;
  std::unique_ptr<Plans> plans_;
};

using GridPtr = std::shared_ptr<const TorusGrid>;

inline void require_same_grid(const GridPtr& a, const GridPtr& b, const char* where) {
  if (!a || !b || !a->same_as(*b)) {
    throw GridMismatch(std::string(where) + ": fields live on different grids");
  }
}

}  // namespace chns
