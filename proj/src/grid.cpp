#include "chns/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace chns {

struct TorusGrid::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~Plans() {
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

std::shared_ptr<const TorusGrid> TorusGrid::create(int nx, int ny, double lx, double ly) {
  if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0) {
    throw std::invalid_argument("TorusGrid: resolution must be even and >= 8");
  }
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
    throw std::invalid_argument("TorusGrid: domain lengths must be positive and finite");
  }
  return std::shared_ptr<const TorusGrid>(new TorusGrid(nx, ny, lx, ly));
}

TorusGrid::TorusGrid(int nx, int ny, double lx, double ly)
    : nx_(nx), ny_(ny), lx_(lx), ly_(ly), plans_(std::make_unique<Plans>()) {
  const std::size_t ns = spectral_size();
  kx_.resize(ns);
  ky_.resize(ns);
  k2_.resize(ns);
  keep_.resize(ns);
  weight_.resize(ns);
  const double sx = 2.0 * std::numbers::pi / lx_;
  const double sy = 2.0 * std::numbers::pi / ly_;
  lambda1_ = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < ns; ++s) {
    const int mx = mode_x(s);
    const int my = mode_y(s);
    const bool nyq_x = (mx == nx_ / 2);
    const bool nyq_y = (std::abs(my) == ny_ / 2);
    kx_[s] = nyq_x ? 0.0 : sx * mx;
    ky_[s] = nyq_y ? 0.0 : sy * my;
    k2_[s] = kx_[s] * kx_[s] + ky_[s] * ky_[s];
    keep_[s] = (3 * mx < nx_ && 3 * std::abs(my) < ny_) ? 1.0 : 0.0;
    weight_[s] = (mx == 0 || nyq_x) ? 1.0 : 2.0;
    if (k2_[s] > 0.0) lambda1_ = std::min(lambda1_, k2_[s]);
  }

  std::vector<double> rbuf(size());
  std::vector<Complex> cbuf(ns);
  auto* cptr = reinterpret_cast<fftw_complex*>(cbuf.data());
  plans_->r2c = fftw_plan_dft_r2c_2d(ny_, nx_, rbuf.data(), cptr, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->c2r = fftw_plan_dft_c2r_2d(ny_, nx_, cptr, rbuf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plans_->r2c || !plans_->c2r) throw std::runtime_error("TorusGrid: FFT planning failed");
}

TorusGrid::~TorusGrid() = default;

void TorusGrid::forward(std::span<const double> in, std::span<Complex> out) const {
  if (in.size() != size() || out.size() != spectral_size()) {
    throw GridMismatch("TorusGrid::forward: buffer size mismatch");
  }
  // r2c does not modify its input, FFTW just lacks const in the signature.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(size());
  for (auto& c : out) c *= scale;
}

void TorusGrid::inverse(std::span<const Complex> in, std::span<double> out) const {
  if (in.size() != spectral_size() || out.size() != size()) {
    throw GridMismatch("TorusGrid::inverse: buffer size mismatch");
  }
  std::vector<Complex> work(in.begin(), in.end());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(work.data()), out.data());
}

}  // namespace chns
