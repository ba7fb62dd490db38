#include "chns/physics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace chns {

KernelFamily parse_kernel_family(const std::string& name) {
  if (name == "gaussian") return KernelFamily::gaussian;
  if (name == "truncated-newtonian") return KernelFamily::truncated_newtonian;
  if (name == "discrete-delta") return KernelFamily::discrete_delta;
  throw std::invalid_argument("unknown kernel family '" + name + "'");
}

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::truncated_newtonian: return "truncated-newtonian";
    case KernelFamily::discrete_delta: return "discrete-delta";
  }
  return "unknown";
}

namespace {

// Minimal-image displacement of node i from the origin.
double periodic_offset(double x, double l) { return x <= 0.5 * l ? x : x - l; }

double kernel_profile(KernelFamily family, double r, double eps, double r_floor) {
  switch (family) {
    case KernelFamily::gaussian:
      return std::exp(-0.5 * r * r / (eps * eps));
    case KernelFamily::truncated_newtonian:
      // 2D Newtonian potential, shifted to vanish at r = eps and cut there.
      return r < eps ? std::log(eps / std::max(r, r_floor)) / (2.0 * std::numbers::pi) : 0.0;
    case KernelFamily::discrete_delta:
      return r == 0.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

}  // namespace

Kernel::Kernel(GridPtr grid, KernelFamily family, double epsilon, double mass)
    : family_(family), epsilon_(epsilon), mass_(mass), samples_(grid) {
  if (!std::isfinite(mass)) throw std::invalid_argument("Kernel: mass must be finite");
  if (family != KernelFamily::discrete_delta && !(epsilon > 0.0)) {
    throw std::invalid_argument("Kernel: epsilon must be positive");
  }
  const double r_floor = 0.5 * std::min(grid->dx(), grid->dy());
  double raw_mass = 0.0;
  for (int j = 0; j < grid->ny(); ++j) {
    const double ry = periodic_offset(grid->y(j), grid->ly());
    for (int i = 0; i < grid->nx(); ++i) {
      const double rx = periodic_offset(grid->x(i), grid->lx());
      const double v = kernel_profile(family, std::hypot(rx, ry), epsilon, r_floor);
      samples_.at(i, j) = v;
      raw_mass += v;
    }
  }
  raw_mass *= grid->cell_area();
  if (!(raw_mass > 0.0)) throw std::invalid_argument("Kernel: profile has no mass on this grid");
  samples_ *= mass / raw_mass;

  symbol_.grid = grid;
  symbol_.multiplier.resize(grid->spectral_size());
  const Spectrum s = transform(samples_);
  // The profile is even, so its transform is real; dropping the roundoff
  // imaginary part keeps the convolution exactly self-adjoint.
  for (std::size_t k = 0; k < s.c.size(); ++k) symbol_.multiplier[k] = grid->area() * s.c[k].real();
  symbol_.multiplier[0] = mass;
}

Potential::Potential(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  auto derive = [](const std::vector<double>& c) {
    std::vector<double> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
    if (d.empty()) d.push_back(0.0);
    return d;
  };
  d1_ = derive(coeffs_);
  d2_ = derive(d1_);
  d3_ = derive(d2_);
}

Potential Potential::double_well() { return Potential({1.0, 0.0, -2.0, 0.0, 1.0}); }

double Potential::eval(const std::vector<double>& c, double s) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
  return acc;
}

ScalarField Potential::F(const ScalarField& phi) const {
  ScalarField out(phi.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = F(phi[k]);
  return out;
}

ScalarField Potential::dF(const ScalarField& phi) const {
  ScalarField out(phi.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = dF(phi[k]);
  return out;
}

ScalarField Potential::d2F(const ScalarField& phi) const {
  ScalarField out(phi.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = d2F(phi[k]);
  return out;
}

ScalarField kernel_weight_a(const Kernel& kernel, const GridPtr& grid) {
  require_same_grid(kernel.grid(), grid, "kernel_weight_a");
  return convolve(kernel.symbol(), ScalarField(grid, 1.0));
}

ScalarField chemical_potential(const ScalarField& phi, const Kernel& kernel,
                               const Potential& potential) {
  require_same_grid(kernel.grid(), phi.grid(), "chemical_potential");
  if (!phi.finite()) throw NumericError("chemical_potential: non-finite phi");
  const ScalarField a = kernel_weight_a(kernel, phi.grid());
  ScalarField mu = hadamard(a, phi);
  mu -= convolve(kernel.symbol(), phi);
  mu += potential.dF(phi);
  if (!mu.finite()) throw NumericError("chemical_potential: non-finite mu");
  return mu;
}

VectorField korteweg_force(const ScalarField& mu, const ScalarField& phi, bool dealias_product) {
  require_same_grid(mu.grid(), phi.grid(), "korteweg_force");
  VectorField f = scale(mu, grad(phi));
  if (dealias_product) f = dealias(f);
  return leray_project(f);
}

AssumptionReport validate_assumptions(const Kernel& kernel, const Potential& potential,
                                      double s_min, double s_max, int samples) {
  if (samples < 100) throw std::invalid_argument("validate_assumptions: need at least 100 samples");
  if (!(s_min < s_max)) throw std::invalid_argument("validate_assumptions: empty s range");

  AssumptionReport rep;
  rep.s_min = s_min;
  rep.s_max = s_max;

  const ScalarField a = kernel_weight_a(kernel, kernel.grid());
  rep.min_a = std::numeric_limits<double>::infinity();
  for (double v : a.values()) rep.min_a = std::min(rep.min_a, v);

  const double h = (s_max - s_min) / (samples - 1);
  auto node = [&](int i) { return i == samples - 1 ? s_max : s_min + h * i; };

  double min_d2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) min_d2 = std::min(min_d2, potential.d2F(node(i)));
  // Interior minima of F'' sit at sign changes of F''' from - to +.
  for (int i = 0; i + 1 < samples; ++i) {
    double lo = node(i), hi = node(i + 1);
    if (!(potential.d3F(lo) < 0.0 && potential.d3F(hi) >= 0.0)) continue;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      (potential.d3F(mid) < 0.0 ? lo : hi) = mid;
    }
    min_d2 = std::min({min_d2, potential.d2F(lo), potential.d2F(hi)});
  }
  rep.min_d2F = min_d2;
  rep.c0 = min_d2 + rep.min_a;

  const int d = potential.degree();
  const double lead = potential.coefficients().back();
  if (d >= 4 && d % 2 == 0 && lead > 0.0) {
    rep.growth_q = 0.5 * (d - 2);
    rep.growth_c1 = 0.5 * lead * d * (d - 1);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double s = node(i);
      worst = std::max(worst, rep.growth_c1 * std::pow(std::abs(s), 2.0 * rep.growth_q) -
                                  potential.d2F(s) - rep.min_a);
    }
    rep.growth_c2 = std::max(worst, std::numeric_limits<double>::min());
    rep.growth_ok = true;
  }
  if (d >= 2 && d % 2 == 0 && lead > 0.0) {
    rep.coercivity_r = std::min(2.0, static_cast<double>(d) / (d - 1));
    rep.coercivity_c3 = 2.0 * std::pow(d * lead, rep.coercivity_r) / lead;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double s = node(i);
      worst = std::max(worst, std::pow(std::abs(potential.dF(s)), rep.coercivity_r) -
                                  rep.coercivity_c3 * std::abs(potential.F(s)));
    }
    rep.coercivity_c4 = worst;
    rep.coercivity_ok = rep.coercivity_r > 1.0 && rep.coercivity_r <= 2.0;
  }

  if (!(rep.c0 > 0.0)) {
    std::ostringstream msg;
    msg << "assumption item 2 violated: need F''(s) + a(x) >= C0 > 0, got C0 = " << rep.c0
        << " (min F'' = " << rep.min_d2F << " on [" << s_min << ", " << s_max
        << "], min a = " << rep.min_a << ")";
    throw AssumptionViolation(msg.str(), rep);
  }
  return rep;
}

}  // namespace chns
