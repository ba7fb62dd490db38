#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "chns/field.hpp"
#include "chns/operators.hpp"

namespace chns {

enum class KernelFamily { gaussian, truncated_newtonian, discrete_delta };

KernelFamily parse_kernel_family(const std::string& name);
std::string to_string(KernelFamily family);

/// Even interaction kernel J sampled on a grid, rescaled so that its discrete
/// mass is exactly `mass`. Immutable after construction.
class Kernel {
 public:
  Kernel(GridPtr grid, KernelFamily family, double epsilon, double mass);

  KernelFamily family() const { return family_; }
  double epsilon() const { return epsilon_; }
  double mass() const { return mass_; }
  const GridPtr& grid() const { return symbol_.grid; }
  const ConvolutionSymbol& symbol() const { return symbol_; }
  /// Grid samples J(x_i - 0), minimal-image displacement.
  const ScalarField& samples() const { return samples_; }

 private:
  KernelFamily family_;
  double epsilon_;
  double mass_;
  ScalarField samples_;
  ConvolutionSymbol symbol_;
};

/// Polynomial free-energy density F(s) = sum_i c_i s^i.
class Potential {
 public:
  explicit Potential(std::vector<double> coefficients);
  /// (s^2 - 1)^2
  static Potential double_well();

  const std::vector<double>& coefficients() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  double F(double s) const { return eval(coeffs_, s); }
  double dF(double s) const { return eval(d1_, s); }
  double d2F(double s) const { return eval(d2_, s); }
  double d3F(double s) const { return eval(d3_, s); }

  ScalarField F(const ScalarField& phi) const;
  ScalarField dF(const ScalarField& phi) const;
  ScalarField d2F(const ScalarField& phi) const;

 private:
  static double eval(const std::vector<double>& c, double s);
  std::vector<double> coeffs_, d1_, d2_, d3_;
};

/// Runtime certificate for the structural hypotheses on (J, F).
struct AssumptionReport {
  double c0 = 0.0;              ///< min F'' + min a over the sampled range
  double min_d2F = 0.0;
  double min_a = 0.0;
  bool growth_ok = false;       ///< F'' + a >= C1 |s|^(2q) - C2
  double growth_c1 = 0.0, growth_c2 = 0.0, growth_q = 0.0;
  bool coercivity_ok = false;   ///< |F'|^r <= C3 |F| + C4
  double coercivity_r = 0.0, coercivity_c3 = 0.0, coercivity_c4 = 0.0;
  double s_min = -3.0, s_max = 3.0;
};

class AssumptionViolation : public std::runtime_error {
 public:
  AssumptionViolation(const std::string& what, AssumptionReport report)
      : std::runtime_error(what), report_(report) {}
  const AssumptionReport& report() const { return report_; }

 private:
  AssumptionReport report_;
};

/// a(x) = (J * 1)(x). Constant on the torus, equal to the kernel mass.
ScalarField kernel_weight_a(const Kernel& kernel, const GridPtr& grid);

/// mu = a phi - J * phi + F'(phi), pointwise.
ScalarField chemical_potential(const ScalarField& phi, const Kernel& kernel,
                               const Potential& potential);

/// P(mu grad phi); optionally 2/3-dealiased before projecting.
VectorField korteweg_force(const ScalarField& mu, const ScalarField& phi, bool dealias = false);

/// Certifies the hypotheses over s in [s_min, s_max] using `samples` points
/// plus refinement of interior minima of F''. Throws AssumptionViolation
/// when c0 <= 0.
AssumptionReport validate_assumptions(const Kernel& kernel, const Potential& potential,
                                      double s_min = -3.0, double s_max = 3.0,
                                      int samples = 2001);

}  // namespace chns
