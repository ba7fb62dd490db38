#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chns/grid.hpp"

namespace chns {

/// Real scalar field sampled on a TorusGrid (phi, mu, eta, psi, ...).
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridPtr grid, double value = 0.0);
  ScalarField(GridPtr grid, std::vector<double> values);

  const GridPtr& grid() const { return grid_; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& at(int i, int j) { return values_[static_cast<std::size_t>(j) * grid_->nx() + i]; }
  double at(int i, int j) const { return values_[static_cast<std::size_t>(j) * grid_->nx() + i]; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  /// this += s * o
  ScalarField& axpy(double s, const ScalarField& o);

  double mean() const;
  double max_abs() const;
  bool finite() const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

/// Two-component field (u, U, p, w, h, ...). `divergence_free` is a claim
/// maintained by the operators: linear combinations of divergence-free
/// fields keep it, anything else clears it.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(GridPtr grid);
  VectorField(ScalarField x, ScalarField y, bool divergence_free = false);

  const GridPtr& grid() const { return x_.grid(); }
  const ScalarField& x() const { return x_; }
  const ScalarField& y() const { return y_; }
  ScalarField& x() { return x_; }
  ScalarField& y() { return y_; }
  bool divergence_free() const { return divergence_free_; }
  void set_divergence_free(bool flag) { divergence_free_ = flag; }
  bool empty() const { return x_.empty(); }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
  VectorField& axpy(double s, const VectorField& o);

  double max_abs() const;
  bool finite() const;

 private:
  ScalarField x_;
  ScalarField y_;
  bool divergence_free_ = false;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

/// Trapezoidal (equal-weight) L2 inner products and norms over the torus.
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);
double norm(const ScalarField& a);
double norm(const VectorField& a);
/// a . b pointwise.
ScalarField dot(const VectorField& a, const VectorField& b);
/// s * v pointwise.
VectorField scale(const ScalarField& s, const VectorField& v);

}  // namespace chns
