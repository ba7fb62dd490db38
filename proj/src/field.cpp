#include "chns/field.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace chns {

ScalarField::ScalarField(GridPtr grid, double value)
    : grid_(std::move(grid)), values_(grid_ ? grid_->size() : 0, value) {}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_ || values_.size() != grid_->size()) {
    throw GridMismatch("ScalarField: value count does not match grid");
  }
}

ScalarField& ScalarField::operator+=(const ScalarField& o) { return axpy(1.0, o); }
ScalarField& ScalarField::operator-=(const ScalarField& o) { return axpy(-1.0, o); }

ScalarField& ScalarField::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

ScalarField& ScalarField::axpy(double s, const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += s * o.values_[k];
  return *this;
}

double ScalarField::mean() const {
  double acc = 0.0;
  for (double v : values_) acc += v;
  return values_.empty() ? 0.0 : acc / static_cast<double>(values_.size());
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField::finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "hadamard");
  ScalarField out(a.grid());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
  return out;
}

VectorField::VectorField(GridPtr grid) : x_(grid), y_(grid), divergence_free_(true) {}

VectorField::VectorField(ScalarField x, ScalarField y, bool divergence_free)
    : x_(std::move(x)), y_(std::move(y)), divergence_free_(divergence_free) {
  require_same_grid(x_.grid(), y_.grid(), "VectorField");
}

VectorField& VectorField::operator+=(const VectorField& o) { return axpy(1.0, o); }
VectorField& VectorField::operator-=(const VectorField& o) { return axpy(-1.0, o); }

VectorField& VectorField::operator*=(double s) {
  x_ *= s;
  y_ *= s;
  return *this;
}

VectorField& VectorField::axpy(double s, const VectorField& o) {
  x_.axpy(s, o.x_);
  y_.axpy(s, o.y_);
  divergence_free_ = divergence_free_ && o.divergence_free_;
  return *this;
}

double VectorField::max_abs() const { return std::max(x_.max_abs(), y_.max_abs()); }
bool VectorField::finite() const { return x_.finite() && y_.finite(); }

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc * a.grid()->cell_area();
}

double inner(const VectorField& a, const VectorField& b) {
  return inner(a.x(), b.x()) + inner(a.y(), b.y());
}

double norm(const ScalarField& a) { return std::sqrt(inner(a, a)); }
double norm(const VectorField& a) { return std::sqrt(inner(a, a)); }

ScalarField dot(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "dot");
  ScalarField out(a.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a.x()[k] * b.x()[k] + a.y()[k] * b.y()[k];
  return out;
}

VectorField scale(const ScalarField& s, const VectorField& v) {
  return VectorField(hadamard(s, v.x()), hadamard(s, v.y()));
}

}  // namespace chns
