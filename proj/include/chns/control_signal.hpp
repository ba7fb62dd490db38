#pragma once

#include <vector>

#include "chns/field.hpp"

namespace chns {

using VectorSeries = std::vector<VectorField>;
using ScalarSeries = std::vector<ScalarField>;

/// Trapezoidal weight of node n among nodes 0..last with spacing dt.
inline double node_weight(int n, int last, double dt) {
  return (n == 0 || n == last) ? 0.5 * dt : dt;
}

/// A control: either one velocity field per trajectory node (distributed
/// forcing) or a single initial velocity.
class ControlSignal {
 public:
  enum class Kind { distributed, initial };

  ControlSignal() = default;
  static ControlSignal distributed(VectorSeries values, double dt);
  static ControlSignal zeros(const GridPtr& grid, int nodes, double dt);
  static ControlSignal initial(VectorField value);

  Kind kind() const { return kind_; }
  double dt() const { return dt_; }
  int nodes() const { return static_cast<int>(values_.size()); }
  bool empty() const { return values_.empty(); }
  const GridPtr& grid() const { return values_.front().grid(); }

  const VectorField& operator[](int n) const { return values_[static_cast<std::size_t>(n)]; }
  VectorField& operator[](int n) { return values_[static_cast<std::size_t>(n)]; }
  const VectorSeries& values() const { return values_; }
  /// Value as initial velocity; requires kind() == initial.
  const VectorField& initial_value() const;

  ControlSignal& axpy(double s, const ControlSignal& o);
  ControlSignal& operator*=(double s);

 private:
  Kind kind_ = Kind::distributed;
  double dt_ = 0.0;
  VectorSeries values_;
};

ControlSignal operator+(ControlSignal a, const ControlSignal& b);
ControlSignal operator-(ControlSignal a, const ControlSignal& b);
ControlSignal operator*(double s, ControlSignal a);

/// L2(0,T; L2) with trapezoidal time weights for distributed controls,
/// plain L2 for initial controls.
double inner(const ControlSignal& a, const ControlSignal& b);
double norm(const ControlSignal& a);

/// Throws unless a and b share kind, node count, time step and grid.
void require_compatible(const ControlSignal& a, const ControlSignal& b, const char* where);

}  // namespace chns
