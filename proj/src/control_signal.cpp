#include "chns/control_signal.hpp"

#include <cmath>

namespace chns {

ControlSignal ControlSignal::distributed(VectorSeries values, double dt) {
  if (values.empty()) throw ValidationError("ControlSignal: no nodes");
  if (!(dt > 0.0)) throw ValidationError("ControlSignal: dt must be positive");
  for (const auto& v : values) require_same_grid(values.front().grid(), v.grid(), "ControlSignal");
  ControlSignal c;
  c.kind_ = Kind::distributed;
  c.dt_ = dt;
  c.values_ = std::move(values);
  return c;
}

ControlSignal ControlSignal::zeros(const GridPtr& grid, int nodes, double dt) {
  if (nodes < 1) throw ValidationError("ControlSignal: no nodes");
  return distributed(VectorSeries(static_cast<std::size_t>(nodes), VectorField(grid)), dt);
}

ControlSignal ControlSignal::initial(VectorField value) {
  ControlSignal c;
  c.kind_ = Kind::initial;
  c.values_.push_back(std::move(value));
  return c;
}

const VectorField& ControlSignal::initial_value() const {
  if (kind_ != Kind::initial) throw ValidationError("ControlSignal: not an initial-velocity control");
  return values_.front();
}

void require_compatible(const ControlSignal& a, const ControlSignal& b, const char* where) {
  if (a.kind() != b.kind() || a.nodes() != b.nodes() || a.empty() ||
      (a.kind() == ControlSignal::Kind::distributed && a.dt() != b.dt())) {
    throw GridMismatch(std::string(where) + ": controls live on different time grids");
  }
  require_same_grid(a.grid(), b.grid(), where);
}

ControlSignal& ControlSignal::axpy(double s, const ControlSignal& o) {
  require_compatible(*this, o, "ControlSignal::axpy");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n].axpy(s, o.values_[n]);
  return *this;
}

ControlSignal& ControlSignal::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

ControlSignal operator+(ControlSignal a, const ControlSignal& b) { return a.axpy(1.0, b); }
ControlSignal operator-(ControlSignal a, const ControlSignal& b) { return a.axpy(-1.0, b); }
ControlSignal operator*(double s, ControlSignal a) { return a *= s; }

double inner(const ControlSignal& a, const ControlSignal& b) {
  require_compatible(a, b, "inner");
  if (a.kind() == ControlSignal::Kind::initial) return inner(a[0], b[0]);
  const int last = a.nodes() - 1;
  double acc = 0.0;
  for (int n = 0; n <= last; ++n) acc += node_weight(n, last, a.dt()) * inner(a[n], b[n]);
  return acc;
}

double norm(const ControlSignal& a) { return std::sqrt(inner(a, a)); }

}  // namespace chns
