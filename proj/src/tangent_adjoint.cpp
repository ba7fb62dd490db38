#include "chns/tangent_adjoint.hpp"

#include <algorithm>
#include <cmath>

#include "sweep_detail.hpp"

namespace chns {

namespace {

void check_base(const Model& model, const Trajectory& base, const char* where) {
  if (base.steps() != model.steps() || std::abs(base.dt - model.dt()) > 1e-12 * model.dt()) {
    throw ReplayError(std::string(where) + ": base trajectory does not match the model time grid");
  }
  for (const auto& s : base.states) {
    if (s.u.empty() || s.phi.empty()) {
      throw ReplayError(std::string(where) + ": base trajectory has missing states");
    }
    require_same_grid(model.grid(), s.u.grid(), where);
  }
}

/// Frozen coefficients of one base node.
struct BaseNode {
  const FlowState* state;
  ScalarField mu;
  VectorField dphi;
  detail::Jacobian du;
  ScalarField d2F;
};

BaseNode base_node(const Model& model, const FlowState& s) {
  return {&s, chemical_potential(s.phi, model.kernel(), model.potential()), grad(s.phi),
          detail::jacobian(s.u), model.potential().d2F(s.phi)};
}

void tangent_step(const Model& model, const BaseNode& b, VectorField& w, ScalarField& psi,
                  const VectorField& du_control) {
  const GridPtr& grid = model.grid();
  const bool trunc = model.solver().dealias;
  const double dt = model.dt();
  const double S = model.stabilization();
  const VectorField& u = b.state->u;
  const ScalarField& phi = b.state->phi;

  ScalarField mu_t = hadamard(model.weight_a(), psi);
  mu_t -= convolve(model.kernel().symbol(), psi);
  mu_t += hadamard(b.d2F, psi);

  const detail::Jacobian dw = detail::jacobian(w);
  const VectorField dpsi = grad(psi);
  ScalarField nx(grid), ny(grid);
  for (std::size_t k = 0; k < nx.size(); ++k) {
    nx[k] = -(w.x()[k] * b.du.xx[k] + w.y()[k] * b.du.xy[k]) -
            (u.x()[k] * dw.xx[k] + u.y()[k] * dw.xy[k]) + mu_t[k] * b.dphi.x()[k] +
            b.mu[k] * dpsi.x()[k];
    ny[k] = -(w.x()[k] * b.du.yx[k] + w.y()[k] * b.du.yy[k]) -
            (u.x()[k] * dw.yx[k] + u.y()[k] * dw.yy[k]) + mu_t[k] * b.dphi.y()[k] +
            b.mu[k] * dpsi.y()[k];
  }
  Spectrum fx = detail::spectrum_of(nx, trunc);
  Spectrum fy = detail::spectrum_of(ny, trunc);
  if (!du_control.empty()) {
    spectral::axpy(fx, 1.0, transform(du_control.x()));
    spectral::axpy(fy, 1.0, transform(du_control.y()));
  }

  ScalarField g = mu_t;
  g.axpy(-S, psi);
  ScalarField qx = hadamard(w.x(), phi);
  qx += hadamard(u.x(), psi);
  ScalarField qy = hadamard(w.y(), phi);
  qy += hadamard(u.y(), psi);

  VectorField w_next = detail::implicit_velocity_update(w, fx, fy, dt, model.solver().nu * dt);
  psi = detail::implicit_phase_update(psi, detail::spectrum_of(g, trunc), detail::spectrum_of(qx, trunc),
                                      detail::spectrum_of(qy, trunc), dt, S * dt);
  w = std::move(w_next);
}

}  // namespace

TangentTrajectory tangent_solve(const Model& model, const Trajectory& base,
                                const ControlSignal& delta_control, const VectorField& w0,
                                const ScalarField& psi0, int start) {
  check_base(model, base, "tangent_solve");
  const int N = model.steps();
  if (start < 0 || start > N) throw ValidationError("tangent_solve: start node out of range");
  const GridPtr& grid = model.grid();
  require_same_grid(grid, w0.grid(), "tangent_solve");
  require_same_grid(grid, psi0.grid(), "tangent_solve");

  VectorField w = leray_project(w0);
  const bool distributed = !delta_control.empty() && delta_control.kind() == ControlSignal::Kind::distributed;
  if (!delta_control.empty() && !distributed) w += leray_project(delta_control.initial_value());
  if (distributed && delta_control.nodes() != N + 1) {
    throw GridMismatch("tangent_solve: control does not match the trajectory time grid");
  }
  ScalarField psi = psi0;

  TangentTrajectory out;
  out.dt = model.dt();
  out.start = start;
  out.w.assign(static_cast<std::size_t>(N) + 1, VectorField(grid));
  out.psi.assign(static_cast<std::size_t>(N) + 1, ScalarField(grid));
  out.w[start] = w;
  out.psi[start] = psi;
  static const VectorField none;
  for (int n = start; n < N; ++n) {
    const BaseNode b = base_node(model, base[n]);
    tangent_step(model, b, w, psi, distributed ? delta_control[n] : none);
    if (!w.finite() || !psi.finite()) throw NumericError("tangent_solve: non-finite tangent state");
    out.w[n + 1] = w;
    out.psi[n + 1] = psi;
  }
  return out;
}

AdjointTrajectory adjoint_solve(const Model& model, const Trajectory& base, AdjointMode mode,
                                const CostTargets& targets) {
  check_base(model, base, "adjoint_solve");
  const int N = model.steps();
  const GridPtr& grid = model.grid();
  targets.check(grid, N + 1);
  const bool trunc = model.solver().dealias;
  const double dt = model.dt();
  const double S = model.stabilization();
  const ScalarField& a = model.weight_a();
  const VectorField grad_a = grad(a);
  const auto& J = model.kernel().symbol();

  AdjointTrajectory out;
  out.dt = dt;
  out.mode = mode;
  out.p.assign(static_cast<std::size_t>(N) + 1, VectorField(grid));
  out.eta.assign(static_cast<std::size_t>(N) + 1, ScalarField(grid));

  VectorField p = leray_project(base[N].u - targets.final_velocity);
  ScalarField eta = base[N].phi - targets.final_phase;
  out.p[N] = p;
  out.eta[N] = eta;

  for (int n = N - 1; n >= 0; --n) {
    const FlowState& s = base[n];
    const VectorField& u = s.u;
    const ScalarField& phi = s.phi;
    const detail::Jacobian du = detail::jacobian(u);
    const detail::Jacobian dp = detail::jacobian(p);
    const VectorField dphi = grad(phi);
    const VectorField deta = grad(eta);
    const ScalarField lap_eta = laplacian(eta);
    const VectorField dJphi = grad(convolve(J, phi));
    const ScalarField d2F = model.potential().d2F(phi);

    // Velocity: explicit part of -p_t at level n.
    ScalarField nx(grid), ny(grid);
    for (std::size_t k = 0; k < nx.size(); ++k) {
      nx[k] = -(p.x()[k] * du.xx[k] + p.y()[k] * du.yx[k]) +
              (u.x()[k] * dp.xx[k] + u.y()[k] * dp.xy[k]) - eta[k] * dphi.x()[k];
      ny[k] = -(p.x()[k] * du.xy[k] + p.y()[k] * du.yy[k]) +
              (u.x()[k] * dp.yx[k] + u.y()[k] * dp.yy[k]) - eta[k] * dphi.y()[k];
    }
    Spectrum fx = detail::spectrum_of(nx, trunc);
    Spectrum fy = detail::spectrum_of(ny, trunc);
    const VectorField mismatch = u - targets.velocity[n];
    const VectorField src_u = mode == AdjointMode::distributed ? -1.0 * laplacian(mismatch) : mismatch;
    spectral::axpy(fx, 1.0, transform(src_u.x()));
    spectral::axpy(fy, 1.0, transform(src_u.y()));

    // Phase: explicit part of -eta_t at level n.
    ScalarField pdphi(grid), nonlinear(grid);
    for (std::size_t k = 0; k < pdphi.size(); ++k) {
      const double px = p.x()[k], py = p.y()[k];
      pdphi[k] = px * dphi.x()[k] + py * dphi.y()[k];
      nonlinear[k] = d2F[k] * lap_eta[k] + (dJphi.x()[k] * px + dJphi.y()[k] * py) -
                     phi[k] * (grad_a.x()[k] * px + grad_a.y()[k] * py) +
                     (u.x()[k] * deta.x()[k] + u.y()[k] * deta.y()[k]);
    }
    ScalarField r = hadamard(a, lap_eta);
    r.axpy(-S, lap_eta);
    r -= convolve(J, lap_eta);
    r -= convolve(J, trunc ? dealias(pdphi) : pdphi);
    r += trunc ? dealias(nonlinear) : nonlinear;
    r += phi - targets.phase[n];

    VectorField p_next = detail::implicit_velocity_update(p, fx, fy, dt, model.solver().nu * dt);
    Spectrum se = transform(eta);
    spectral::axpy(se, dt, transform(r));
    spectral::implicit_solve(se, S * dt);
    eta = synthesize(se);
    p = std::move(p_next);
    if (!p.finite() || !eta.finite()) throw NumericError("adjoint_solve: non-finite adjoint state");
    out.p[n] = p;
    out.eta[n] = eta;
  }
  return out;
}

DualityReport duality_gap(const Model& model, const Trajectory& base,
                          const ControlSignal& delta_control, AdjointMode mode,
                          const CostTargets& targets) {
  const GridPtr& grid = model.grid();
  const int N = model.steps();
  const bool initial = !delta_control.empty() && delta_control.kind() == ControlSignal::Kind::initial;
  if (mode == AdjointMode::assimilation && !delta_control.empty() && !initial) {
    throw ValidationError("duality_gap: assimilation pairs with an initial-velocity perturbation");
  }
  if (mode == AdjointMode::distributed && initial) {
    throw ValidationError("duality_gap: distributed pairing needs a distributed perturbation");
  }
  const TangentTrajectory tan =
      tangent_solve(model, base, delta_control, VectorField(grid), ScalarField(grid));
  const AdjointTrajectory adj = adjoint_solve(model, base, mode, targets);

  DualityReport rep;
  for (int n = 0; n <= N; ++n) {
    const double wn = node_weight(n, N, model.dt());
    const VectorField du = base[n].u - targets.velocity[n];
    const double vel = mode == AdjointMode::distributed ? gradient_inner(du, tan.w[n]) : inner(du, tan.w[n]);
    rep.state_pairing += wn * (vel + inner(base[n].phi - targets.phase[n], tan.psi[n]));
  }
  rep.state_pairing += inner(base[N].u - targets.final_velocity, tan.w[N]) +
                       inner(base[N].phi - targets.final_phase, tan.psi[N]);

  if (delta_control.empty()) {
    rep.control_pairing = 0.0;
  } else if (initial) {
    rep.control_pairing = inner(delta_control.initial_value(), adj.p[0]);
  } else {
    for (int n = 0; n <= N; ++n) {
      rep.control_pairing += node_weight(n, N, model.dt()) * inner(delta_control[n], adj.p[n]);
    }
  }
  const double scale = std::max(std::abs(rep.state_pairing), std::abs(rep.control_pairing));
  rep.gap = scale == 0.0 ? 0.0 : std::abs(rep.state_pairing - rep.control_pairing) / scale;
  return rep;
}

}  // namespace chns
