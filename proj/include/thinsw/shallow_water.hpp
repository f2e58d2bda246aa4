#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "thinsw/fields/norms.hpp"

namespace thinsw {

struct Params {
  double F = 1.0;
  double Re = 1.0;
  double gamma_bar = 1.0;
  double eps = 0.1;

  void validate() const {
    require(std::isfinite(F) && F > 0.0, ErrorKind::Validation, "F must be positive");
    require(std::isfinite(Re) && Re > 0.0, ErrorKind::Validation, "Re must be positive");
    require(std::isfinite(gamma_bar) && gamma_bar >= 0.0, ErrorKind::Validation, "gamma_bar must be >= 0");
    require(std::isfinite(eps) && eps > 0.0 && eps < 1.0, ErrorKind::Validation, "eps must lie in (0, 1)");
  }
  /// Physical Froude number squared F_0^2 = eps F^2 and slip coefficient gamma = eps gamma_bar.
  double froude0_sq() const { return eps * F * F; }
  double gamma() const { return eps * gamma_bar; }
};

/// Below this depth a state is treated as a vacuum.
inline constexpr double kVacuumThreshold = 0.1;

struct SWState {
  double t = 0.0;
  HField h0;
  HVec u0;
  double mass0 = 0.0;

  static SWState make(HField h, HVec u, double t = 0.0) {
    require(int(u.size()) == h.grid.dim, ErrorKind::Validation, "velocity needs one component per axis");
    for (const auto& c : u) require(c.grid == h.grid, ErrorKind::Validation, "fields on different grids");
    require(h.finite(), ErrorKind::Validation, "non-finite depth");
    for (const auto& c : u) require(c.finite(), ErrorKind::Validation, "non-finite velocity");
    require(h.min() > 0.0, ErrorKind::Vacuum, "depth must be positive");
    SWState s;
    s.t = t;
    s.mass0 = integral(h);
    s.h0 = std::move(h);
    s.u0 = std::move(u);
    return s;
  }
  const Grid& grid() const { return h0.grid; }
  double mass() const { return integral(h0); }
};

struct SWRate {
  HField dh0;
  HVec du0;
};

/// h0 = 1 + a cos(kx) [cos(ky)], u0 = b sin(k x_i) along each axis.
inline SWState single_mode_state(const Grid& g, double amplitude, double wavenumber, double velocity_amplitude) {
  HField h = HField::from_function(g, [&](Point p) {
    double c = std::cos(wavenumber * p[0]);
    if (g.dim == 2) c *= std::cos(wavenumber * p[1]);
    return 1.0 + amplitude * c;
  });
  HVec u;
  for (int a = 0; a < g.dim; ++a)
    u.push_back(HField::from_function(g, [&](Point p) { return velocity_amplitude * std::sin(wavenumber * p[a]); }));
  return SWState::make(std::move(h), std::move(u));
}

inline SWState uniform_state(const Grid& g, std::vector<double> velocity) {
  HVec u;
  for (int a = 0; a < g.dim; ++a) u.emplace_back(g, velocity.at(a));
  return SWState::make(HField(g, 1.0), std::move(u));
}

/// Time derivative of (h0, u0): mass equation in divergence form, momentum in
/// velocity form divided by h0. Bilinear terms are dealiased and the result
/// is filtered to the retained band.
inline SWRate sw_rhs(const SWState& s, const Params& p) {
  const Grid& g = s.grid();
  const int dim = g.dim;
  require(s.h0.min() > 0.0, ErrorKind::Vacuum, "sw_rhs: depth not positive");
  const HField& h = s.h0;

  HVec flux;
  for (int a = 0; a < dim; ++a) flux.push_back(dealiased_product(h, s.u0[a]));
  SWRate r;
  r.dh0 = truncate_modes(-divergence(flux));

  std::vector<HVec> grad_u;  // grad_u[i][j] = d_j u_i
  for (int i = 0; i < dim; ++i) grad_u.push_back(gradient(s.u0[i]));
  const HField div_u = divergence(s.u0);
  const HVec grad_h = gradient(h);
  const HField h_div = dealiased_product(h, div_u);
  const HVec grad_h_div = gradient(h_div);

  for (int i = 0; i < dim; ++i) {
    HField adv(g);
    for (int j = 0; j < dim; ++j) adv += dealiased_product(s.u0[j], grad_u[i][j]);
    HField visc(g);
    for (int j = 0; j < dim; ++j) visc += dx(dealiased_product(h, grad_u[i][j] + grad_u[j][i]), j);
    visc += 2.0 * grad_h_div[i];
    visc -= p.gamma_bar * s.u0[i];
    HField du = -adv - grad_h[i] * (1.0 / (p.F * p.F)) + visc / h * (1.0 / p.Re);
    r.du0.push_back(truncate_modes(du));
  }
  return r;
}

/// E = int h|u|^2/2 + h^2/(2F^2).
inline double sw_energy(const SWState& s, const Params& p) {
  HField e = s.h0 * s.h0 * (0.5 / (p.F * p.F));
  for (const auto& c : s.u0) e += 0.5 * s.h0 * c * c;
  return integral(e);
}

namespace detail {

inline SWState axpy(const SWState& s, double dt, const SWRate& r) {
  SWState out = s;
  out.h0 += dt * r.dh0;
  for (std::size_t a = 0; a < out.u0.size(); ++a) out.u0[a] += dt * r.du0[a];
  return out;
}

inline void check_state(const SWState& s) {
  bool finite = s.h0.finite();
  for (const auto& c : s.u0) finite = finite && c.finite();
  if (!finite) throw Error(ErrorKind::Blowup, "non-finite state", s.t);
  if (s.h0.min() <= kVacuumThreshold)
    throw Error(ErrorKind::Vacuum, "min depth " + std::to_string(s.h0.min()) + " below vacuum threshold", s.t);
}

}  // namespace detail

/// One classical RK4 step.
inline SWState sw_step(const SWState& s, const Params& p, double dt) {
  require(dt > 0.0 && std::isfinite(dt), ErrorKind::Validation, "dt must be positive");
  const SWRate k1 = sw_rhs(s, p);
  const SWRate k2 = sw_rhs(detail::axpy(s, 0.5 * dt, k1), p);
  const SWRate k3 = sw_rhs(detail::axpy(s, 0.5 * dt, k2), p);
  const SWRate k4 = sw_rhs(detail::axpy(s, dt, k3), p);
  SWState out = s;
  out.t = s.t + dt;
  out.h0 += (dt / 6.0) * (k1.dh0 + 2.0 * k2.dh0 + 2.0 * k3.dh0 + k4.dh0);
  for (std::size_t a = 0; a < out.u0.size(); ++a)
    out.u0[a] += (dt / 6.0) * (k1.du0[a] + 2.0 * k2.du0[a] + 2.0 * k3.du0[a] + k4.du0[a]);
  detail::check_state(out);
  return out;
}

struct StepBound {
  double advective = 0.0;
  double viscous = 0.0;
  double value() const { return std::min(advective, viscous); }
};

/// Explicit RK4 step bound: advection at the fastest signal speed |u| + sqrt(h)/F
/// and a diffusive limit proportional to Re dx^2.
inline StepBound stable_dt(const SWState& s, const Params& p) {
  const Grid& g = s.grid();
  const double dxs = g.spacing();
  double umax = 0.0;
  if (g.dim == 1) {
    umax = s.u0[0].max_abs();
  } else {
    for (std::size_t j = 0; j < g.size(); ++j) umax = std::max(umax, std::hypot(s.u0[0][j], s.u0[1][j]));
  }
  const double wave = std::sqrt(s.h0.max()) / p.F;
  const double c_visc = g.dim == 1 ? 0.1 : 0.05;
  return {0.5 * dxs / (umax + wave), c_visc * p.Re * dxs * dxs};
}

struct SWDiagnostic {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double min_h = 0.0;
  double max_u = 0.0;
  double tail = 0.0;
};

struct SWTrajectory {
  std::vector<SWState> states;
  std::vector<SWRate> rates;  // sw_rhs at each stored state
  double dt = 0.0;
  int stride = 1;  // solver steps between stored states
  std::string scheme = "rk4-pseudospectral-2/3";
  std::vector<SWDiagnostic> diagnostics;  // one per solver step, including t = 0
  bool tail_flag = false;                 // spectral tail above 1e-8 at some step

  double stored_dt() const { return dt * stride; }
  const SWState& final_state() const { return states.back(); }
};

inline constexpr double kTailThreshold = 1e-8;

inline SWDiagnostic diagnose(const SWState& s, const Params& p) {
  double umax = 0.0;
  for (const auto& c : s.u0) umax = std::max(umax, c.max_abs());
  double tail = spectral_tail_fraction(s.h0);
  for (const auto& c : s.u0) tail = std::max(tail, spectral_tail_fraction(c));
  return {s.t, s.mass(), sw_energy(s, p), s.h0.min(), umax, tail};
}

/// Integrates to T with a uniform step (the last step lands on T exactly).
/// Errors carry the failing time.
inline SWTrajectory sw_solve(const SWState& init, const Params& p, double T, double dt, int stride = 1) {
  p.validate();
  require(T >= 0.0 && std::isfinite(T), ErrorKind::Validation, "T must be >= 0");
  require(dt > 0.0, ErrorKind::Validation, "dt must be positive");
  require(stride >= 1, ErrorKind::Validation, "stride must be >= 1");
  const StepBound bound = stable_dt(init, p);
  require(dt <= bound.value() * (1.0 + 1e-12), ErrorKind::Validation,
          "dt=" + std::to_string(dt) + " exceeds the stability bound " + std::to_string(bound.value()));
  const long steps = std::lround(T / dt);
  require(std::abs(steps * dt - T) <= 1e-9 * std::max(1.0, T), ErrorKind::Validation, "T must be a multiple of dt");
  require(steps % stride == 0, ErrorKind::Validation, "step count must be a multiple of the storage stride");

  SWTrajectory traj;
  traj.dt = dt;
  traj.stride = stride;
  SWState s = init;
  s.t = 0.0;
  traj.states.push_back(s);
  traj.rates.push_back(sw_rhs(s, p));
  traj.diagnostics.push_back(diagnose(s, p));
  for (long n = 1; n <= steps; ++n) {
    s = sw_step(s, p, dt);
    s.t = n * dt;
    auto d = diagnose(s, p);
    traj.tail_flag = traj.tail_flag || d.tail > kTailThreshold;
    traj.diagnostics.push_back(d);
    if (n % stride == 0) {
      traj.states.push_back(s);
      traj.rates.push_back(sw_rhs(s, p));
    }
  }
  traj.tail_flag = traj.tail_flag || traj.diagnostics.front().tail > kTailThreshold;
  return traj;
}

}  // namespace thinsw
