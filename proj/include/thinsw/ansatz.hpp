#pragma once

#include <bit>
#include <cstdint>
#include <cstring>

#include "thinsw/shallow_water.hpp"

namespace thinsw {

/// Hash of a state's samples and time; pairs an ansatz with its rate.
inline std::uint64_t state_fingerprint(const SWState& s) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(s.t);
  for (double v : s.h0.values) mix(v);
  for (const auto& c : s.u0)
    for (double v : c.values) mix(v);
  return h;
}

/// Second-order approximate solution
///   u_H = u0 + u1 z + u2 z^2/2,  u_V = w1 z + w2 z^2/2 + w3 z^3/6,  p = p0 - z,
/// with p0 = eps h0 - (2 eps F^2 / Re)(1 + eps^2 gamma_bar) div u0.
struct AnsatzFields {
  SWState base;
  Params params;
  double eps = 0.0;
  HVec u0, u1, u2;
  HField w1, w2, w3;
  HField p0;
  std::uint64_t fingerprint = 0;

  const Grid& grid() const { return base.grid(); }
  int dim() const { return base.grid().dim; }
};

struct AnsatzRate {
  HField dh0;
  HVec du0, du1, du2;
  HField dw1, dw2, dw3;
  HField dp0;
  std::uint64_t fingerprint = 0;
};

namespace detail {

inline double pressure_factor(const Params& p) {
  return 2.0 * p.eps * p.F * p.F / p.Re * (1.0 + p.eps * p.eps * p.gamma_bar);
}

/// (D(u) + 2 div(u) Id) g, with D(u)_ij = d_i u_j + d_j u_i.
inline HVec stress_times(const std::vector<HVec>& grad_u, const HField& div_u, const HVec& g) {
  const std::size_t dim = g.size();
  HVec out;
  for (std::size_t i = 0; i < dim; ++i) {
    HField acc = 2.0 * div_u * g[i];
    for (std::size_t j = 0; j < dim; ++j) acc += (grad_u[i][j] + grad_u[j][i]) * g[j];
    out.push_back(std::move(acc));
  }
  return out;
}

inline std::vector<HVec> velocity_gradient(const HVec& u) {
  std::vector<HVec> g;  // g[i][j] = d_j u_i
  for (const auto& c : u) g.push_back(gradient(c));
  return g;
}

}  // namespace detail

inline AnsatzFields build_ansatz(const SWState& s, const Params& p) {
  p.validate();
  require(s.h0.min() > 0.0, ErrorKind::Vacuum, "build_ansatz: depth not positive");
  const int dim = s.grid().dim;
  AnsatzFields a;
  a.base = s;
  a.params = p;
  a.eps = p.eps;
  a.u0 = s.u0;
  for (const auto& c : s.u0) a.u1.push_back(p.gamma() * c);

  const HField div_u = divergence(s.u0);
  a.w1 = -div_u;
  const HVec grad_w1 = gradient(a.w1);
  const HVec grad_h = gradient(s.h0);
  HVec slope;
  for (const auto& c : grad_h) slope.push_back(c / s.h0);
  const HVec stress = detail::stress_times(detail::velocity_gradient(s.u0), div_u, slope);
  for (int i = 0; i < dim; ++i) a.u2.push_back(-grad_w1[i] + stress[i] - p.gamma_bar * s.u0[i] / s.h0);

  a.w2 = -divergence(a.u1);
  a.w3 = -divergence(a.u2);
  a.p0 = p.eps * s.h0 - detail::pressure_factor(p) * div_u;
  a.fingerprint = state_fingerprint(s);
  return a;
}

/// Exact time derivatives of every coefficient, by the chain rule with
/// (dh0, du0) = sw_rhs(s, p).
inline AnsatzRate ansatz_rate(const SWState& s, const Params& p) {
  p.validate();
  require(s.h0.min() > 0.0, ErrorKind::Vacuum, "ansatz_rate: depth not positive");
  const int dim = s.grid().dim;
  const SWRate sr = sw_rhs(s, p);
  const HField& h = s.h0;
  AnsatzRate r;
  r.dh0 = sr.dh0;
  r.du0 = sr.du0;
  for (const auto& c : sr.du0) r.du1.push_back(p.gamma() * c);

  const HField div_u = divergence(s.u0);
  const HField ddiv = divergence(sr.du0);
  r.dw1 = -ddiv;
  const HVec grad_dw1 = gradient(r.dw1);
  const HVec grad_h = gradient(h);
  const HVec grad_dh = gradient(sr.dh0);
  HVec slope, dslope;
  for (int j = 0; j < dim; ++j) {
    slope.push_back(grad_h[j] / h);
    dslope.push_back(grad_dh[j] / h - grad_h[j] * sr.dh0 / (h * h));
  }
  const HVec term_a = detail::stress_times(detail::velocity_gradient(sr.du0), ddiv, slope);
  const HVec term_b = detail::stress_times(detail::velocity_gradient(s.u0), div_u, dslope);
  for (int i = 0; i < dim; ++i) {
    r.du2.push_back(-grad_dw1[i] + term_a[i] + term_b[i] - p.gamma_bar * sr.du0[i] / h +
                    p.gamma_bar * s.u0[i] * sr.dh0 / (h * h));
  }
  r.dw2 = -divergence(r.du1);
  r.dw3 = -divergence(r.du2);
  r.dp0 = p.eps * sr.dh0 - detail::pressure_factor(p) * ddiv;
  r.fingerprint = state_fingerprint(s);
  return r;
}

struct AnsatzPoint {
  std::array<double, 2> uH{0.0, 0.0};
  double uV = 0.0;
  double pres = 0.0;
};

/// Horner evaluation at node x_index and height z; heights up to 1.01 eps h0 are
/// accepted so surface nodes can be sampled with a margin.
inline AnsatzPoint eval_ansatz(const AnsatzFields& a, std::size_t x_index, double z) {
  const double top = a.eps * a.base.h0[x_index];
  require(z >= 0.0 && z <= 1.01 * top, ErrorKind::Validation, "eval_ansatz: height outside the layer");
  AnsatzPoint out;
  for (int i = 0; i < a.dim(); ++i)
    out.uH[i] = a.u0[i][x_index] + z * (a.u1[i][x_index] + z * (0.5 * a.u2[i][x_index]));
  out.uV = z * (a.w1[x_index] + z * (0.5 * a.w2[x_index] + z * (a.w3[x_index] / 6.0)));
  out.pres = a.p0[x_index] - z;
  return out;
}

}  // namespace thinsw
