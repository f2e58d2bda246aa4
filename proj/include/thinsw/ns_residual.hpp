#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "thinsw/ansatz.hpp"

namespace thinsw {

/// Polynomial in z with horizontal-field coefficients: sum_k c[k] z^k.
struct ZPoly {
  std::vector<HField> c;

  ZPoly() = default;
  explicit ZPoly(std::vector<HField> coef) : c(std::move(coef)) {}
  static ZPoly constant(const HField& f) { return ZPoly({f}); }

  int degree() const { return int(c.size()) - 1; }
  const Grid& grid() const { return c.front().grid; }

  ZPoly& operator+=(const ZPoly& o) {
    if (c.empty()) return *this = o;
    if (o.c.empty()) return *this;
    while (c.size() < o.c.size()) c.emplace_back(grid());
    for (std::size_t k = 0; k < o.c.size(); ++k) c[k] += o.c[k];
    return *this;
  }
  ZPoly& operator*=(double s) {
    for (auto& f : c) f *= s;
    return *this;
  }

  /// Value at node j and height z (Horner).
  double at(std::size_t j, double z) const {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * z + c[k][j];
    return v;
  }
  /// Pointwise value at heights z(x).
  HField eval(const HField& z) const {
    HField out(z.grid);
    for (std::size_t j = 0; j < z.size(); ++j) out[j] = at(j, z[j]);
    return out;
  }
};

inline ZPoly operator+(ZPoly a, const ZPoly& b) { return a += b; }
inline ZPoly operator-(ZPoly a, const ZPoly& b) {
  ZPoly nb = b;
  nb *= -1.0;
  return a += nb;
}
inline ZPoly operator*(double s, ZPoly a) { return a *= s; }
inline ZPoly operator*(const ZPoly& a, const ZPoly& b) {
  if (a.c.empty() || b.c.empty()) return {};
  std::vector<HField> out(a.c.size() + b.c.size() - 1, HField(a.grid()));
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) out[i + j] += a.c[i] * b.c[j];
  return ZPoly(std::move(out));
}
inline ZPoly operator*(const HField& f, const ZPoly& a) { return ZPoly::constant(f) * a; }

inline ZPoly zdiff(const ZPoly& a) {
  if (a.c.size() <= 1) return ZPoly({HField(a.grid())});
  std::vector<HField> out;
  for (std::size_t k = 1; k < a.c.size(); ++k) out.push_back(double(k) * a.c[k]);
  return ZPoly(std::move(out));
}
inline ZPoly xdiff(const ZPoly& a, int axis) {
  ZPoly out;
  for (const auto& f : a.c) out.c.push_back(dx(f, axis));
  return out;
}

/// Sum over eps powers l of eps^l * poly_l; the ansatz coefficients depend
/// polynomially on eps (with one inverse power from the pressure scaling), so
/// every residual term splits exactly into eps-orders.
struct EPoly {
  std::map<int, ZPoly> by_power;

  EPoly() = default;
  EPoly(int power, ZPoly p) { by_power.emplace(power, std::move(p)); }

  EPoly& operator+=(const EPoly& o) {
    for (const auto& [l, p] : o.by_power) by_power[l] += p;
    return *this;
  }
  EPoly& operator*=(double s) {
    for (auto& [l, p] : by_power) p *= s;
    return *this;
  }
  /// Plain z-polynomial at a given eps.
  ZPoly at_eps(double eps) const {
    ZPoly out;
    for (const auto& [l, p] : by_power) out += std::pow(eps, l) * p;
    return out;
  }
};

inline EPoly operator+(EPoly a, const EPoly& b) { return a += b; }
inline EPoly operator-(EPoly a, const EPoly& b) {
  EPoly nb = b;
  nb *= -1.0;
  return a += nb;
}
inline EPoly operator*(double s, EPoly a) { return a *= s; }
inline EPoly operator*(const EPoly& a, const EPoly& b) {
  EPoly out;
  for (const auto& [la, pa] : a.by_power)
    for (const auto& [lb, pb] : b.by_power) out.by_power[la + lb] += pa * pb;
  return out;
}
inline EPoly zdiff(const EPoly& a) {
  EPoly out;
  for (const auto& [l, p] : a.by_power) out.by_power[l] = zdiff(p);
  return out;
}
inline EPoly xdiff(const EPoly& a, int axis) {
  EPoly out;
  for (const auto& [l, p] : a.by_power) out.by_power[l] = xdiff(p, axis);
  return out;
}
inline EPoly eps_const(int power, const HField& f) { return EPoly(power, ZPoly::constant(f)); }

/// The ansatz as eps-graded z-polynomials: horizontal velocity, vertical velocity, pressure.
struct AnsatzPolys {
  std::vector<EPoly> uH;
  EPoly uV;
  EPoly p;
};

/// Rebuilds the eps dependence of the stored coefficients:
/// u1 = eps gb u0, w2 = eps gb w1, p0 = eps (h0 + K w1) + eps^3 K gb w1 with K = 2F^2/Re.
/// Whatever the stored u1, w2, p0 hold beyond that (roundoff, or tampering) is
/// kept at eps^0, so the polynomials always reproduce the stored ansatz.
inline AnsatzPolys graded_polys(const HVec& u0, const HVec& u1, const HVec& u2, const HField& w1, const HField& w2,
                                const HField& w3, const HField& p0, const HField& p0_graded_eps1, const Params& prm,
                                bool hydrostatic) {
  const Grid& g = w1.grid;
  const HField zero(g);
  const double gb = prm.gamma_bar, eps = prm.eps;
  const double K = 2.0 * prm.F * prm.F / prm.Re;
  AnsatzPolys out;
  for (std::size_t i = 0; i < u0.size(); ++i)
    out.uH.push_back(EPoly(0, ZPoly({u0[i], u1[i] - eps * gb * u0[i], 0.5 * u2[i]})) +
                     EPoly(1, ZPoly({zero, gb * u0[i]})));
  out.uV = EPoly(0, ZPoly({zero, w1, 0.5 * (w2 - eps * gb * w1), w3 * (1.0 / 6.0)})) +
           EPoly(1, ZPoly({zero, zero, 0.5 * gb * w1}));
  const HField p3 = K * gb * w1;
  const HField p1 = p0_graded_eps1 + K * w1;
  out.p = EPoly(0, ZPoly({p0 - eps * p1 - std::pow(eps, 3) * p3})) + eps_const(1, p1) + eps_const(3, p3);
  if (hydrostatic) out.p += EPoly(0, ZPoly({zero, HField(g, -1.0)}));
  return out;
}

inline AnsatzPolys ansatz_polys(const AnsatzFields& a) {
  Params prm = a.params;
  prm.eps = a.eps;
  return graded_polys(a.u0, a.u1, a.u2, a.w1, a.w2, a.w3, a.p0, a.base.h0, prm, true);
}

inline AnsatzPolys rate_polys(const AnsatzRate& r, const AnsatzFields& a) {
  Params prm = a.params;
  prm.eps = a.eps;
  return graded_polys(r.du0, r.du1, r.du2, r.dw1, r.dw2, r.dw3, r.dp0, r.dh0, prm, false);
}

/// One source term of a residual component.
struct ResidualTerm {
  std::string kind;       // interior | kinematic | traction
  int component = 0;      // horizontal axes first, vertical last
  std::string source;     // time | advection | pressure | viscous | vertical | total
  EPoly poly;
};

struct BreakdownEntry {
  std::string kind;
  int component = 0;
  std::string source;
  int eps_order = 0;
  double magnitude = 0.0;  // sup over sample points of the eps^m part
};

namespace detail {

inline void check_pair(const AnsatzFields& a, const AnsatzRate& r) {
  require(a.fingerprint == r.fingerprint, ErrorKind::Validation, "ansatz and rate built from different states");
}

inline HField surface(const AnsatzFields& a) { return a.eps * a.base.h0; }

inline EPoly sum_component(const std::vector<ResidualTerm>& terms, int component) {
  EPoly acc;
  for (const auto& t : terms)
    if (t.component == component) acc += t.poly;
  return acc;
}

/// Sup over the sample heights zeta (fractions of eps h0) of each eps-order
/// part: with z = zeta eps h0, c_{k,l} z^k eps^l has order k + l.
inline std::map<int, double> order_magnitudes(const EPoly& e, const AnsatzFields& a, const std::vector<double>& zeta) {
  std::map<int, double> out;
  const HField& h = a.base.h0;
  std::map<int, std::vector<std::pair<int, const HField*>>> groups;
  for (const auto& [l, p] : e.by_power)
    for (std::size_t k = 0; k < p.c.size(); ++k) groups[l + int(k)].push_back({int(k), &p.c[k]});
  for (const auto& [m, parts] : groups) {
    double sup = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j)
      for (double zt : zeta) {
        double v = 0.0;
        for (const auto& [k, c] : parts) v += (*c)[j] * std::pow(zt * h[j], k);
        sup = std::max(sup, std::abs(v));
      }
    out[m] = sup * std::pow(a.eps, m);
  }
  return out;
}

/// Per-source entries plus a "total" per component. Sources cancel at leading
/// order, so only the totals expose the surviving eps-orders.
inline std::vector<BreakdownEntry> breakdown(const std::vector<ResidualTerm>& input, const AnsatzFields& a,
                                             const std::vector<double>& zeta) {
  std::vector<BreakdownEntry> out;
  std::vector<ResidualTerm> terms = input;
  int ncomp = 0;
  for (const auto& t : input) ncomp = std::max(ncomp, t.component + 1);
  for (int c = 0; c < ncomp; ++c) terms.push_back({input.front().kind, c, "total", sum_component(input, c)});
  for (const auto& t : terms)
    for (const auto& [m, mag] : order_magnitudes(t.poly, a, zeta)) out.push_back({t.kind, t.component, t.source, m, mag});
  return out;
}

inline ThinField sample_on_layer(const std::vector<ZPoly>& comps, const AnsatzFields& a, int nz) {
  ThinField out = ThinField::zeros(a.grid(), a.eps, nz, a.base.h0, int(comps.size()));
  const auto zeta = out.zeta();
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (std::size_t j = 0; j < a.grid().size(); ++j)
      for (int m = 0; m < nz; ++m) out.at(int(c), j, m) = comps[c].at(j, out.height(j, m, zeta));
  return out;
}

inline std::vector<ZPoly> components_at(const std::vector<ResidualTerm>& terms, int ncomp, double eps) {
  std::vector<ZPoly> comps;
  for (int i = 0; i < ncomp; ++i) comps.push_back(sum_component(terms, i).at_eps(eps));
  return comps;
}

}  // namespace detail

/// Source terms of the interior momentum residual
///   d_t u + u.grad u + grad p/(eps F^2) + e_3/(eps F^2) - div D(u)/Re.
/// The hydrostatic pair d_z p + 1 cancels on the polynomial before sampling.
inline std::vector<ResidualTerm> interior_terms(const AnsatzFields& a, const AnsatzRate& r) {
  detail::check_pair(a, r);
  const int dim = a.dim();
  const Params& p = a.params;
  const EPoly inv_fr = eps_const(-1, HField(a.grid(), 1.0 / (p.F * p.F)));
  const AnsatzPolys u = ansatz_polys(a);
  const AnsatzPolys du = rate_polys(r, a);
  std::vector<EPoly> all = u.uH;
  all.push_back(u.uV);
  std::vector<ResidualTerm> terms;

  auto d = [&](const EPoly& f, int axis) { return axis == dim ? zdiff(f) : xdiff(f, axis); };
  for (int i = 0; i <= dim; ++i) {
    const EPoly& ui = all[i];
    terms.push_back({"interior", i, "time", i < dim ? du.uH[i] : du.uV});
    EPoly adv;
    for (int j = 0; j <= dim; ++j) adv += all[j] * d(ui, j);
    terms.push_back({"interior", i, "advection", adv});
    EPoly pres = d(u.p, i);
    if (i == dim) pres += eps_const(0, HField(a.grid(), 1.0));
    terms.push_back({"interior", i, "pressure", inv_fr * pres});
    EPoly visc;
    for (int j = 0; j <= dim; ++j) visc += d(d(ui, j) + d(all[j], i), j);
    terms.push_back({"interior", i, "viscous", (-1.0 / p.Re) * visc});
  }
  return terms;
}

inline ThinField interior_residual(const AnsatzFields& a, const AnsatzRate& r, int nz) {
  return detail::sample_on_layer(detail::components_at(interior_terms(a, r), a.dim() + 1, a.eps), a, nz);
}

/// Same residual with the pressure sampled on the layer and differentiated by
/// collocation; the hydrostatic constant is added after the division by eps F^2.
inline ThinField interior_residual_unguarded(const AnsatzFields& a, const AnsatzRate& r, int nz) {
  auto terms = interior_terms(a, r);
  const int dim = a.dim();
  std::erase_if(terms, [&](const ResidualTerm& t) { return t.component == dim && t.source == "pressure"; });
  ThinField out = detail::sample_on_layer(detail::components_at(terms, dim + 1, a.eps), a, nz);
  const ThinField pres = detail::sample_on_layer({ansatz_polys(a).p.at_eps(a.eps)}, a, nz);
  const ThinField dpz = thin_dz(pres);
  const double inv_fr = 1.0 / (a.eps * a.params.F * a.params.F);
  for (std::size_t j = 0; j < a.grid().size(); ++j)
    for (int m = 0; m < nz; ++m) out.at(dim, j, m) += (dpz.at(0, j, m) * inv_fr + inv_fr);
  return out;
}

inline ThinField divergence_residual(const AnsatzFields& a, int nz) {
  const AnsatzPolys u = ansatz_polys(a);
  EPoly div = zdiff(u.uV);
  for (int i = 0; i < a.dim(); ++i) div += xdiff(u.uH[i], i);
  return detail::sample_on_layer({div.at_eps(a.eps)}, a, nz);
}

/// eps d_t h0 + u_H(eps h0) . eps grad h0 - u_V(eps h0), by source.
inline std::vector<ResidualTerm> kinematic_terms(const AnsatzFields& a, const AnsatzRate& r) {
  detail::check_pair(a, r);
  const AnsatzPolys u = ansatz_polys(a);
  const HVec gh = gradient(a.base.h0);
  EPoly adv;
  for (int i = 0; i < a.dim(); ++i) adv += eps_const(1, gh[i]) * u.uH[i];
  return {{"kinematic", 0, "time", eps_const(1, r.dh0)},
          {"kinematic", 0, "advection", adv},
          {"kinematic", 0, "vertical", -1.0 * u.uV}};
}

inline HField kinematic_residual(const AnsatzFields& a, const AnsatzRate& r) {
  return detail::sum_component(kinematic_terms(a, r), 0).at_eps(a.eps).eval(detail::surface(a));
}

namespace detail {

/// Stress pieces of the ansatz.
struct StressPolys {
  std::vector<std::vector<EPoly>> dx_sym;  // d_i uH_j + d_j uH_i
  std::vector<EPoly> shear;                // d_z uH_i + d_i uV
  EPoly dzz;                               // 2 d_z uV
  EPoly pressure;                          // p / (eps F^2)
};

inline StressPolys stress_polys(const AnsatzFields& a) {
  const int dim = a.dim();
  const AnsatzPolys u = ansatz_polys(a);
  StressPolys s;
  s.dx_sym.assign(dim, std::vector<EPoly>(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) s.dx_sym[i][j] = xdiff(u.uH[j], i) + xdiff(u.uH[i], j);
  for (int i = 0; i < dim; ++i) s.shear.push_back(zdiff(u.uH[i]) + xdiff(u.uV, i));
  s.dzz = 2.0 * zdiff(u.uV);
  s.pressure = eps_const(-1, HField(a.grid(), 1.0 / (a.params.F * a.params.F))) * u.p;
  return s;
}

}  // namespace detail

/// (D(u)/Re - p/(eps F^2) Id) n at z = eps h0 with n = (-eps grad h0, 1), by source.
inline std::vector<ResidualTerm> traction_terms(const AnsatzFields& a) {
  const int dim = a.dim();
  const double re = a.params.Re;
  const detail::StressPolys s = detail::stress_polys(a);
  std::vector<EPoly> n;
  for (const auto& g : gradient(a.base.h0)) n.push_back(eps_const(1, -1.0 * g));
  std::vector<ResidualTerm> terms;
  for (int i = 0; i < dim; ++i) {
    EPoly visc = s.shear[i];
    for (int j = 0; j < dim; ++j) visc += n[j] * s.dx_sym[i][j];
    terms.push_back({"traction", i, "viscous", (1.0 / re) * visc});
    terms.push_back({"traction", i, "pressure", -1.0 * (n[i] * s.pressure)});
  }
  EPoly visc = s.dzz;
  for (int j = 0; j < dim; ++j) visc += n[j] * s.shear[j];
  terms.push_back({"traction", dim, "viscous", (1.0 / re) * visc});
  terms.push_back({"traction", dim, "pressure", -1.0 * s.pressure});
  return terms;
}

inline HVec traction_residual(const AnsatzFields& a) {
  const auto terms = traction_terms(a);
  const HField top = detail::surface(a);
  HVec out;
  for (int i = 0; i <= a.dim(); ++i) out.push_back(detail::sum_component(terms, i).at_eps(a.eps).eval(top));
  return out;
}

struct BottomResidual {
  HField vertical;  // u_V(., 0)
  HVec slip;        // d_z u_H(., 0) - eps gamma_bar u_H(., 0)
};

inline BottomResidual bottom_residual(const AnsatzFields& a) {
  const AnsatzPolys u = ansatz_polys(a);
  const HField zero(a.grid());
  BottomResidual b{u.uV.at_eps(a.eps).eval(zero), {}};
  for (int i = 0; i < a.dim(); ++i) {
    const ZPoly uh = u.uH[i].at_eps(a.eps);
    b.slip.push_back(zdiff(uh).eval(zero) - a.params.gamma() * uh.eval(zero));
  }
  return b;
}

/// Cross-check of the solved form of the surface stress condition: eliminating
/// the shear from the primitive traction T = (T_H, T_V) gives
///   P (1 - |g|^2) = (2 d_z u_V - g.D_x g)/Re - T_V - T_H.g,   g = eps grad h0,
/// and the analogous tangential identity. Returns the solved-form residuals and
/// the largest violation of the two identities.
struct SolvedFormCheck {
  double pressure_residual = 0.0;    // sup |P - (2 d_z u_V - g.D_x g)/(Re (1 - |g|^2))|
  double tangential_residual = 0.0;  // sup |S - (D_x g - Q g)|
  double identity_error = 0.0;
};

inline SolvedFormCheck solved_form_check(const AnsatzFields& a) {
  const int dim = a.dim();
  const double re = a.params.Re;
  const double eps = a.eps;
  const HField top = detail::surface(a);
  const detail::StressPolys sp = detail::stress_polys(a);
  std::vector<std::vector<ZPoly>> dx_sym(dim, std::vector<ZPoly>(dim));
  std::vector<ZPoly> shear;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) dx_sym[i][j] = sp.dx_sym[i][j].at_eps(eps);
    shear.push_back(sp.shear[i].at_eps(eps));
  }
  const ZPoly dzz = sp.dzz.at_eps(eps), pressure = sp.pressure.at_eps(eps);
  const HVec t = traction_residual(a);
  HVec g;
  for (const auto& c : gradient(a.base.h0)) g.push_back(eps * c);
  SolvedFormCheck out;
  for (std::size_t x = 0; x < top.size(); ++x) {
    const double z = top[x];
    double g2 = 0.0, gdg = 0.0, tg = 0.0;
    std::array<double, 2> dg{0.0, 0.0};
    for (int i = 0; i < dim; ++i) {
      g2 += g[i][x] * g[i][x];
      tg += t[i][x] * g[i][x];
      for (int j = 0; j < dim; ++j) dg[i] += dx_sym[i][j].at(x, z) * g[j][x];
      gdg += g[i][x] * dg[i];
    }
    const double denom = 1.0 - g2;
    const double q = (dzz.at(x, z) - gdg) / denom;
    const double r1 = pressure.at(x, z) - q / re;
    out.pressure_residual = std::max(out.pressure_residual, std::abs(r1));
    out.identity_error = std::max(out.identity_error, std::abs(r1 + (t[dim][x] + tg) / denom));
    for (int i = 0; i < dim; ++i) {
      const double r2 = shear[i].at(x, z) - (dg[i] - q * g[i][x]);
      out.tangential_residual = std::max(out.tangential_residual, std::abs(r2));
      const double predicted = re * t[i][x] + re * (t[dim][x] + tg) * g[i][x] / denom;
      out.identity_error = std::max(out.identity_error, std::abs(r2 - predicted));
    }
  }
  return out;
}

struct ResidualReport {
  double eps = 0.0;
  std::vector<double> interior_sup, interior_l2;  // per component, vertical last
  double divergence_sup = 0.0;
  double kinematic_sup = 0.0, kinematic_l2 = 0.0;
  std::vector<double> traction_sup, traction_l2;
  double bottom_vertical_sup = 0.0, bottom_slip_sup = 0.0;
  std::vector<BreakdownEntry> term_breakdown;

  static double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
  }
  double interior() const { return max_of(interior_sup); }
  double traction() const { return max_of(traction_sup); }
};

inline ResidualReport residual_report(const AnsatzFields& a, const AnsatzRate& r, int nz) {
  const int ncomp = a.dim() + 1;
  ResidualReport rep;
  rep.eps = a.eps;
  const HField top = detail::surface(a);
  const auto it = interior_terms(a, r);
  const ThinField interior = detail::sample_on_layer(detail::components_at(it, ncomp, a.eps), a, nz);
  for (int i = 0; i < ncomp; ++i) {
    const ThinField c = interior.component(i);
    rep.interior_sup.push_back(c.max_abs());
    rep.interior_l2.push_back(norm(c, NormKind::l2(NormKind::Domain::Thin)));
  }
  rep.divergence_sup = divergence_residual(a, nz).max_abs();
  const auto kt = kinematic_terms(a, r);
  const HField kin = detail::sum_component(kt, 0).at_eps(a.eps).eval(top);
  rep.kinematic_sup = kin.max_abs();
  rep.kinematic_l2 = norm(kin, NormKind::l2());
  const auto tt = traction_terms(a);
  for (int i = 0; i < ncomp; ++i) {
    const HField c = detail::sum_component(tt, i).at_eps(a.eps).eval(top);
    rep.traction_sup.push_back(c.max_abs());
    rep.traction_l2.push_back(norm(c, NormKind::l2()));
  }
  const BottomResidual b = bottom_residual(a);
  rep.bottom_vertical_sup = b.vertical.max_abs();
  for (const auto& c : b.slip) rep.bottom_slip_sup = std::max(rep.bottom_slip_sup, c.max_abs());
  const std::vector<double> layer = cheb::nodes(nz), surf{1.0};
  for (const auto& part : {detail::breakdown(it, a, layer), detail::breakdown(kt, a, surf), detail::breakdown(tt, a, surf)})
    rep.term_breakdown.insert(rep.term_breakdown.end(), part.begin(), part.end());
  return rep;
}

}  // namespace thinsw
