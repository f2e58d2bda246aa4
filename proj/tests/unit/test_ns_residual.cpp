#include <gtest/gtest.h>

#include <cmath>

#include "thinsw/ns_residual.hpp"

using namespace thinsw;

namespace {

double max_abs(const HVec& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, c.max_abs());
  return m;
}

SWState evolved_state(int dim, double t_end = 0.1) {
  const Params p{1.0, 1.0, 1.0, 0.1};
  const SWState s = single_mode_state(Grid::make(dim, dim == 1 ? 32 : 16), 0.05, 1.0, 0.1);
  return sw_solve(s, p, t_end, t_end / 50).final_state();
}

}  // namespace

TEST(ZPoly, ArithmeticMatchesPointwise) {
  const Grid g = Grid::make(1, 8);
  const HField a = HField::from_function(g, [](Point p) { return std::sin(p[0]); });
  const ZPoly p({a, HField(g, 2.0)});        // sin x + 2z
  const ZPoly q({HField(g, 1.0), HField(g), a});  // 1 + sin(x) z^2
  const ZPoly r = p * q;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double z = 0.3;
    EXPECT_NEAR(r.at(j, z), p.at(j, z) * q.at(j, z), 1e-15);
    EXPECT_NEAR(zdiff(r).at(j, z), zdiff(p).at(j, z) * q.at(j, z) + p.at(j, z) * zdiff(q).at(j, z), 1e-14);
  }
}

TEST(Residuals, EquilibriumIsExact) {
  for (int dim : {1, 2}) {
    const Params p{1.0, 1.0, 1.0, 0.05};
    const SWState s = uniform_state(Grid::make(dim, 16), {0.0, 0.0});
    const ResidualReport r = residual_report(build_ansatz(s, p), ansatz_rate(s, p), 8);
    EXPECT_LE(r.interior(), 1e-12);
    EXPECT_LE(r.traction(), 1e-12);
    EXPECT_LE(r.kinematic_sup, 1e-12);
    EXPECT_LE(r.divergence_sup, 1e-12);
    EXPECT_LE(r.bottom_slip_sup + r.bottom_vertical_sup, 1e-12);
  }
}

TEST(Residuals, UniformFlowMatchesSymbolicOracle) {
  const double c = 0.4, eps = 0.05;
  const Params p{1.0, 2.0, 1.5, eps};
  const SWState s = uniform_state(Grid::make(1, 16), {c});
  const AnsatzFields a = build_ansatz(s, p);
  const AnsatzRate r = ansatz_rate(s, p);
  const ThinField res = interior_residual(a, r, 9);
  const auto zeta = res.zeta();
  const double k = p.gamma_bar * p.gamma_bar * c / p.Re;
  for (std::size_t j = 0; j < 16; ++j)
    for (int m = 0; m < 9; ++m) {
      const double z = res.height(j, m, zeta);
      EXPECT_NEAR(res.at(0, j, m), k * (z * z / 2 - eps * z), 1e-15);
      EXPECT_EQ(res.at(1, j, m), 0.0);
    }
  EXPECT_NEAR(res.component(0).max_abs(), k * eps * eps / 2, 1e-16);
  EXPECT_LE(kinematic_residual(a, r).max_abs(), 1e-12);
  EXPECT_LE(max_abs(traction_residual(a)), 1e-12);
}

TEST(Residuals, DivergenceVanishesAndDetectsTampering) {
  for (int dim : {1, 2}) {
    const SWState s = evolved_state(dim);
    const Params p{1.0, 1.0, 1.0, 0.1};
    AnsatzFields a = build_ansatz(s, p);
    EXPECT_LE(divergence_residual(a, 12).max_abs(), 1e-11);
    a.w3 += 1.0;
    const double expected = std::pow(0.1 * s.h0.max(), 2) / 2;
    EXPECT_NEAR(divergence_residual(a, 12).max_abs(), expected, 1e-10);
  }
}

TEST(Residuals, BottomIsExactAndDetectsTampering) {
  const SWState s = evolved_state(2);
  const Params p{1.0, 1.0, 1.0, 0.07};
  AnsatzFields a = build_ansatz(s, p);
  BottomResidual b = bottom_residual(a);
  EXPECT_EQ(b.vertical.max_abs(), 0.0);
  EXPECT_LE(max_abs(b.slip), 1e-14);
  a.u1[1] += 0.25;
  b = bottom_residual(a);
  EXPECT_LE(b.slip[0].max_abs(), 1e-14);
  for (double v : b.slip[1].values) EXPECT_NEAR(v, 0.25, 1e-14);
}

TEST(Residuals, MismatchedRateRejected) {
  const Params p{1.0, 1.0, 1.0, 0.1};
  const SWState s = evolved_state(1);
  const SWState t = sw_step(s, p, 1e-3);
  EXPECT_THROW(interior_residual(build_ansatz(s, p), ansatz_rate(t, p), 8), Error);
  EXPECT_THROW(kinematic_residual(build_ansatz(s, p), ansatz_rate(t, p)), Error);
}

TEST(Residuals, TranslationEquivariance) {
  const Grid g = Grid::make(1, 32);
  const Params p{1.0, 1.0, 1.0, 0.05};
  const int shift = 5;
  const double sx = shift * g.spacing();
  auto make = [&](double offset) {
    HField h = HField::from_function(g, [&](Point q) { return 1.0 + 0.05 * std::cos(q[0] + offset) + 0.02 * std::sin(2 * (q[0] + offset)); });
    HField u = HField::from_function(g, [&](Point q) { return 0.1 * std::sin(q[0] + offset); });
    return SWState::make(std::move(h), {std::move(u)});
  };
  const SWState s0 = make(0.0), s1 = make(sx);
  const ThinField r0 = interior_residual(build_ansatz(s0, p), ansatz_rate(s0, p), 8);
  const ThinField r1 = interior_residual(build_ansatz(s1, p), ansatz_rate(s1, p), 8);
  double err = 0.0;
  for (int c = 0; c < 2; ++c)
    for (int j = 0; j < g.n; ++j)
      for (int m = 0; m < 8; ++m) err = std::max(err, std::abs(r1.at(c, j, m) - r0.at(c, (j + shift) % g.n, m)));
  EXPECT_LE(err, 1e-12 * r0.max_abs());
  const ResidualReport a = residual_report(build_ansatz(s0, p), ansatz_rate(s0, p), 8);
  const ResidualReport b = residual_report(build_ansatz(s1, p), ansatz_rate(s1, p), 8);
  EXPECT_NEAR(a.interior(), b.interior(), 1e-12 * a.interior());
  EXPECT_NEAR(a.kinematic_l2, b.kinematic_l2, 1e-12 * a.kinematic_l2);
  EXPECT_NEAR(a.traction(), b.traction(), 1e-12 * a.traction());
}

TEST(Residuals, HydrostaticGuard) {
  const Params p{1.0, 1.0, 1.0, 1e-3};
  const SWState s = SWState::make(HField::from_function(Grid::make(1, 32), [](Point q) { return 1.0 + 1e-12 * std::cos(q[0]); }),
                                  {HField(Grid::make(1, 32))});
  const AnsatzFields a = build_ansatz(s, p);
  const AnsatzRate r = ansatz_rate(s, p);
  const ThinField guarded = interior_residual(a, r, 16).component(1);
  const ThinField raw = interior_residual_unguarded(a, r, 16).component(1);
  double diff = 0.0;
  for (std::size_t i = 0; i < guarded.values[0].size(); ++i) diff = std::max(diff, std::abs(raw.values[0][i] - guarded.values[0][i]));
  EXPECT_LE(guarded.max_abs(), 1e-11);
  EXPECT_GE(diff, 1e3 * guarded.max_abs()) << diff << " " << guarded.max_abs();
}

TEST(Residuals, SolvedFormIsAnExactRearrangement) {
  for (int dim : {1, 2}) {
    const Params p{0.8, 1.5, 1.0, 0.2};
    const SWState s = evolved_state(dim);
    const SolvedFormCheck c = solved_form_check(build_ansatz(s, p));
    EXPECT_LE(c.identity_error, 1e-12 * std::max(1.0, c.pressure_residual + c.tangential_residual));
    EXPECT_GT(c.pressure_residual + c.tangential_residual, 0.0);
  }
}
