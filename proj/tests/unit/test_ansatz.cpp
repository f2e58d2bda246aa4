#include <gtest/gtest.h>

#include <cmath>

#include "thinsw/ansatz.hpp"
#include "thinsw/rng.hpp"

using namespace thinsw;

namespace {

double max_abs(const HVec& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, c.max_abs());
  return m;
}

double rate_distance(const AnsatzFields& plus, const AnsatzFields& minus, double two_dt, const AnsatzRate& r) {
  double d = 0.0;
  auto upd = [&](const HField& a, const HField& b, const HField& rate) {
    d = std::max(d, ((a - b) * (1.0 / two_dt) - rate).max_abs());
  };
  for (int i = 0; i < plus.dim(); ++i) {
    upd(plus.u0[i], minus.u0[i], r.du0[i]);
    upd(plus.u1[i], minus.u1[i], r.du1[i]);
    upd(plus.u2[i], minus.u2[i], r.du2[i]);
  }
  upd(plus.w1, minus.w1, r.dw1);
  upd(plus.w2, minus.w2, r.dw2);
  upd(plus.w3, minus.w3, r.dw3);
  upd(plus.p0, minus.p0, r.dp0);
  return d;
}

}  // namespace

TEST(BuildAnsatz, EquilibriumIsHydrostatic) {
  const Params p{1.0, 1.0, 1.0, 0.1};
  const AnsatzFields a = build_ansatz(uniform_state(Grid::make(1, 16), {0.0}), p);
  EXPECT_EQ(max_abs(a.u1) + max_abs(a.u2) + a.w1.max_abs() + a.w2.max_abs() + a.w3.max_abs(), 0.0);
  for (std::size_t j = 0; j < 16; ++j) {
    const auto pt = eval_ansatz(a, j, 0.04);
    EXPECT_NEAR(pt.pres, 0.1 - 0.04, 1e-15);
    EXPECT_EQ(pt.uH[0], 0.0);
    EXPECT_EQ(pt.uV, 0.0);
  }
}

TEST(BuildAnsatz, UniformFlow) {
  const Params p{1.0, 2.0, 1.5, 0.05};
  const AnsatzFields a = build_ansatz(uniform_state(Grid::make(2, 16), {0.3, -0.2}), p);
  for (std::size_t j = 0; j < a.grid().size(); ++j) {
    EXPECT_NEAR(a.u1[0][j], 0.05 * 1.5 * 0.3, 1e-15);
    EXPECT_NEAR(a.u2[0][j], -1.5 * 0.3, 1e-15);
    EXPECT_NEAR(a.u2[1][j], 1.5 * 0.2, 1e-15);
    EXPECT_NEAR(a.p0[j], 0.05, 1e-15);
  }
  EXPECT_EQ(a.w1.max_abs() + a.w2.max_abs() + a.w3.max_abs(), 0.0);
}

TEST(BuildAnsatz, RestingBumpKeepsOnlyHydrostaticPart) {
  const Grid g = Grid::make(1, 32);
  const Params p{1.0, 1.0, 1.0, 0.1};
  const SWState s = single_mode_state(g, 0.05, 1.0, 0.0);
  const AnsatzFields a = build_ansatz(s, p);
  EXPECT_EQ(max_abs(a.u1) + max_abs(a.u2) + a.w1.max_abs(), 0.0);
  EXPECT_LE((a.p0 - 0.1 * s.h0).max_abs(), 1e-16);
}

TEST(BuildAnsatz, CoefficientIdentities) {
  const Params p{0.9, 1.3, 0.7, 0.08};
  for (int dim : {1, 2}) {
    const SWState s = single_mode_state(Grid::make(dim, 32), 0.08, 1.0, 0.1);
    const AnsatzFields a = build_ansatz(s, p);
    EXPECT_LE((a.w1 + divergence(a.u0)).max_abs(), 1e-12);
    EXPECT_LE((a.w2 + divergence(a.u1)).max_abs(), 1e-12);
    EXPECT_LE((a.w3 + divergence(a.u2)).max_abs(), 1e-12);
    for (int i = 0; i < dim; ++i) EXPECT_LE((a.u1[i] - p.gamma() * a.u0[i]).max_abs(), 1e-14);
  }
}

TEST(BuildAnsatz, EpsScaling) {
  const SWState s = single_mode_state(Grid::make(1, 32), 0.05, 1.0, 0.2);
  const Params p1{1.0, 1.0, 1.0, 0.05}, p2{1.0, 1.0, 1.0, 0.1};
  const AnsatzFields a1 = build_ansatz(s, p1), a2 = build_ansatz(s, p2);
  EXPECT_LE((a2.u1[0] - 2.0 * a1.u1[0]).max_abs(), 1e-15);
  // Non-hydrostatic pressure / eps differs only through the eps^2 gamma_bar factor.
  const HField n1 = (a1.p0 - 0.05 * s.h0) * (1.0 / (0.05 * (1 + 0.0025)));
  const HField n2 = (a2.p0 - 0.1 * s.h0) * (1.0 / (0.1 * (1 + 0.01)));
  EXPECT_LE((n1 - n2).max_abs(), 1e-14);
}

TEST(BuildAnsatz, RejectsVacuum) {
  SWState s = uniform_state(Grid::make(1, 16), {0.0});
  s.h0[2] = -0.1;
  EXPECT_THROW(build_ansatz(s, Params{}), Error);
  EXPECT_THROW(ansatz_rate(s, Params{}), Error);
}

TEST(AnsatzRate, EquilibriumAndLinearity) {
  const Params p{1.0, 1.0, 1.0, 0.1};
  const AnsatzRate r0 = ansatz_rate(uniform_state(Grid::make(1, 16), {0.0}), p);
  EXPECT_EQ(max_abs(r0.du0) + max_abs(r0.du2) + r0.dw3.max_abs() + r0.dp0.max_abs(), 0.0);
  const AnsatzRate r = ansatz_rate(single_mode_state(Grid::make(2, 16), 0.1, 1.0, 0.2), p);
  for (int i = 0; i < 2; ++i) EXPECT_LE((r.du1[i] - p.gamma() * r.du0[i]).max_abs(), 1e-14);
}

TEST(AnsatzRate, MatchesCentralDifferenceInTime) {
  const Params p{1.0, 1.0, 1.0, 0.1};
  for (int dim : {1, 2}) {
    const SWState s = single_mode_state(Grid::make(dim, dim == 1 ? 32 : 16), 0.05, 1.0, 0.2);
    std::vector<double> err;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
      const SWState mid = sw_step(s, p, dt);
      const SWState plus = sw_step(mid, p, dt);
      err.push_back(rate_distance(build_ansatz(plus, p), build_ansatz(s, p), 2 * dt, ansatz_rate(mid, p)));
    }
    for (std::size_t i = 1; i < err.size(); ++i) EXPECT_GE(std::log2(err[i - 1] / err[i]), 1.9) << dim;
  }
}

TEST(EvalAnsatz, BottomAndRange) {
  const Params p{1.0, 1.0, 1.0, 0.1};
  const AnsatzFields a = build_ansatz(single_mode_state(Grid::make(1, 16), 0.05, 1.0, 0.3), p);
  for (std::size_t j = 0; j < 16; ++j) EXPECT_EQ(eval_ansatz(a, j, 0.0).uV, 0.0);
  const double top = 0.1 * a.base.h0[3];
  EXPECT_NO_THROW(eval_ansatz(a, 3, 1.005 * top));
  EXPECT_THROW(eval_ansatz(a, 3, 1.02 * top), Error);
  EXPECT_THROW(eval_ansatz(a, 3, -1e-9), Error);
}

TEST(EvalAnsatz, HornerMatchesNaivePowers) {
  const Grid g = Grid::make(1, 8);
  AnsatzFields a = build_ansatz(uniform_state(g, {0.0}), Params{});
  RandomStream rng(99, 1);
  for (auto* f : {&a.u0[0], &a.u1[0], &a.u2[0], &a.w1, &a.w2, &a.w3, &a.p0})
    for (double& v : f->values) v = rng.uniform(-2.0, 2.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double z = rng.uniform(0.0, a.eps);
    const auto pt = eval_ansatz(a, j, z);
    const double uh = a.u0[0][j] + a.u1[0][j] * z + a.u2[0][j] * std::pow(z, 2) / 2;
    const double uv = a.w1[j] * z + a.w2[j] * std::pow(z, 2) / 2 + a.w3[j] * std::pow(z, 3) / 6;
    EXPECT_NEAR(pt.uH[0], uh, 1e-14);
    EXPECT_NEAR(pt.uV, uv, 1e-14);
    EXPECT_NEAR(pt.pres, a.p0[j] - z, 1e-14);
  }
}
