#include <gtest/gtest.h>

#include <cmath>

#include "thinsw/lagrangian.hpp"
#include "thinsw/study.hpp"

using namespace thinsw;

namespace {

const Params kUnit{1.0, 1.0, 1.0, 0.1};

SWTrajectory run(const SWState& s, const Params& p, double T, double dt) { return sw_solve(s, p, T, dt); }

bool near_identity(const JacobianField& J, double tol) {
  for (const auto& A : J.A)
    if ((A - Eigen::MatrixXd::Identity(A.rows(), A.cols())).cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

}  // namespace

TEST(Chart, RestingLayerIsIdentity) {
  for (int dim : {1, 2}) {
    const Grid g = Grid::make(dim, 16);
    const auto tr = run(uniform_state(g, {0.0, 0.0}), kUnit, 0.5, 0.005);
    const Chart c = integrate_chart(tr, 0.1, 6);
    ASSERT_EQ(c.times.size(), tr.states.size());
    EXPECT_EQ(c.z0.front(), 0.0);
    for (std::size_t k = 0; k < c.times.size(); ++k) {
      for (int a = 0; a < dim; ++a) EXPECT_EQ(c.displacement(k, a).max_abs(), 0.0);
      for (int m = 0; m < c.levels(); ++m)
        for (double v : c.Z[k][m].values) EXPECT_EQ(v, c.z0[m]);
    }
    const auto rep = chart_identities(c, tr);
    EXPECT_TRUE(rep.flat_start);
    EXPECT_EQ(rep.z_abs, 0.0);
    EXPECT_EQ(rep.det_abs, 0.0);
    EXPECT_TRUE(near_identity(jacobian(c, c.times.size() - 1), 1e-14));
    EXPECT_LE(chain_rule_check(c, c.times.size() - 1, ChainTestField{}), 1e-12);
  }
}

TEST(Chart, UniformFlowTranslatesWithDecay) {
  const Params p{1.0, 3.0, 2.0, 0.1};
  const double c0 = 0.4, T = 1.0;
  const auto tr = run(uniform_state(Grid::make(1, 16), {c0}), p, T, 0.01);
  const Chart c = integrate_chart(tr, 0.1, 5);
  const double shift = c0 * (p.Re / p.gamma_bar) * (1.0 - std::exp(-p.gamma_bar * T / p.Re));
  const HField d = c.displacement(c.times.size() - 1, 0);
  for (double v : d.values) EXPECT_NEAR(v / shift, 1.0, 1e-8);
  const auto rep = chart_identities(c, tr);
  // displacement is x-independent up to the rounding of x0 + shift
  EXPECT_LE(rep.det_abs, 1e-13);
  EXPECT_EQ(rep.z_abs, 0.0);
  EXPECT_TRUE(near_identity(jacobian(c, c.times.size() - 1), 1e-13));
}

TEST(Chart, ChainRuleTranslationInvariance) {
  const Grid g = Grid::make(1, 16);
  const auto rest = run(uniform_state(g, {0.0}), kUnit, 0.2, 0.01);
  const auto moving = run(uniform_state(g, {0.7}), kUnit, 0.2, 0.01);
  const ChainTestField f{{2.0, 0.0}, 0.1, {0.5, -1.0, 3.0}};
  const double r0 = chain_rule_check(integrate_chart(rest, 0.1, 6), 20, f);
  const double r1 = chain_rule_check(integrate_chart(moving, 0.1, 6), 20, f);
  EXPECT_LE(r0, 1e-12);
  EXPECT_NEAR(r1, r0, 1e-12);
}

TEST(Chart, ChainRuleConvergesSpectrally) {
  std::vector<double> res;
  for (int n : {8, 16, 32}) {
    const auto tr = run(single_mode_state(Grid::make(1, n), 0.1, 1.0, 0.3), kUnit, 0.5, 2e-3);
    res.push_back(chain_rule_check(integrate_chart(tr, 0.1, 8), tr.states.size() - 1, ChainTestField{}));
  }
  EXPECT_LT(res[1], 1e-2 * res[0]);
  EXPECT_LT(res[2], 1e-8);
}

TEST(Chart, DefaultRunIdentities) {
  const auto tr = run(single_mode_state(Grid::make(1, 32), 0.05, 1.0, 0.0), kUnit, 1.0, 1e-3);
  const auto rep = chart_identities(integrate_chart(tr, 0.1, 8), tr);
  EXPECT_FALSE(rep.flat_start);
  EXPECT_LE(rep.z_abs, 1e-7);
  EXPECT_LE(rep.det_abs, 1e-7);
  // The unnormalized forms presuppose h0(0) = 1.
  EXPECT_GT(rep.det_abs_literal, 0.04);
}

TEST(Chart, FlatStartLiteralIdentities) {
  const Grid g = Grid::make(1, 32);
  const SWState s = SWState::make(HField(g, 1.0), {HField::from_function(g, [](Point p) { return 0.2 * std::sin(p[0]); })});
  const auto tr = run(s, kUnit, 1.0, 1e-3);
  const auto rep = chart_identities(integrate_chart(tr, 0.1, 8), tr);
  EXPECT_TRUE(rep.flat_start);
  EXPECT_EQ(rep.z_abs, rep.z_abs_literal);
  EXPECT_EQ(rep.det_abs, rep.det_abs_literal);
  EXPECT_LE(rep.det_abs_literal, 1e-7);
  EXPECT_LE(rep.z_abs_literal, 1e-7);
}

TEST(Chart, IdentityResidualsConvergeAtFourthOrder) {
  // Advection-dominated so the time error stays above the spatial floor.
  const Params p{1.0, 100.0, 1.0, 0.1};
  const SWState s = single_mode_state(Grid::make(1, 64), 0.1, 1.0, 0.3);
  std::vector<double> dts, zr, dr;
  for (double dt : {0.032, 0.016, 0.008, 0.004}) {
    const auto tr = run(s, p, 0.512, dt);
    const auto rep = chart_identities(integrate_chart(tr, 0.1, 6), tr);
    dts.push_back(dt);
    zr.push_back(rep.z_abs);
    dr.push_back(rep.det_abs);
  }
  const FitResult fz = fit_loglog(dts, zr), fd = fit_loglog(dts, dr);
  EXPECT_GE(fz.slope, 3.8) << zr[0] << " " << zr[3];
  EXPECT_GE(fd.slope, 3.8) << dr[0] << " " << dr[3];
}

TEST(Chart, GroupProperty) {
  const Grid g = Grid::make(1, 32);
  const auto tr = run(single_mode_state(g, 0.1, 1.0, 0.3), kUnit, 1.0, 2e-3);
  const Chart whole = integrate_chart(tr, 0.1, 4);
  const std::size_t mid = tr.states.size() / 2;
  SWTrajectory first = tr, second = tr;
  first.states.resize(mid + 1);
  first.rates.resize(mid + 1);
  second.states.erase(second.states.begin(), second.states.begin() + mid);
  second.rates.erase(second.rates.begin(), second.rates.begin() + mid);
  const Chart half = integrate_chart(first, 0.1, 4);
  HVec X = half.X.back();
  HField R = half.Z.back().back() * (1.0 / half.z0.back());
  transport(second, X, R, [](double, const HVec&, const HField&) {});
  EXPECT_LE((X[0] - whole.X.back()[0]).max_abs(), 1e-9);
  EXPECT_LE((R * whole.z0.back() - whole.Z.back().back()).max_abs(), 1e-9);
}

TEST(Chart, MismatchedTimesRejected) {
  const Grid g = Grid::make(1, 16);
  const auto tr = run(uniform_state(g, {0.1}), kUnit, 0.2, 0.01);
  const Chart c = integrate_chart(tr, 0.1, 4);
  const auto other = run(uniform_state(g, {0.1}), kUnit, 0.1, 0.01);
  EXPECT_THROW(chart_identities(c, other), Error);
  EXPECT_THROW(jacobian(c, 999), Error);
}

TEST(Chart, FoldedChartIsDegenerate) {
  const Grid g = Grid::make(1, 16);
  const auto tr = run(uniform_state(g, {0.0}), kUnit, 0.02, 0.01);
  Chart c = integrate_chart(tr, 0.1, 4);
  c.X[1][0] = HField::from_function(g, [](Point p) { return p[0] + 1.5 * std::sin(p[0]); });
  try {
    jacobian(c, 1);
    FAIL() << "expected a degenerate chart";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateChart);
  }
}

TEST(Deformation, HandOracle) {
  Eigen::MatrixXd A(2, 2), G(2, 2), expect(2, 2);
  A << 1, 0, 0, 2;
  G << 0, 1, 0, 0;
  expect << 0, 0.25, 0.5, 0;
  const auto r = transformed_deformation({G}, {A});
  EXPECT_LE((r.P[0] - expect).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_TRUE(r.ill_conditioned.empty());
}

TEST(Deformation, IdentityGivesSymmetricGradientAndIsLinear) {
  Eigen::MatrixXd G(3, 3), A(3, 3);
  G << 0.3, -1.2, 0.5, 2.0, 0.1, -0.7, 0.4, 0.9, -0.4;
  A << 1.1, 0.2, 0.0, -0.1, 0.9, 0.0, 0.3, -0.2, 1.4;
  const auto id = transformed_deformation({G}, {Eigen::MatrixXd::Identity(3, 3)});
  EXPECT_EQ((id.P[0] - (G + G.transpose())).cwiseAbs().maxCoeff(), 0.0);
  const auto one = transformed_deformation({G}, {A});
  const auto three = transformed_deformation({3.0 * G}, {A});
  EXPECT_LE((three.P[0] - 3.0 * one.P[0]).cwiseAbs().maxCoeff(), 1e-14);
  const Eigen::MatrixXd inv = A.inverse();
  const Eigen::MatrixXd ref = G * inv * inv.transpose() + inv.transpose() * G.transpose() * inv.transpose();
  EXPECT_LE((one.P[0] - ref).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Deformation, WarnsOnIllConditioning) {
  Eigen::MatrixXd A(2, 2);
  A << 1.0, 0.0, 0.0, 1e-9;
  const auto r = transformed_deformation({Eigen::MatrixXd::Identity(2, 2)}, {A});
  ASSERT_EQ(r.ill_conditioned.size(), 1u);
  Eigen::MatrixXd flip(2, 2);
  flip << 1.0, 0.0, 0.0, -1.0;
  EXPECT_THROW(transformed_deformation({flip}, {flip}), Error);
}

TEST(LagrangianBoundary, IdentityChartGivesEulerianSlip) {
  const double eps = 0.05, gb = 2.0;
  // u_H = sin x (1 + eps gb z) satisfies the slip condition, u_H = sin x (1 + z) does not.
  for (double x : {0.3, 1.7, 4.0}) {
    Eigen::VectorXd u(1), good(1), bad(1);
    u << std::sin(x);
    good << eps * gb * std::sin(x);
    bad << std::sin(x);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(1, 1);
    const auto ok = lagrangian_bottom_slip(id, good, u, 0.0, eps, gb);
    EXPECT_LE(std::abs(ok.slip[0]), 1e-16);
    EXPECT_EQ(ok.vertical, 0.0);
    const auto off = lagrangian_bottom_slip(id, bad, u, 0.0, eps, gb);
    EXPECT_NEAR(off.slip[0], (1.0 - eps * gb) * std::sin(x), 1e-15);
    Eigen::MatrixXd stretch(1, 1);
    stretch << 2.0;
    EXPECT_NEAR(lagrangian_bottom_slip(stretch, bad, u, 0.0, eps, gb).slip[0], (2.0 - eps * gb) * std::sin(x), 1e-15);
  }
}

TEST(LagrangianBoundary, IdentityChartSurfaceNormal) {
  Eigen::MatrixXd P(3, 3);
  P << 1.0, 0.2, -0.3, 0.2, 0.5, 0.1, -0.3, 0.1, 2.0;
  Eigen::VectorXd gz(2);
  gz << 0.01, -0.02;
  const Eigen::VectorXd r = lagrangian_surface_stress(P, 0.7, Eigen::MatrixXd::Identity(2, 2), gz);
  Eigen::VectorXd n(3);
  n << -0.01, 0.02, 1.0;
  EXPECT_LE((r - (P - 0.7 * Eigen::MatrixXd::Identity(3, 3)) * n).cwiseAbs().maxCoeff(), 1e-15);
}
