#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "thinsw/shallow_water.hpp"

using namespace thinsw;
using std::numbers::pi;

namespace {

Params unit_params() { return Params{1.0, 1.0, 1.0, 0.1}; }

double state_distance(const SWState& a, const SWState& b) {
  double d = (a.h0 - b.h0).max_abs();
  for (std::size_t i = 0; i < a.u0.size(); ++i) d = std::max(d, (a.u0[i] - b.u0[i]).max_abs());
  return d;
}

}  // namespace

TEST(SwRhs, EquilibriumIsStationary) {
  for (int dim : {1, 2}) {
    const SWRate r = sw_rhs(uniform_state(Grid::make(dim, 16), {0.0, 0.0}), unit_params());
    EXPECT_EQ(r.dh0.max_abs(), 0.0);
    for (const auto& c : r.du0) EXPECT_EQ(c.max_abs(), 0.0);
  }
}

TEST(SwRhs, PressureGradientOfCosineBump) {
  const Grid g = Grid::make(1, 32);
  const double a = 0.05, F = 0.7;
  const SWState s = single_mode_state(g, a, 1.0, 0.0);
  const SWRate r = sw_rhs(s, Params{F, 2.0, 1.0, 0.1});
  EXPECT_LE(r.dh0.max_abs(), 1e-15);
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(r.du0[0][j], a / (F * F) * std::sin(g.node(int(j))), 1e-13);
}

TEST(SwRhs, UniformFlowFeelsOnlyFriction) {
  const Params p{1.0, 3.0, 2.0, 0.1};
  const SWRate r = sw_rhs(uniform_state(Grid::make(2, 16), {0.4, -0.3}), p);
  EXPECT_EQ(r.dh0.max_abs(), 0.0);
  for (double v : r.du0[0].values) EXPECT_NEAR(v, -2.0 * 0.4 / 3.0, 1e-15);
  for (double v : r.du0[1].values) EXPECT_NEAR(v, 2.0 * 0.3 / 3.0, 1e-15);
}

TEST(SwRhs, RejectsVacuum) {
  SWState s = uniform_state(Grid::make(1, 16), {0.0});
  s.h0[4] = 0.0;
  EXPECT_THROW(sw_rhs(s, unit_params()), Error);
  EXPECT_THROW(single_mode_state(Grid::make(1, 16), 1.5, 1.0, 0.0), Error);
}

TEST(SwStep, EquilibriumFixedPointAndVacuumGuard) {
  const SWState s = uniform_state(Grid::make(1, 32), {0.0});
  const SWState n = sw_step(s, unit_params(), 1e-3);
  EXPECT_LE(state_distance(s, n), 1e-14);
  // Diverging flow over the trough thins the layer below the guard.
  SWState shallow = single_mode_state(Grid::make(1, 32), 0.85, 1.0, -1.0);
  try {
    for (int i = 0; i < 2000; ++i) shallow = sw_step(shallow, Params{1.0, 10.0, 1.0, 0.1}, 1e-3);
    FAIL() << "vacuum not detected";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Vacuum);
    ASSERT_TRUE(e.time().has_value());
  }
}

TEST(SwStep, MassPreservedInOneStep) {
  const SWState s = single_mode_state(Grid::make(2, 16), 0.1, 1.0, 0.2);
  const SWState n = sw_step(s, unit_params(), 1e-3);
  EXPECT_LE(std::abs(n.mass() - s.mass()), 1e-12 * s.mass());
}

TEST(SwStep, LocalOrderAboveFourPointEight) {
  const SWState s = single_mode_state(Grid::make(1, 32), 0.05, 1.0, 0.1);
  const Params p = unit_params();
  std::vector<double> err;
  for (double dt : {2e-3, 1e-3, 5e-4}) {
    const SWState one = sw_step(s, p, dt);
    const SWState two = sw_step(sw_step(s, p, dt / 2), p, dt / 2);
    err.push_back(state_distance(one, two));
  }
  for (std::size_t i = 1; i < err.size(); ++i) EXPECT_GE(std::log2(err[i - 1] / err[i]), 4.8);
}

TEST(SwSolve, EquilibriumTrajectoryIsConstant) {
  const SWState s = uniform_state(Grid::make(1, 16), {0.0});
  const SWTrajectory tr = sw_solve(s, unit_params(), 0.5, 5e-3);
  EXPECT_EQ(tr.states.size(), 101u);
  EXPECT_LE(state_distance(tr.final_state(), s), 1e-14);
  for (std::size_t i = 1; i < tr.states.size(); ++i) EXPECT_GT(tr.states[i].t, tr.states[i - 1].t);
}

TEST(SwSolve, UniformFlowDecaysExponentially) {
  const Params p{1.0, 2.0, 1.5, 0.1};
  const SWTrajectory tr = sw_solve(uniform_state(Grid::make(1, 16), {0.7}), p, 1.0, 1e-3);
  const double exact = 0.7 * std::exp(-1.5 / 2.0);
  for (double v : tr.final_state().u0[0].values) EXPECT_LE(std::abs(v - exact), 1e-8 * exact);
}

TEST(SwSolve, FrictionlessUniformFlowPreserved) {
  const Params p{1.0, 1.0, 0.0, 0.1};
  const SWTrajectory tr = sw_solve(uniform_state(Grid::make(2, 16), {0.3, 0.1}), p, 0.2, 2e-3);
  for (double v : tr.final_state().u0[0].values) EXPECT_EQ(v, 0.3);
  for (double v : tr.final_state().u0[1].values) EXPECT_EQ(v, 0.1);
}

TEST(SwSolve, GlobalTemporalOrder) {
  // Coarse grid and weak viscosity so the temporal error sits well above roundoff.
  const SWState s = single_mode_state(Grid::make(1, 16), 0.05, 1.0, 0.0);
  const Params p{1.0, 10.0, 1.0, 0.1};
  const double base = 1.0 / 8.0;
  std::vector<SWState> finals;
  for (int r = 1; r <= 8; r *= 2) finals.push_back(sw_solve(s, p, 1.0, base / r).final_state());
  std::vector<double> diff;
  for (std::size_t i = 1; i < finals.size(); ++i) diff.push_back(state_distance(finals[i - 1], finals[i]));
  for (std::size_t i = 1; i < diff.size(); ++i) EXPECT_GE(std::log2(diff[i - 1] / diff[i]), 3.8) << diff[i - 1] << " " << diff[i];
  EXPECT_GT(diff.back(), 1e-12);
}

TEST(SwSolve, RejectsUnstableStep) {
  EXPECT_THROW(sw_solve(single_mode_state(Grid::make(1, 64), 0.05, 1.0, 0.0), unit_params(), 1.0, 1e-2), Error);
}

TEST(SwEnergy, ClosedForms) {
  const Params p{0.8, 1.0, 1.0, 0.1};
  EXPECT_NEAR(sw_energy(uniform_state(Grid::make(1, 16), {0.0}), p), 2 * pi / (2 * 0.64), 1e-13);
  EXPECT_NEAR(sw_energy(uniform_state(Grid::make(1, 16), {0.5}), p), 2 * pi * (0.125 + 1 / (2 * 0.64)), 1e-13);
}

TEST(SwSolve, LongRunConservesMassAndDissipatesEnergy) {
  const SWState s = single_mode_state(Grid::make(1, 32), 0.05, 1.0, 0.05);
  const SWTrajectory tr = sw_solve(s, unit_params(), 10.0, 1e-3, 100);
  ASSERT_EQ(tr.diagnostics.size(), 10001u);
  for (std::size_t i = 1; i < tr.diagnostics.size(); ++i) {
    EXPECT_LE(std::abs(tr.diagnostics[i].mass - s.mass0), 1e-11);
    EXPECT_LE(tr.diagnostics[i].energy - tr.diagnostics[i - 1].energy, 1e-8);
  }
  EXPECT_EQ(tr.states.size(), 101u);
}
