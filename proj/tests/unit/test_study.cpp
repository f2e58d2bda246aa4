#include <gtest/gtest.h>

#include <cmath>

#include "thinsw/study.hpp"

using namespace thinsw;

namespace {

StudyInput bump_study(int n, int nz, int threads = 1) {
  return StudyInput{single_mode_state(Grid::make(1, n), 0.05, 1.0, 0.0), Params{1.0, 1.0, 1.0, 0.1},
                    {0.1, 0.05, 0.025, 0.0125}, 0.5, nz, 1e-3, threads};
}

}  // namespace

TEST(Fit, ExactPowerLaw) {
  const std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
  std::vector<double> v;
  for (double e : eps) v.push_back(7.0 * e * e * e);
  const FitResult f = fit_loglog(eps, v);
  EXPECT_NEAR(f.slope, 3.0, 1e-10);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_FALSE(f.degenerate);
}

TEST(Fit, FloorAndDegeneracy) {
  const std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
  const FitResult f = fit_loglog(eps, {1e-3, 1e-4, 1e-14, 0.0});
  EXPECT_TRUE(f.degenerate);
  EXPECT_EQ(f.points, 2);
}

TEST(Study, EquilibriumFamilyIsDegenerate) {
  StudyInput in = bump_study(16, 8);
  in.init = uniform_state(Grid::make(1, 16), {0.0});
  const StudyReport r = convergence_study(in);
  for (const auto& [k, v] : r.series)
    for (double x : v) EXPECT_LE(x, 1e-12) << k;
  for (const auto& [k, f] : r.fits) EXPECT_TRUE(f.degenerate) << k;
}

TEST(Study, RejectsBadEpsLists) {
  StudyInput in = bump_study(16, 8);
  in.eps_list = {0.1, 0.05, 0.06, 0.01};
  EXPECT_THROW(convergence_study(in), Error);
  in.eps_list = {0.1, 0.05, 0.01};
  EXPECT_THROW(convergence_study(in), Error);
}

TEST(Study, BumpStudyStructure) {
  const StudyReport r = convergence_study(bump_study(32, 16));
  EXPECT_TRUE(r.fits.at("divergence_sup").degenerate);
  EXPECT_TRUE(r.fits.at("bottom_slip_sup").degenerate);
  for (const char* k : {"interior_sup", "kinematic_sup", "traction_sup"}) {
    EXPECT_FALSE(r.fits.at(k).degenerate) << k;
    EXPECT_GE(r.fits.at(k).r2, 0.98) << k;
  }
  EXPECT_LT(r.series.at("kinematic_sup").front(), 10 * 0.1 * 0.1);
  // Ratio of neighbouring sups agrees with the fitted slope.
  const auto& v = r.series.at("interior_sup");
  const double predicted = std::pow(2.0, r.fits.at("interior_sup").slope);
  EXPECT_NEAR(v[0] / v[1], predicted, 0.05 * predicted);
  // Every claim that fails names a surviving term below eps^3.
  for (const auto& d : r.discrepancies) {
    EXPECT_LT(d.dominant.eps_order, 3) << d.kind;
    EXPECT_FALSE(d.sources.empty()) << d.kind;
  }
}

TEST(Study, ResolutionIndependence) {
  const StudyReport a = convergence_study(bump_study(32, 16));
  const StudyReport b = convergence_study(bump_study(64, 32));
  for (const char* k : {"interior_sup", "kinematic_sup", "traction_sup", "interior_l2", "traction_l2"}) {
    EXPECT_LT(std::abs(a.fits.at(k).slope - b.fits.at(k).slope), 0.05) << k;
    for (std::size_t i = 0; i < a.eps_list.size(); ++i)
      EXPECT_LT(std::abs(a.series.at(k)[i] - b.series.at(k)[i]), 0.01 * a.series.at(k)[i]) << k << " " << i;
  }
}

TEST(Study, ThreadCountDoesNotChangeResults) {
  const StudyReport a = convergence_study(bump_study(32, 8, 1));
  const StudyReport b = convergence_study(bump_study(32, 8, 3));
  for (const auto& [k, v] : a.series) EXPECT_EQ(v, b.series.at(k)) << k;
}
