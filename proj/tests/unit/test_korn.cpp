#include <gtest/gtest.h>

#include <cmath>

#include "thinsw/thin/korn.hpp"

using namespace thinsw;

namespace {

const Direction kAxis{1.0, 0.0};
const Direction kOblique{0.6, 0.8};

// Minimal eigenvalue of the pencil from an independent 50-digit computation
// (closed-form Gram integrals, generalized eigenproblem in extended precision).
struct Frozen {
  double M;
  Direction sigma;
  double Lambda;
};
const Frozen kFrozen[] = {
    {0.01, kAxis, 0.999983333833322},   {0.05, kAxis, 0.999583645656},    {0.05, kOblique, 0.999583645654},
    {0.1, kAxis, 0.998338322025},       {0.1, kOblique, 0.998338321861},  {0.5, kOblique, 0.9612868740677101},
    {1.0, kAxis, 0.873837881941},       {1.0, kOblique, 0.873707502211},  {2.0, kAxis, 0.7331512794715008},
    {5.0, kAxis, 0.733758653688},       {5.0, kOblique, 0.670960707822},  {10.0, kAxis, 0.829022379026},
    {10.0, kOblique, 0.6740580465087151}, {20.0, kAxis, 0.906207273302422}, {50.0, kAxis, 0.9608791793439407},
    {50.0, kOblique, 0.6757796325106731},
};

}  // namespace

TEST(KornBasis, ZeroAndOrigin) {
  const auto zero = korn_basis_eval(1.0, kOblique, {0, 0, 0, 0, 0, 0}, 0.7);
  EXPECT_EQ(zero.U.norm() + zero.dU.norm() + zero.ddU.norm(), 0.0);
  const auto at0 = korn_basis_eval(3.0, kOblique, {0.3, -1.2, 2.0, 0.7, 1.1, -0.4}, 0.0);
  EXPECT_EQ(at0.U.norm(), 0.0);
}

TEST(KornBasis, LinearTerm) {
  const auto v = korn_basis_eval(2.0, kAxis, {1, 0, 0, 0, 0, 0}, 1.0);
  EXPECT_EQ(v.U, Eigen::Vector2d(-1.0, 0.0));
  EXPECT_EQ(v.dU, Eigen::Vector2d(-1.0, 0.0));
  EXPECT_EQ(v.ddU, Eigen::Vector2d(0.0, 0.0));
}

TEST(KornBasis, DerivativesMatchFiniteDifferences) {
  const std::array<double, 6> a{0.3, -1.2, 2.0, 0.7, 1.1, -0.4};
  const double h = 1e-5, z = 0.9;
  const auto m = korn_basis_eval(2.0, kOblique, a, z - h), c = korn_basis_eval(2.0, kOblique, a, z),
             p = korn_basis_eval(2.0, kOblique, a, z + h);
  EXPECT_LE(((p.U - m.U) / (2 * h) - c.dU).norm(), 1e-8);
  EXPECT_LE(((p.dU - m.dU) / (2 * h) - c.ddU).norm(), 1e-8);
}

TEST(KornBasis, ConditionedBasisSpansRawSpace) {
  // Each regime basis function is matched by a raw combination at several points.
  for (double M : {0.5, 6.0}) {
    const double eM = std::exp(-M);
    for (double z : {0.1, 0.4 * M, M}) {
      const auto b = detail::conditioned_basis(M, z);
      std::array<double, 6> raw{};
      if (M <= 2.0) raw = {-1.0, 1.0, 0.0, 0.0, 0.0, 0.0};  // sinh z - z
      else raw = {0.0, eM, eM, 0.0, 0.0, 0.0};              // e^{z-M} - e^{-M}
      const auto v = korn_basis_eval(M, kAxis, raw, z);
      EXPECT_NEAR(v.U[0], -b[1].v, 1e-13 * std::max(1.0, std::abs(b[1].v)));
      EXPECT_NEAR(v.dU[0], -b[1].d, 1e-13 * std::max(1.0, std::abs(b[1].d)));
    }
  }
  EXPECT_NEAR(detail::sinh_minus_id(0.3), std::sinh(0.3) - 0.3, 1e-16);
  EXPECT_NEAR(detail::zcosh_minus_sinh(0.3), 0.3 * std::cosh(0.3) - std::sinh(0.3), 1e-16);
  EXPECT_NEAR(detail::zcosh_minus_sinh(1e-3) / 1e-9, 1.0 / 3.0, 1e-6);
}

TEST(KornGram, SymmetricAndRankTwoBoundaryPart) {
  for (double M : {0.05, 0.7, 3.0, 25.0})
    for (const Direction& d : {kAxis, kOblique}) {
      const KornPencil p = korn_gram(M, d);
      EXPECT_LE(p.asymmetry, 1e-12);
      EXPECT_EQ((p.q1 - p.q1.transpose()).cwiseAbs().maxCoeff(), 0.0);
      const Eigen::MatrixXd diff = p.q2 - p.q1;
      const Eigen::JacobiSVD<Eigen::MatrixXd> svd(diff);
      const auto sv = svd.singularValues();
      EXPECT_LE(sv(2), 1e-10 * sv(0)) << "M=" << M;
      const double scale = std::max(p.q2.cwiseAbs().maxCoeff(), 1.0);
      EXPECT_LE((diff - korn_boundary_matrix(p)).cwiseAbs().maxCoeff(), 1e-10 * scale) << "M=" << M;
    }
}

TEST(KornGram, RejectsBadInput) {
  EXPECT_THROW(korn_gram(0.0, kAxis), Error);
  EXPECT_THROW(korn_gram(1.0, Direction{1.0, 1.0}), Error);
  EXPECT_THROW(korn_gram(1.0, kAxis, 32), Error);
}

TEST(KornSpectrum, FactorizationStructure) {
  for (double M : log_grid(0.1, 10.0, 7))
    for (const Direction& d : direction_grid(2, 5)) {
      const KornPencil p = korn_pencil(M, d);
      const auto cl = cluster_eigenvalues(p.spectrum);
      int ones = 0;
      bool two = false;
      for (const auto& c : cl) {
        if (std::abs(c.value - 1.0) <= 1e-6) ones = c.multiplicity;
        if (std::abs(c.value - 2.0) <= 2e-6) two = true;
      }
      EXPECT_EQ(ones, 4) << "M=" << M;
      EXPECT_TRUE(two) << "M=" << M;
      EXPECT_GT(p.Lambda, 0.0);
      EXPECT_LE(p.Lambda, 1.0 + 1e-9);
    }
}

TEST(KornSpectrum, FrozenMinimalEigenvalues) {
  for (const auto& f : kFrozen) {
    const KornPencil p = korn_pencil(f.M, f.sigma);
    EXPECT_NEAR(p.Lambda, f.Lambda, 1e-9) << "M=" << f.M << " c=" << f.sigma.c;
  }
}

TEST(KornSpectrum, SmallThicknessLimit) {
  EXPECT_LE(std::abs(korn_pencil(0.05, kOblique).Lambda - 1.0), 0.05);
  double prev = 0.0;
  for (double M : log_grid(0.01, 0.1, 6)) {
    const double L = korn_pencil(M, kAxis).Lambda;
    if (prev > 0.0) EXPECT_LE(L, prev + 1e-2);
    prev = L;
  }
}

TEST(KornSpectrum, DirectionSymmetries) {
  for (double M : {0.3, 4.0, 30.0}) {
    const double base = korn_pencil(M, kOblique).Lambda;
    EXPECT_NEAR(korn_pencil(M, Direction{-0.6, 0.8}).Lambda, base, 1e-10);
    EXPECT_NEAR(korn_pencil(M, Direction{0.8, 0.6}).Lambda, base, 1e-10);
  }
}

TEST(KornSweep, InfimumPositiveAndStableUnderRefinement) {
  const auto sig = direction_grid(2, 8);
  const KornSweep coarse = korn_sweep(log_grid(0.01, 50.0, 40), sig);
  const KornSweep fine = korn_sweep(log_grid(0.01, 50.0, 79), direction_grid(2, 16));
  EXPECT_EQ(coarse.failures, 0);
  EXPECT_GT(coarse.infimum, 0.0);
  EXPECT_NEAR(coarse.infimum, fine.infimum, 1e-3);
  EXPECT_LT(coarse.max_jump, 0.1);
}

TEST(KornSweep, ThreadCountDoesNotChangeTable) {
  const auto Ms = log_grid(0.1, 10.0, 6);
  const auto a = korn_sweep(Ms, direction_grid(2, 4), 1), b = korn_sweep(Ms, direction_grid(2, 4), 3);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) EXPECT_EQ(a.cells[i].Lambda, b.cells[i].Lambda);
  EXPECT_THROW(korn_sweep({100.0}, direction_grid(1, 1)), Error);
}
