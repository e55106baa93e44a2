#include "gridhorizon/linearize.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles/finite_difference.h"

namespace gridhorizon::linearize {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(CurrentFromPowerTest, UnitCases) {
  CurrentPair a = CurrentFromPower(1.0, 0.0, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(a.g, 1.0);
  EXPECT_DOUBLE_EQ(a.h, 0.0);
  CurrentPair b = CurrentFromPower(0.0, 1.0, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(b.g, 0.0);
  EXPECT_DOUBLE_EQ(b.h, -1.0);
  EXPECT_THROW(CurrentFromPower(1.0, 0.0, 0.0, 0.0), std::domain_error);
}

TEST(CurrentFromPowerTest, PowerReconstruction) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1), mag(0.9, 1.1), ang(-kPi, kPi);
  auto check = [](double p, double q, double x, double y) {
    CurrentPair c = CurrentFromPower(p, q, x, y);
    EXPECT_NEAR(x * c.g + y * c.h, p, 1e-12);
    EXPECT_NEAR(-x * c.h + y * c.g, q, 1e-12);
  };
  check(0.3, 0.1, 0.98, -0.02);
  for (int i = 0; i < 1000; ++i) {
    const double r = mag(rng), a = ang(rng);
    check(u(rng), u(rng), r * std::cos(a), r * std::sin(a));
  }
}

TEST(LoadCoeffsTest, UnitVoltagePureActive) {
  CoeffPair c = LoadCurrentCoeffs(1.0, 0.0, {1.0, 0.0});
  EXPECT_DOUBLE_EQ(c.re.c0, 1.0);
  EXPECT_DOUBLE_EQ(c.re.d_vre, -1.0);
  EXPECT_DOUBLE_EQ(c.re.d_vim, 0.0);
  EXPECT_DOUBLE_EQ(c.im.c0, 0.0);
  EXPECT_DOUBLE_EQ(c.im.d_vre, 0.0);
  EXPECT_DOUBLE_EQ(c.im.d_vim, 1.0);
  EXPECT_EQ(c.re.d_p, 0.0);
  EXPECT_EQ(c.im.d_q, 0.0);

  CoeffPair z = LoadCurrentCoeffs(0.0, 0.0, {0.97, 0.2});
  EXPECT_EQ(z.re.c0, 0.0);
  EXPECT_EQ(z.re.d_vre, 0.0);
  EXPECT_EQ(z.im.d_vim, 0.0);
  EXPECT_THROW(LoadCurrentCoeffs(1.0, 0.0, {0.0, 0.0}), std::domain_error);
}

void ExpectMatchesDifferences(double p, double q, double x, double y) {
  auto fd = testing::CentralDifferences(p, q, x, y);
  auto ref = testing::PhasorCurrent(p, q, x, y);
  CoeffPair c = DerCurrentCoeffs({x, y, p, q});
  EXPECT_NEAR(c.re.c0, ref.real(), 1e-12);
  EXPECT_NEAR(c.im.c0, ref.imag(), 1e-12);
  EXPECT_NEAR(c.re.d_vre, fd.d_vre.real(), 1e-6);
  EXPECT_NEAR(c.re.d_vim, fd.d_vim.real(), 1e-6);
  EXPECT_NEAR(c.im.d_vre, fd.d_vre.imag(), 1e-6);
  EXPECT_NEAR(c.im.d_vim, fd.d_vim.imag(), 1e-6);
  EXPECT_NEAR(c.re.d_p, fd.d_p.real(), 1e-6);
  EXPECT_NEAR(c.re.d_q, fd.d_q.real(), 1e-6);
  EXPECT_NEAR(c.im.d_p, fd.d_p.imag(), 1e-6);
  EXPECT_NEAR(c.im.d_q, fd.d_q.imag(), 1e-6);
  CoeffPair l = LoadCurrentCoeffs(p, q, {x, y});
  EXPECT_EQ(l.re.d_vre, c.re.d_vre);
  EXPECT_EQ(l.im.d_vim, c.im.d_vim);
}

TEST(LoadCoeffsTest, MatchesFiniteDifferences) {
  ExpectMatchesDifferences(0.5, 0.2, 0.97, -0.03);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1), mag(0.9, 1.1), ang(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const double r = mag(rng), a = ang(rng);
    ExpectMatchesDifferences(u(rng), u(rng), r * std::cos(a), r * std::sin(a));
  }
}

TEST(DerCoeffsTest, FlatStartAndRotatedPoint) {
  CoeffPair a = DerCurrentCoeffs({1.0, 0.0, 0.0, 0.0});
  EXPECT_EQ(a.re.c0, 0.0);
  EXPECT_DOUBLE_EQ(a.re.d_p, 1.0);
  EXPECT_DOUBLE_EQ(a.re.d_q, 0.0);
  EXPECT_DOUBLE_EQ(a.im.d_p, 0.0);
  EXPECT_DOUBLE_EQ(a.im.d_q, -1.0);
  CoeffPair b = DerCurrentCoeffs({0.0, 1.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(b.re.d_p, 0.0);
  EXPECT_DOUBLE_EQ(b.re.d_q, 1.0);
  EXPECT_DOUBLE_EQ(b.im.d_p, 1.0);
  EXPECT_DOUBLE_EQ(b.im.d_q, 0.0);
}

TEST(DerCoeffsTest, ExactInPowerAtExpansionVoltage) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1, 1);
  const double x = 0.96, y = -0.11;
  CoeffPair c = DerCurrentCoeffs({x, y, 0.2, -0.1});
  for (int i = 0; i < 100; ++i) {
    const double p = u(rng), q = u(rng);
    CurrentPair truth = CurrentFromPower(p, q, x, y);
    EXPECT_NEAR(c.re.c0 + c.re.d_p * (p - 0.2) + c.re.d_q * (q + 0.1), truth.g, 1e-12);
    EXPECT_NEAR(c.im.c0 + c.im.d_p * (p - 0.2) + c.im.d_q * (q + 0.1), truth.h, 1e-12);
  }
}

bool Inside(const std::vector<HalfPlane>& planes, double x, double y, double tol = 0.0) {
  for (const HalfPlane& hp : planes)
    if (!hp.Contains(x, y, tol)) return false;
  return true;
}

TEST(CirclePolygonTest, InscribedSquare) {
  auto sq = CirclePolygon(1.0, 4);
  ASSERT_EQ(sq.size(), 4u);
  for (const HalfPlane& hp : sq) {
    EXPECT_NEAR(hp.rhs, std::cos(kPi / 4), 1e-15);
    EXPECT_NEAR(hp.a_re * hp.a_re + hp.a_im * hp.a_im, 1.0, 1e-12);
  }
  EXPECT_TRUE(Inside(sq, 0.70, 0.0));
  EXPECT_FALSE(Inside(sq, 0.80, 0.0));
  EXPECT_TRUE(Inside(CirclePolygon(1.0, 1000), 0.999994, 0.0));
  EXPECT_THROW(CirclePolygon(1.0, 2), std::invalid_argument);
  EXPECT_THROW(CirclePolygon(1.0, 4, Arc{1.0, 1.0}), std::invalid_argument);
}

TEST(CirclePolygonTest, FeasiblePointsLieInDisc) {
  std::mt19937_64 rng(29);
  for (int n : {3, 4, 8, 16, 32}) {
    const double c = 1.7;
    auto poly = CirclePolygon(c, n);
    std::uniform_real_distribution<double> u(-1.2 * c, 1.2 * c);
    int feasible = 0;
    while (feasible < 10000) {
      const double x = u(rng), y = u(rng);
      if (!Inside(poly, x, y)) continue;
      ++feasible;
      ASSERT_LE(x * x + y * y, c * c * (1 + 1e-12));
    }
    // Vertices lie on the circle, satisfy every chord and touch at least one.
    for (int k = 0; k < n; ++k) {
      const double a = kPi / 4 + 2 * kPi * k / n;
      const double x = c * std::cos(a), y = c * std::sin(a);
      EXPECT_TRUE(Inside(poly, x, y, 1e-12));
      int tight = 0;
      for (const HalfPlane& hp : poly) tight += std::abs(hp.Slack(x, y)) < 1e-12;
      EXPECT_GE(tight, 1);
    }
  }
}

TEST(CirclePolygonTest, DoublingNests) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int n : {4, 8}) {
    auto coarse = CirclePolygon(1.0, n), fine = CirclePolygon(1.0, 2 * n);
    for (int i = 0; i < 10000; ++i) {
      const double x = u(rng), y = u(rng);
      if (Inside(coarse, x, y)) {
        EXPECT_TRUE(Inside(fine, x, y, 1e-12));
      }
    }
  }
}

TEST(VoltageWedgeTest, LowerChordAndNominal) {
  auto w = VoltageWedge(0.95, 1.05, 0.0, 0.1, 2);
  ASSERT_EQ(w.size(), 1u + 4u + 2u);
  EXPECT_NEAR(w[0].rhs, 0.95 * std::cos(0.1), 1e-15);
  EXPECT_NEAR(w[0].rhs, 0.94526, 1e-5);
  EXPECT_TRUE(Inside(w, 1.0, 0.0));
  EXPECT_FALSE(Inside(w, 0.94, 0.0));
  auto wb = VoltageWedge(0.95, 1.05, -2 * kPi / 3, 0.1, 2);
  EXPECT_TRUE(Inside(wb, std::cos(-2 * kPi / 3), std::sin(-2 * kPi / 3)));
  EXPECT_THROW(VoltageWedge(1.1, 1.05, 0.0, 0.1, 2), std::invalid_argument);
  EXPECT_THROW(VoltageWedge(0.95, 1.05, 0.0, 2.0, 2), std::invalid_argument);
  EXPECT_THROW(VoltageWedge(0.95, 1.05, 0.0, 0.1, 0), std::invalid_argument);
}

TEST(VoltageWedgeTest, ContainmentBounds) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  const double vmin = 0.95, vmax = 1.05, phi = 0.17, theta = 2 * kPi / 3;
  const int l = 3;
  auto w = VoltageWedge(vmin, vmax, theta, phi, l);
  for (int i = 0; i < 20000; ++i) {
    const double x = u(rng), y = u(rng);
    if (!Inside(w, x, y)) continue;
    const double r = std::hypot(x, y);
    double dev = std::remainder(std::atan2(y, x) - theta, 2 * kPi);
    EXPECT_LE(r, vmax * (1 + 1e-12));
    EXPECT_GE(r, vmin * std::cos(phi) * (1 - 1e-12));
    EXPECT_LE(std::abs(dev), phi + 1e-12);
  }
  for (double r = vmin; r <= vmax * std::cos(phi / (2 * l)); r += 1e-3) {
    EXPECT_TRUE(Inside(w, r * std::cos(theta), r * std::sin(theta), 1e-12)) << r;
  }
}

TEST(VoltageWedgeTest, RotationEquivariant) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.2, 1.2), ang(-kPi, kPi);
  auto base = VoltageWedge(0.9, 1.1, 0.0, 0.2, 2);
  for (int k = 0; k < 20; ++k) {
    const double alpha = ang(rng);
    auto rot = VoltageWedge(0.9, 1.1, alpha, 0.2, 2);
    for (int i = 0; i < 500; ++i) {
      const double x = u(rng), y = u(rng);
      const double xr = x * std::cos(alpha) - y * std::sin(alpha);
      const double yr = x * std::sin(alpha) + y * std::cos(alpha);
      // Skip points within rounding distance of a boundary.
      double margin = 1e9;
      for (const HalfPlane& hp : base) margin = std::min(margin, std::abs(hp.Slack(x, y)));
      if (margin < 1e-9) continue;
      EXPECT_EQ(Inside(base, x, y), Inside(rot, xr, yr));
    }
  }
}

}  // namespace
}  // namespace gridhorizon::linearize
