#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "annulus/geometry.hpp"
#include "annulus/random_model.hpp"
#include "annulus/rng.hpp"
#include "annulus/statistics.hpp"
#include "oracles.hpp"

using namespace annulus;

namespace {
const double kW = std::sqrt(0.5);
const double kPi = oracle::kPi;
}  // namespace

TEST(RectPoints, AxisAlignedDirection) {
  const auto s = rect_points(0.0, 0.0, 3);
  ASSERT_GE(s.points.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(s.points[i].kappa, (LatticePoint{i + 1, 0}));
    EXPECT_EQ(s.points[i].rho, 0.0);
  }
}

TEST(RectPoints, ThirtyDegrees) {
  const auto s = rect_points(0.0, kPi / 6, 2);
  ASSERT_GE(s.points.size(), 2u);
  EXPECT_EQ(s.points[0].kappa, (LatticePoint{1, 0}));
  EXPECT_NEAR(s.points[0].t, std::sqrt(3.0) / 2, 1e-15);
  EXPECT_NEAR(s.points[0].rho, -0.5, 1e-15);
  EXPECT_EQ(s.points[1].kappa, (LatticePoint{1, 1}));
  EXPECT_NEAR(s.points[1].t, (std::sqrt(3.0) + 1) / 2, 1e-15);
  EXPECT_NEAR(s.points[1].rho, (std::sqrt(3.0) - 1) / 2, 1e-15);
}

TEST(RectPoints, MatchesBruteForce) {
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> ur(-kW, kW);
  std::uniform_real_distribution<double> ut(0.0, kTwoPi);
  std::uniform_int_distribution<int> uk(1, 50);
  for (int trial = 0; trial < 200; ++trial) {
    const double r = ur(gen);
    const double th = ut(gen);
    const int k = uk(gen);
    const auto s = rect_points(r, th, k);
    ASSERT_GE(s.points.size(), static_cast<std::size_t>(k));
    const auto want = oracle::brute_strip(r, th, s.truncation_t);
    ASSERT_EQ(s.points.size(), want.size()) << "trial " << trial;
    for (std::size_t i = 0; i < want.size(); ++i) {
      EXPECT_EQ(s.points[i].kappa, (LatticePoint{want[i].a, want[i].b}));
      EXPECT_NEAR(s.points[i].rho, want[i].rho, 1e-12);
    }
  }
}

TEST(RectPoints, Preconditions) {
  EXPECT_THROW(rect_points(0.0, 0.3, 0), std::domain_error);
  EXPECT_THROW(rect_points(0.8, 0.3, 1), std::domain_error);
  EXPECT_THROW(rect_points(0.0, 0.3, kMaxModelIndex + 1), ResourceLimitError);
}

TEST(StripPoints, CompleteUpToTruncation) {
  const auto s = strip_points(0.123, 2.2, 30.0);
  EXPECT_EQ(s.points.size(), oracle::brute_strip(0.123, 2.2, 30.0).size());
  for (const auto& p : s.points) {
    EXPECT_GT(p.t, 0.0);
    EXPECT_LE(p.t, 30.0);
  }
}

TEST(RhoK, Examples) {
  EXPECT_EQ(rho_k(0.0, 0.0, 5), 0.0);
  EXPECT_NEAR(rho_k(0.0, kPi / 6, 1), -0.5, 1e-15);
  EXPECT_NEAR(rho_k(0.0, kPi / 6, 2), 0.36602540378443865, 1e-15);
}

TEST(AInfK, Examples) {
  for (int k : {1, 2, 7}) EXPECT_NEAR(a_inf_k(0.0, 0.0, k), 0.5, 1e-15);
  // Axis direction with r != 0: the strip points sit on rows b with
  // |b - r| <= 1/sqrt2, so rho_k is one of -r, 1 - r, -1 - r.
  for (double r : {-0.6, -0.1, 0.4}) {
    for (int k : {1, 2, 7}) {
      const double rho = rho_k(r, 0.0, k);
      const double nearest = std::round(rho + r) - r;
      EXPECT_NEAR(rho, nearest, 1e-15);
      EXPECT_EQ(a_inf_k(r, 0.0, k), a_inf(rho, 0.0));
    }
  }
  EXPECT_EQ(a_inf_k(0.3, 0.9, 0), a_inf(0.3, 0.9));
  EXPECT_NEAR(a_inf_k(0.0, kPi / 6, 1), a_inf(-0.5, kPi / 6), 1e-15);
}

TEST(ModelSequence, RationalDirectionHasFewAtoms) {
  // tan theta = 1/2: rho repeats with period p^2 + q^2 = 5.
  const double th = std::atan2(1.0, 2.0);
  const auto s = rect_points(0.0, th, 100);
  std::set<long long> atoms;
  for (int i = 0; i < 100; ++i) atoms.insert(std::llround(s.points[i].rho * 1e9));
  EXPECT_LE(atoms.size(), 10u);
}

TEST(ModelSequence, IrrationalDirectionsEquidistribute) {
  int good = 0;
  for (int i = 1; i <= 50; ++i) {
    const double th = oracle::halton(i, 2) * kPi / 2 + 1e-3;
    const auto s = rect_points(0.0, th, 10000);
    std::vector<double> rho;
    for (int l = 0; l < 10000; ++l) rho.push_back(s.points[l].rho);
    if (ks_uniform(rho, -kW, kW).statistic < 0.05) ++good;
  }
  EXPECT_GE(good, 45);
}

TEST(ModelCk, VarianceMatchesC0) {
  const auto e = model_ck(0, 1000000, 42);
  EXPECT_LE(std::fabs(e.value - c0_constant()), 3 * e.std_error);
  EXPECT_GT(e.std_error, 0.0);
}

TEST(ModelCk, ReproducibleAndThreadIndependent) {
  const auto a = model_ck_range(6, 200000, 9, {1});
  const auto b = model_ck_range(6, 200000, 9, {3});
  const auto c = model_ck_range(6, 200000, 9, {0});
  ASSERT_EQ(a.size(), 7u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].value, b[k].value);
    EXPECT_EQ(a[k].std_error, b[k].std_error);
    EXPECT_EQ(a[k].value, c[k].value);
    EXPECT_GE(a[k].value, -0.25);
    EXPECT_LE(a[k].value, 0.25);
  }
  const auto single = model_ck(4, 200000, 9, {2});
  EXPECT_EQ(single.value, a[4].value);
  EXPECT_EQ(single.n, a[4].n);
  EXPECT_NE(model_ck(4, 200000, 10).value, a[4].value);
}

TEST(ModelCk, KOneGoldenLike) {
  const auto e = model_ck(1, 1000000, 42);
  EXPECT_LT(e.std_error, 2e-3);
  EXPECT_NEAR(e.value, -0.0815174068723445, 1e-12);
}

TEST(ModelCk, OriginSquareConventionFlipsLiteralSign) {
  // Plain Monte Carlo of the covariance with a_inf(r, theta) at the origin.
  CounterRng rng(77, 0);
  const int n = 200000;
  double literal1 = 0.0;
  double literal2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = (2 * rng.uniform() - 1) * kW;
    const double th = rng.uniform() * kTwoPi;
    const double a0 = a_inf(r, th);
    literal1 += a0 * a_inf_k(r, th, 1);
    literal2 += a0 * a_inf_k(r, th, 2);
  }
  literal1 = literal1 / n - 0.25;
  literal2 = literal2 / n - 0.25;
  const auto m = model_ck_range(2, 200000, 78);
  EXPECT_NEAR(literal1, -m[1].value, 0.005);
  EXPECT_NEAR(literal2, -m[2].value, 0.005);
  EXPECT_GT(literal1, 0.05);
  EXPECT_LT(m[1].value, -0.05);
}

TEST(ModelCk, Preconditions) {
  EXPECT_THROW(model_ck(-1, 100000, 1), std::domain_error);
  EXPECT_THROW(model_ck(1, 100, 1), std::domain_error);
}

TEST(ModelFrame, SuccessorsAreStripPoints) {
  const auto g = enumerate_gamma(500.0);
  int matched = 0;
  for (std::size_t j = 0; j < g.size(); j += 37) {
    const auto f = model_frame(g[j]);
    const auto s = rect_points(f.r, f.theta, 1);
    const auto& next = g.circular(static_cast<std::int64_t>(j) + 1);
    const LatticePoint d{next.point.x - g[j].point.x, next.point.y - g[j].point.y};
    if (s.points[0].kappa == d) {
      ++matched;
      EXPECT_NEAR(s.points[0].rho, -next.r, 0.05);
    }
  }
  EXPECT_GT(matched, 0);
}

TEST(RectDiagnostic, SmallRadius) {
  const auto d3 = rect_approx_diagnostic(enumerate_gamma(1e3), 4, 2.0);
  EXPECT_GE(d3.kprime.min, 4u);
  EXPECT_EQ(d3.kprime.below_k, 0u);
  EXPECT_GT(d3.matched, 0u);
  EXPECT_LE(d3.max_area_gap, 10.0 * 4 / 1e3);
  EXPECT_THROW(rect_approx_diagnostic(enumerate_gamma(10.0), 4, 0.0), std::domain_error);
}
