#include <gtest/gtest.h>

#include <cmath>

#include "lxe/analysis.hpp"

using namespace lxe;

namespace {

Curves lines(const std::map<int, double>& slopes, const std::vector<double>& grid, double offset_per_L = 0.0,
             double err = 0.01) {
  Curves c;
  for (const auto& [L, a] : slopes)
    for (double p : grid) c[L].push_back({p, 0.5 - a * (p - 0.5) + offset_per_L * L, err});
  return c;
}

std::vector<double> grid(int lo, int hi, double denom) {
  std::vector<double> g;
  for (int i = lo; i <= hi; ++i) g.push_back(i / denom);
  return g;
}

}  // namespace

TEST(Crossings, LinearCurvesCrossExactly) {
  const auto c = lines({{16, 1.0}, {32, 2.0}, {64, 3.5}}, grid(20, 30, 50.0));
  const auto xs = find_crossings(c);
  ASSERT_EQ(xs.size(), 3u);
  for (const auto& x : xs) EXPECT_EQ(x.x_star, 0.5);
  EXPECT_EQ(xs[0].L1, 16);
  EXPECT_EQ(xs[0].L2, 32);
  EXPECT_EQ(xs[2].L1, 32);
  EXPECT_EQ(xs[2].L2, 64);
}

TEST(Crossings, InterpolatesBetweenGridPoints) {
  std::vector<double> g;
  for (int i = 0; i < 10; ++i) g.push_back(0.41 + 0.02 * i);
  const auto xs = find_crossings(lines({{16, 1.0}, {32, 2.0}}, g));
  ASSERT_EQ(xs.size(), 1u);
  EXPECT_NEAR(xs[0].x_star, 0.5, 1e-14);
  EXPECT_GT(xs[0].std_error, 0.0);
  EXPECT_LT(xs[0].std_error, 0.05);
}

TEST(Crossings, RefinementInvariantOnLinearData) {
  const auto coarse = find_crossings(lines({{16, 0.7}, {32, 1.9}}, grid(3, 7, 10.0)));
  const auto fine = find_crossings(lines({{16, 0.7}, {32, 1.9}}, grid(30, 70, 100.0)));
  ASSERT_EQ(coarse.size(), 1u);
  ASSERT_EQ(fine.size(), 1u);
  EXPECT_NEAR(coarse[0].x_star, fine[0].x_star, 1e-14);
}

TEST(Crossings, ParallelCurvesGiveNothing) {
  EXPECT_TRUE(find_crossings(lines({{16, 1.0}, {32, 1.0}}, grid(20, 30, 50.0), 0.001)).empty());
}

TEST(Crossings, SeveralCrossingsInGridOrder) {
  Curves c;
  for (double p : grid(0, 20, 20.0)) {
    c[16].push_back({p, 0.5, 0.0});
    c[32].push_back({p, 0.5 + (p - 0.33) * (p - 0.71), 0.0});
  }
  const auto xs = find_crossings(c);
  ASSERT_EQ(xs.size(), 2u);
  EXPECT_LT(xs[0].x_star, xs[1].x_star);
  EXPECT_NEAR(xs[0].x_star, 0.33, 0.01);
  EXPECT_NEAR(xs[1].x_star, 0.71, 0.01);
  EXPECT_EQ(xs[0].std_error, 0.0);
}

TEST(Crossings, BootstrapIsSeeded) {
  std::vector<double> g{0.41, 0.43, 0.45, 0.47, 0.49, 0.51, 0.53};
  const auto c = lines({{16, 1.0}, {32, 2.0}}, g, 0.0, 0.02);
  EXPECT_EQ(find_crossings(c, 300, 5)[0].std_error, find_crossings(c, 300, 5)[0].std_error);
  EXPECT_NE(find_crossings(c, 300, 5)[0].std_error, find_crossings(c, 300, 6)[0].std_error);
}

TEST(Crossings, RejectsBadInput) {
  Curves one = lines({{16, 1.0}}, grid(0, 4, 4.0));
  EXPECT_THROW(find_crossings(one), std::invalid_argument);
  Curves c = lines({{16, 1.0}, {32, 2.0}}, grid(0, 4, 4.0));
  c[32][2].x = 0.6;
  EXPECT_THROW(find_crossings(c), std::invalid_argument);
}

TEST(Collapse, ExactCollapseIsZero) {
  Curves c;
  for (int L : {16, 32, 64})
    for (double p : grid(40, 60, 100.0)) c[L].push_back({p, 0.5 - 0.2 * (p - 0.5) * std::pow(L, 0.75), 0.0});
  EXPECT_LE(collapse_residual(c, 0.5, 4.0 / 3.0), 1e-20);
  EXPECT_GT(collapse_residual(c, 0.5, 1.0), collapse_residual(c, 0.5, 4.0 / 3.0));
  EXPECT_GT(collapse_residual(c, 0.5, 1.8), 1e-6);
  EXPECT_GT(collapse_residual(c, 0.52, 4.0 / 3.0), 1e-8);
}

TEST(Collapse, NonlinearScalingFunction) {
  Curves c;
  for (int L : {16, 32, 64})
    for (double p : grid(40, 60, 100.0)) c[L].push_back({p, 0.5 * (1 - std::tanh((p - 0.5) * std::pow(L, 0.75))), 0.0});
  const double best = collapse_residual(c, 0.5, 4.0 / 3.0);
  EXPECT_GE(best, 0.0);
  EXPECT_LT(1.2 * best, collapse_residual(c, 0.5, 1.0));
  EXPECT_LT(1.2 * best, collapse_residual(c, 0.5, 1.8));
}

TEST(Collapse, RejectsInsufficientData) {
  Curves c;
  for (double p : {0.4, 0.5, 0.6}) {
    c[16].push_back({p, 0.5, 0.0});
    c[32].push_back({p, 0.5, 0.0});
  }
  EXPECT_THROW(collapse_residual(c, 0.5, 4.0 / 3.0), std::invalid_argument);
  Curves single;
  for (double p : grid(0, 5, 5.0)) single[16].push_back({p, 0.5, 0.0});
  EXPECT_THROW(collapse_residual(single, 0.5, 4.0 / 3.0), std::invalid_argument);
  EXPECT_THROW(collapse_residual(c, 0.5, 0.0), std::invalid_argument);
}
