#include <gtest/gtest.h>

#include "graphmerge/bounds.hpp"

using namespace graphmerge;
using namespace graphmerge::bounds;

namespace {

struct GridPoint {
  GraphBoundInput in;
  double one_minus_p0;
  double eta0;
  double epsilon;
};

// mpmath at 60 digits, direct summation.
const GridPoint grid[] = {
    {{16, 100, 1, 1, 4}, 5.4158371300539280808e-12, 0.1045875, 0.19823645484916583713},
    {{32, 50, 0.5, 2, 3}, 5.2806022669830999437e-8, 0.05807652865032120234, 0.11278022692659349506},
    {{64, 20, 2, 1, 8}, 0.98987505955066845993, 0.078905066257683590644, 1.1414591825849062037},
    {{8, 10, 1, 1, 2}, 0.010369315840939649785, 0.29625, 0.51510525334093964979},
    {{1024, 1000, 1, 1, 10}, 1.7917797981220075317e-43, 0.00246530859375, 0.0049245394410375823975},
    {{256, 400, 1.5, 1, 16}, 1.5734887316915018745e-9, 0.0092478778655080782098, 0.018410234059489533863},
};

} // namespace

TEST(Realization, Values) {
  EXPECT_EQ(realization_bound(0.0), 0.0);
  EXPECT_DOUBLE_EQ(realization_bound(1.0), 2.0);
  EXPECT_NEAR(realization_bound(0.02), 2.0 * std::sqrt(0.0396), 1e-15);
  EXPECT_NEAR(realization_bound(0.02), 0.39799497, 1e-8);
  EXPECT_THROW(realization_bound(-0.1), OutOfRange);
  EXPECT_THROW(realization_bound(1.5), OutOfRange);
}

TEST(Realization, DominatesEpsilonAndIsConcaveIncreasing) {
  double prev = -1.0;
  double prev_slope = 1e300;
  for (int i = 0; i <= 100; ++i) {
    const double e = i / 100.0;
    const double r = realization_bound(e);
    EXPECT_GE(r, e);
    EXPECT_GT(r, prev);
    if (i > 0) {
      const double slope = (r - prev) / 0.01;
      EXPECT_LE(slope, prev_slope + 1e-12);
      prev_slope = slope;
    }
    prev = r;
  }
}

TEST(Translate, Values) {
  EXPECT_EQ(translate_fidelity(0.7, 1.0), 0.0);
  EXPECT_NEAR(translate_fidelity(0.9, 0.99), 0.009, 1e-15);
  EXPECT_EQ(translate_eta_delta(0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(translate_eta_delta(0.1, 0.02), 0.03);
  EXPECT_THROW(translate_fidelity(1.2, 0.5), OutOfRange);
  EXPECT_THROW(translate_eta_delta(0.1, -0.01), OutOfRange);
}

TEST(GhzEpsilon, ExactRational) {
  const auto b = ghz_epsilon(3, 20);
  ASSERT_TRUE(b.exact.has_value());
  EXPECT_EQ(*b.exact, Rational(13, 1024));
  EXPECT_DOUBLE_EQ(b.epsilon, 13.0 / 1024.0);
  ASSERT_TRUE(b.realization_epsilon.has_value());
  EXPECT_FALSE(b.out_of_range);
}

TEST(GhzEpsilon, OutOfRangeIsFlagged) {
  const auto b = ghz_epsilon(1, 0);
  EXPECT_EQ(*b.exact, Rational(5));
  EXPECT_TRUE(b.out_of_range);
  EXPECT_FALSE(b.realization_epsilon.has_value());
  EXPECT_THROW(ghz_epsilon(0, 4), InvalidParameters);
}

TEST(GhzEpsilon, Monotone) {
  for (std::uint64_t n = 1; n <= 10; ++n) {
    for (std::uint64_t s = 0; s < 60; ++s) {
      EXPECT_GT(ghz_epsilon(n, s).epsilon, ghz_epsilon(n, s + 1).epsilon);
      EXPECT_LT(ghz_epsilon(n, s).epsilon, ghz_epsilon(n + 1, s).epsilon);
    }
  }
  EXPECT_FALSE(ghz_epsilon(3, 21).exact.has_value());
  EXPECT_NEAR(ghz_epsilon(3, 21).epsilon, 13.0 / 1024.0 / std::sqrt(2.0), 1e-16);
}

TEST(GraphEpsilon, MatchesFrozenHighPrecisionValues) {
  for (const auto& g : grid) {
    const auto b = graph_epsilon(g.in);
    EXPECT_NEAR(b.one_minus_p0 / g.one_minus_p0, 1.0, 1e-12);
    EXPECT_NEAR(b.eta0 / g.eta0, 1.0, 1e-13);
    EXPECT_NEAR(b.epsilon / g.epsilon, 1.0, 1e-12);
    EXPECT_EQ(b.out_of_range, g.epsilon > 1.0);
    const auto hp = graph_epsilon_high_precision(g.in);
    EXPECT_GE(agreeing_digits(b.epsilon, hp.epsilon), 12.0);
    EXPECT_GE(agreeing_digits(g.epsilon, hp.epsilon), 15.0);
  }
}

TEST(GraphEpsilon, LargeLambdaLimit) {
  const auto b = graph_epsilon({16, 10000000, 1, 1, 4});
  EXPECT_NEAR(b.eta0, 1.5 / 16, 1e-6);
}

TEST(GraphEpsilon, RejectsInvalidParameters) {
  EXPECT_THROW(graph_epsilon({0, 10, 1, 1, 4}), InvalidParameters);
  EXPECT_THROW(graph_epsilon({16, 0, 1, 1, 4}), InvalidParameters);
  // 1/n·J^{−2cm/3} > 1 pushes the sum past 1.
  EXPECT_THROW(graph_epsilon({0.5, 10, 3, 1, 1}), InvalidParameters);
}
