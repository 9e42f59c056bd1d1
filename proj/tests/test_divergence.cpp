#include <gtest/gtest.h>

#include <cmath>

#include <ldspec/divergence.hpp>

using namespace ldspec;

namespace {

std::vector<PartialSum> power_trace(double p, int max_exp = 14) {
  std::vector<PartialSum> t;
  double acc = 0;
  long n = 1;
  for (int e = 4; e <= max_exp; ++e) {
    const long N = 1L << e;
    for (; n <= N; ++n) acc += std::pow(double(n), -p);
    t.push_back({double(N), acc});
  }
  return t;
}

}  // namespace

TEST(Classify, SquareSummableSeriesIsMember) {
  const MembershipVerdict v = classify(power_trace(2.0), {});
  EXPECT_EQ(v.status, Status::Member);
  ASSERT_TRUE(v.norm_estimate.has_value());
  // extrapolated tail: sum n^-2 = pi^2/6
  EXPECT_NEAR(*v.norm_estimate, std::sqrt(M_PI * M_PI / 6), 1e-4);
}

TEST(Classify, HarmonicSeriesIsNonMember) {
  const MembershipVerdict v = classify(power_trace(1.0), {});
  EXPECT_EQ(v.status, Status::NonMember);
  EXPECT_GT(*v.divergence_exponent, 0.05);
}

TEST(Classify, GrowingSeriesIsNonMember) {
  EXPECT_EQ(classify(power_trace(0.5), {}).status, Status::NonMember);
}

TEST(Classify, NoisyLogarithmicGrowthIsNotMember) {
  // nearly constant dyadic increments with a larger early one: log growth, not a decaying tail
  std::vector<PartialSum> t{{16, 3.198}, {32, 3.821}, {64, 4.483}, {128, 5.153}, {256, 5.829}};
  t.insert(t.begin(), {8, 2.349});
  EXPECT_NE(classify(t, {}).status, Status::Member);
}

TEST(Classify, TooFewPointsIsIndeterminate) {
  std::vector<PartialSum> t{{16, 1.0}, {32, 1.0}};
  EXPECT_EQ(classify(t, {}).status, Status::Indeterminate);
}

TEST(Classify, NonFiniteSumIsNonMember) {
  auto t = power_trace(2.0);
  t.back().s = INFINITY;
  EXPECT_EQ(classify(t, {}).status, Status::NonMember);
}

TEST(Classify, ConstantTraceIsMemberWithExactNorm) {
  std::vector<PartialSum> t;
  for (int e = 4; e <= 10; ++e) t.push_back({std::ldexp(1.0, e), 4.0});
  const MembershipVerdict v = classify(t, {});
  EXPECT_EQ(v.status, Status::Member);
  EXPECT_DOUBLE_EQ(*v.norm_estimate, 2.0);
}

TEST(Settled, DetectsStableTail) {
  std::vector<PartialSum> t{{1, 1.0}, {2, 2.0}, {4, 2.0}, {8, 2.0}};
  EXPECT_TRUE(settled(t));
  t.push_back({16, 2.1});
  EXPECT_FALSE(settled(t));
}

TEST(Policy, WindowsAreDyadic) {
  DivergencePolicy p{2, 5};
  EXPECT_EQ(p.windows(), (std::vector<double>{4, 8, 16, 32}));
}
