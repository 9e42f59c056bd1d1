#include <gtest/gtest.h>

#include <ldspec/spectral_core.hpp>
#include <ldspec/studies.hpp>

using namespace ldspec;

namespace {

std::shared_ptr<const SpectralMeasure> integers(int n) {
  return std::make_shared<const SpectralMeasure>(
      SpectralMeasure::sequence([](int k) { return double(k); }, [](int) { return 1.0; }, n));
}

}  // namespace

TEST(SpectralMeasure, RejectsNonPositiveWeights) {
  EXPECT_THROW(SpectralMeasure::discrete({{1.0, 0.0}}), Error);
  EXPECT_THROW(SpectralMeasure::discrete({{NAN, 1.0}}), Error);
}

TEST(SpectralMeasure, ShiftMakesLeftDefinite) {
  const SpectralMeasure m = SpectralMeasure::discrete({{0.0, 1.0}, {3.0, 1.0}});
  EXPECT_FALSE(m.left_definite());
  EXPECT_TRUE(m.shifted_by_identity().left_definite());
  EXPECT_DOUBLE_EQ(m.shifted_by_identity().atoms()[1].lambda, 4.0);
}

TEST(ScaleNorm, MatchesClosedForm) {
  auto mu = std::make_shared<const SpectralMeasure>(SpectralMeasure::discrete({{1, 2.0}, {4, 0.5}, {9, 1.0}}));
  const CoefficientVector v = CoefficientVector::on(mu, {1.0, cplx(0, 2), cplx(1, 1)});
  // sum lambda^s |c|^2 w at s = 1: 1*1*2 + 4*4*0.5 + 9*2*1
  EXPECT_NEAR(scale_norm(v, 1.0), std::sqrt(2 + 8 + 18), 1e-14);
  EXPECT_NEAR(scale_norm(v, 0.0), std::sqrt(2 + 2 + 2), 1e-14);
}

TEST(ScaleNorm, RequiresSupportAboveOne) {
  auto mu = std::make_shared<const SpectralMeasure>(SpectralMeasure::discrete({{0.5, 1.0}}));
  EXPECT_THROW(scale_norm(CoefficientVector::on(mu, {1.0}), 1.0), Error);
}

TEST(Membership, ZetaTwoNorm) {
  std::vector<cplx> c;
  for (int n = 1; n <= 16384; ++n) c.push_back(std::pow(double(n), -1.5));
  const MembershipVerdict v = membership(CoefficientVector::on(integers(16384), c), 1.0);
  ASSERT_EQ(v.status, Status::Member);
  EXPECT_NEAR(*v.norm_estimate, std::sqrt(M_PI * M_PI / 6), 1e-4);
}

TEST(Membership, ThresholdSplitsAtTheCriticalIndex) {
  std::vector<cplx> c;
  for (int n = 1; n <= 16384; ++n) c.push_back(1.0 / n);
  const CoefficientVector v = CoefficientVector::on(integers(16384), c);
  EXPECT_EQ(membership(v, 0.5).status, Status::Member);
  EXPECT_EQ(membership(v, 1.0).status, Status::NonMember);
}

TEST(Membership, FiniteSupportIsExact) {
  CoefficientVector v = CoefficientVector::on(integers(4), {1.0, 1.0, 0.0, 0.0});
  v.finitely_supported = true;
  const MembershipVerdict m = membership(v, 3.0);
  EXPECT_EQ(m.status, Status::Member);
  EXPECT_NEAR(*m.norm_estimate, std::sqrt(1.0 + 8.0), 1e-14);
}

TEST(Membership, AnalyticTailModel) {
  CoefficientVector v = CoefficientVector::on(integers(64), std::vector<cplx>(64, 0.0));
  for (int n = 1; n <= 64; ++n) v.coeffs[std::size_t(n - 1)] = std::pow(double(n), -1.0);
  v.tail = TailModel{2.0, 1.0};
  EXPECT_EQ(membership(v, 0.5).status, Status::Member);
  EXPECT_EQ(membership(v, 1.5).status, Status::NonMember);
}

TEST(Operators, LeftDefiniteOperatorMultipliesByLambda) {
  CoefficientVector v = CoefficientVector::on(integers(3), {1.0, 1.0, 1.0});
  v.finitely_supported = true;
  const CoefficientVector g = apply_left_definite_operator(v, 0.0);
  EXPECT_DOUBLE_EQ(g.coeffs[2].real(), 3.0);
  // ||A f||_r = ||f||_{r+2}
  EXPECT_NEAR(scale_norm(g, 1.0), scale_norm(v, 3.0), 1e-12);
}

TEST(Operators, LeftDefiniteOperatorRejectsOutsideDomain) {
  std::vector<cplx> c;
  for (int n = 1; n <= 16384; ++n) c.push_back(1.0 / n);
  EXPECT_THROW(apply_left_definite_operator(CoefficientVector::on(integers(16384), c), 0.0), Error);
}

TEST(Operators, ScaleByPowerIsIsometric) {
  std::vector<cplx> c{1.0, 0.5, cplx(0, 0.25)};
  const CoefficientVector v = CoefficientVector::on(integers(3), c);
  EXPECT_NEAR(scale_norm(scale_by_power(v, 0.75), 0.5), scale_norm(v, 2.0), 1e-13);
}

TEST(Strictness, WitnessSeparatesScaleSpaces) {
  for (const auto& w : studies::strictness_witnesses()) EXPECT_TRUE(w.ok()) << w.measure << " " << w.error;
}

TEST(Strictness, BoundedSpectrumRaisesBounded) { EXPECT_EQ(studies::bounded_witness_error(), "bounded"); }

TEST(Strictness, RequiresIncreasingIndices) { EXPECT_THROW(strict_inclusion_witness(integers(64), 2, 1), Error); }

TEST(TraceTail, ConvergesAboveOneDivergesAtOne) {
  EXPECT_EQ(studies::trace_tail(1.1).status, Status::Member);
  EXPECT_EQ(studies::trace_tail(1.0).status, Status::NonMember);
}
