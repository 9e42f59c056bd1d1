#include <gtest/gtest.h>

#include <ldspec/hermite.hpp>
#include <ldspec/studies.hpp>

using namespace ldspec;

namespace {

using Poly = std::vector<double>;  // monomial coefficients, lowest degree first

Poly deriv(const Poly& p) {
  Poly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(double(k) * p[k]);
  return d.empty() ? Poly{0.0} : d;
}

/// (-d^2/dx^2 + 2x d/dx + c) p.
Poly shifted_hermite_operator(const Poly& p, double c) {
  const Poly d1 = deriv(p), d2 = deriv(d1);
  Poly r(p.size() + 1, 0.0);
  for (std::size_t k = 0; k < p.size(); ++k) r[k] += c * p[k];
  for (std::size_t k = 0; k < d2.size(); ++k) r[k] -= d2[k];
  for (std::size_t k = 0; k < d1.size(); ++k) r[k + 1] += 2 * d1[k];
  return r;
}

/// int p q e^{-x^2} dx from the moments Gamma((k+1)/2).
double weighted_product(const Poly& p, const Poly& q) {
  double acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j)
      if ((i + j) % 2 == 0) acc += p[i] * q[j] * std::tgamma((double(i + j) + 1) / 2);
  return acc;
}

}  // namespace

TEST(Polynomials, HermiteValues) {
  EXPECT_DOUBLE_EQ(hermite_eval(2, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(hermite_eval(3, 2.0), 40.0);
  long double h0 = 1, h1 = 1.0L;  // H_0, H_1 at x = 0.5
  for (int m = 1; m < 120; ++m) {
    const long double h2 = 2 * 0.5L * h1 - 2.0L * m * h0;
    h0 = h1;
    h1 = h2;
  }
  EXPECT_NEAR(hermite_eval(120, 0.5) / double(h1), 1.0, 1e-12);
  // |H_300(0.5)| is about 1e350
  EXPECT_TRUE(std::isinf(hermite_eval(300, 0.5)));
}

TEST(Polynomials, GaussHermiteGramIsIdentity) { EXPECT_LT(studies::hermite_gram_deviation(20), 1e-10); }

TEST(Stirling, LowOrderCoefficients) {
  const LeftDefiniteCoefficients c1 = stirling_coefficients(1, 3.0);
  ASSERT_EQ(c1.cj.size(), 2u);
  EXPECT_DOUBLE_EQ(c1.cj[0], 3.0);
  EXPECT_DOUBLE_EQ(c1.cj[1], 1.0);
  EXPECT_THROW(stirling_coefficients(11, 1.0), Error);
}

TEST(Stirling, MatchesSymbolicOperatorPowers) {
  // <(A_H + c)^n p, q> with the operator applied symbolically against the derivative-sum form
  const Poly p{0.3, -1.0, 0.5, 2.0, 0.0, -0.25}, q{1.0, 0.0, -0.7, 0.4, 0.1};
  for (int n = 1; n <= 6; ++n)
    for (double c : {1.0, 2.0, 3.5}) {
      Poly tp = p;
      for (int i = 0; i < n; ++i) tp = shifted_hermite_operator(tp, c);
      const double lhs = weighted_product(tp, q);
      const LeftDefiniteCoefficients cj = stirling_coefficients(n, c);
      double rhs = 0;
      Poly pj = p, qj = q;
      for (int j = 0; j <= n; ++j) {
        rhs += cj.cj[std::size_t(j)] * weighted_product(pj, qj);
        pj = deriv(pj);
        qj = deriv(qj);
      }
      EXPECT_NEAR(rhs, lhs, 1e-10 * std::max(1.0, std::abs(lhs))) << "n=" << n << " c=" << c;
    }
}

TEST(LeftDefinite, TwoWayIdentityOnBasisPairs) { EXPECT_LT(studies::left_definite_grid_gap(6), 1e-8); }

TEST(LeftDefinite, RequiresFiniteCombinations) {
  OscillatorState a = OscillatorState::basis(1, OscillatorSide::Hermite);
  a.finite_combination = false;
  EXPECT_THROW(left_definite_inner_product(a, a, 1), Error);
}

TEST(Transform, MonomialCoefficients) {
  const OscillatorState x2 = gauss_hermite_transform(make_function("monomial", {{"k", 2}}), 6);
  // <x^2, h_0> = pi^{1/4}/2 and <x^2, h_2> = pi^{1/4}/sqrt(2) against e^{-x^2}
  EXPECT_NEAR(x2.a[0].real(), std::pow(M_PI, 0.25) / 2, 1e-13);
  EXPECT_NEAR(x2.a[2].real(), std::pow(M_PI, 0.25) / std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(std::abs(x2.a[4]), 0.0, 1e-13);
}

TEST(Transform, RejectsCutOffFunctions) {
  EXPECT_THROW(gauss_hermite_transform(make_function("box"), 8), Error);
}

TEST(Oscillator, GaussianIsGroundState) {
  const OscillatorState st = oscillator_coefficients(make_function("gauss"), 256);
  EXPECT_NEAR(st.a[0].real(), std::pow(M_PI, 0.25), 1e-12);
  for (std::size_t m = 1; m < st.a.size(); ++m) EXPECT_LT(std::abs(st.a[m]), 1e-12);
}

TEST(Oscillator, EigenfunctionNormsAreExact) {
  const OscillatorState st = oscillator_coefficients(make_function("hermite", {{"m", 3}}), 256);
  for (double s : {0.5, 1.0, 3.0}) EXPECT_NEAR(oscillator_fractional_norm(st, s).value, std::pow(7.0, s / 2), 1e-10);
}

TEST(Oscillator, DomainAgreementOnSmallSet) {
  const studies::Agreement a = studies::oscillator_domain_agreement({"gauss", "box", "power(p=2)"});
  EXPECT_TRUE(a.all_agree()) << (a.disagreements.empty() ? "" : a.disagreements.front());
  EXPECT_GE(a.determinate, 10);
}

TEST(Form, LadderOperatorMatrixElements) {
  // <e_m, X^4 e_m> = <e_m, P^4 e_m> = (6m^2 + 6m + 3)/4, <e_m, (P^2 + X^2)^2 e_m> = (2m + 1)^2
  for (int m = 0; m <= 6; ++m) {
    const FormReport r = form_inequality_check(OscillatorState::basis(m), 1);
    EXPECT_NEAR(r.lhs, (6.0 * m * m + 6.0 * m + 3) / 2, 1e-10) << m;
    EXPECT_NEAR(r.number, (2.0 * m + 1) * (2.0 * m + 1), 1e-10) << m;
    EXPECT_TRUE(r.holds);
  }
}

TEST(Form, PositionMomentMatchesQuadrature) {
  const OscillatorState f = OscillatorState::combination({0.5, cplx(0, 0.3), 0.0, 0.7, 0.2});
  double acc = 0;
  const double h = 1e-3;
  for (double x = -14; x < 14; x += h) acc += (x + h / 2) * (x + h / 2) * std::norm(f(x + h / 2)) * h;
  EXPECT_NEAR(x_power_form(f, 1), acc, 1e-9);
}

TEST(Form, RecursionConstants) {
  EXPECT_EQ(form_constants(1), std::make_pair(1.0, 2.0));
  const auto [a2, b2] = form_constants(2);
  EXPECT_DOUBLE_EQ(a2, 6.0);
  EXPECT_DOUBLE_EQ(b2, 1800.0);
  EXPECT_THROW(form_constants(4), Error);
}

TEST(Form, RandomCombinationsHold) {
  EXPECT_EQ(studies::form_trials(7, 1, 100).violations, 0);
  EXPECT_EQ(studies::form_trials(7, 2, 50).violations, 0);
  EXPECT_EQ(studies::form_trials(7, 3, 20).violations, 0);
}

TEST(Random, SplitMixIsDeterministic) {
  SplitMix64 a(42), b(42);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(a.next(), b.next());
  // reference output of the splitmix64 generator for seed 0
  SplitMix64 z(0);
  EXPECT_EQ(z.next(), 0xe220a8397b1dcdafULL);
}

TEST(Mehler, MatchesEigenSum) {
  EXPECT_LT(studies::mehler_grid_error(), 1e-8);
  EXPECT_NEAR(mehler_kernel(0.5, 0.3, -0.2), studies::mehler_eigen_sum(0.5, 0.3, -0.2), 1e-12);
}

TEST(Mehler, SemigroupComposition) { EXPECT_LT(studies::mehler_composition_error(0.3, 0.4), 1e-6); }

TEST(Mehler, HermiteSideIsConjugatedKernel) {
  const double t = 0.5, x = 0.3, y = -0.2, c = 2.0;
  const double expect = studies::mehler_eigen_sum(t, x, y) * std::exp(0.5 * (x * x + y * y) - t * (c - 1));
  EXPECT_NEAR(mehler_kernel(t, x, y, MehlerSide::Hermite, c), expect, 1e-12);
}

TEST(Mehler, StableAtExtremeTimes) {
  EXPECT_TRUE(std::isfinite(mehler_kernel(1e-6, 0.3, 0.3)));
  EXPECT_TRUE(std::isfinite(mehler_kernel(400, 0.3, 0.3)));
  EXPECT_THROW(mehler_kernel(0.0, 0, 0), Error);
}
