#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "report.hpp"
#include "studies.hpp"

namespace ldspec {

namespace detail {

/// Collects checks for one suite; optionally stamps each with its wall time.
class SuiteBuilder {
 public:
  SuiteBuilder(Report& rep, bool timing) : rep_(rep), timing_(timing) {}

  /// Runs `body`, which returns one or more checks, and records them.
  void run(const std::function<std::vector<CheckRecord>()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<CheckRecord> cs = body();
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    for (auto& c : cs) {
      if (timing_) c.wall_ms = ms / double(cs.size());
      rep_.add(std::move(c));
    }
  }

 private:
  Report& rep_;
  bool timing_;
};

inline std::string agreement_note(const studies::Agreement& a) {
  std::string s = std::to_string(a.agree) + "/" + std::to_string(a.determinate) + " determinate cells agree";
  if (!a.disagreements.empty()) s += "; first disagreement " + a.disagreements.front();
  return s;
}

inline void core_suite(SuiteBuilder& b) {
  b.run([] {
    return std::vector{
        check_true("suite/core/trace-tail-p1.1-convergent", studies::trace_tail(1.1).status == Status::Member,
                   "slope policy: sum (2m+1)^-1.1 converges"),
        check_true("suite/core/trace-tail-p1.0-divergent", studies::trace_tail(1.0).status == Status::NonMember,
                   "slope policy: sum (2m+1)^-1 diverges")};
  });
  b.run([] {
    int ok = 0;
    auto ws = studies::strictness_witnesses();
    for (const auto& w : ws) ok += w.ok();
    return std::vector{check_count("suite/core/strict-inclusion-witnesses", ok, int(ws.size()),
                                   "strict inclusion of scale spaces for unbounded spectra"),
                       check_true("suite/core/bounded-spectrum-rejected", studies::bounded_witness_error() == "bounded",
                                  "no strict inclusion for a bounded operator")};
  });
  b.run([] {
    // one-atom-per-index vector with |c_n|^2 = n^-3 on lambda_n = n: ||f||_1^2 = zeta(2)
    auto mu = std::make_shared<const SpectralMeasure>(
        SpectralMeasure::sequence([](int n) { return double(n); }, [](int) { return 1.0; }, 16384));
    std::vector<cplx> c;
    for (int n = 1; n <= 16384; ++n) c.push_back(std::pow(double(n), -1.5));
    const MembershipVerdict v = membership(CoefficientVector::on(mu, std::move(c)), 1.0);
    return std::vector{check_rel("suite/core/scale-norm-zeta2", v.norm_estimate.value_or(NAN),
                                 std::sqrt(pi * pi / 6), 1e-4, "scale norm as a weighted coefficient sum")};
  });
}

inline void sobolev_suite(SuiteBuilder& b) {
  b.run([] {
    const TestFunction g = make_function("gauss");
    return std::vector{
        check_rel("suite/sobolev/gauss-h1-fourier", hs_norm_fourier(g, 1).value, std::sqrt(1.5 * std::sqrt(pi)), 1e-8,
                  "H^s norm via the unitary Fourier transform"),
        check_rel("suite/sobolev/gauss-moment-1", weighted_moment_norm(g, 1).value, std::sqrt(std::sqrt(pi) / 2), 1e-8,
                  "weighted moment norm")};
  });
  b.run([] {
    GagliardoConfig c;
    c.s = 0.25;
    return std::vector{check_rel("suite/sobolev/gagliardo-x-on-unit-interval",
                                 gagliardo_seminorm(make_function("monomial"), Interval{0, 1}, c).value,
                                 std::sqrt(8.0 / 15), 1e-6, "Gagliardo seminorm on an interval")};
  });
  b.run([] {
    const TestFunction bx = make_function("box");
    return std::vector{check_true("suite/sobolev/box-in-h0.4", hs_norm_fourier(bx, 0.4).status == Status::Member,
                                  "jump discontinuity: H^s for s < 1/2"),
                       check_true("suite/sobolev/box-not-in-h0.5", hs_norm_fourier(bx, 0.5).status == Status::NonMember,
                                  "jump discontinuity: not in H^1/2")};
  });
  b.run([] {
    // |f|_s^2 = C(s) int |xi|^{2s} |f^|^2; for the unit gaussian the integral is Gamma(s + 1/2)
    std::vector<CheckRecord> out;
    GagliardoConfig c;
    for (double s : {0.25, 0.5, 0.75}) {
      c.s = s;
      const double g = gagliardo_seminorm(make_function("gauss"), std::nullopt, c).value;
      out.push_back(check_rel("suite/sobolev/fourier-gagliardo-s" + nlohmann::json(s).dump(), g * g,
                              fourier_gagliardo_constant(s) * std::tgamma(s + 0.5), 1e-5,
                              "Gagliardo seminorm equals weighted Fourier integral"));
    }
    return out;
  });
}

inline void periodic_suite(SuiteBuilder& b) {
  b.run([] {
    const TestFunction one = make_function("const");
    return std::vector{
        check_true("suite/periodic/const-phi-pi-s0.4-member", fractional_membership(one, pi, 0.4).status == Status::Member,
                   "threshold at s = 1/2 for the constant function"),
        check_true("suite/periodic/const-phi-pi-s0.6-nonmember",
                   fractional_membership(one, pi, 0.6).status == Status::NonMember,
                   "threshold at s = 1/2 for the constant function")};
  });
  b.run([] {
    const PeriodicCoefficients pc = analyze(make_function("fourier-mode", {{"n", 3}, {"phi", 1.0}}), 1.0, 64);
    double off = 0;
    for (int n = -64; n <= 64; ++n)
      if (n != 3) off = std::max(off, std::abs(pc.at(n)));
    return std::vector{check_abs("suite/periodic/eigenfunction-coefficient", std::abs(pc.at(3)), 1.0, 1e-10,
                                 "eigenfunction expansion of a single mode"),
                       check_below("suite/periodic/eigenfunction-leakage", off, 1e-10,
                                   "eigenfunction expansion of a single mode")};
  });
  b.run([] {
    const TestFunction one = make_function("const");
    std::vector<CheckRecord> out;
    for (double phi : {0.0, pi})
      for (double s : {0.3, 0.75}) {
        const Status spec = fractional_membership(one, phi, s).status;
        const Status pred = as_status(boundary_characterization(one, phi, s).prediction);
        out.push_back(check_true("suite/periodic/boundary-rule-const-phi" + nlohmann::json(phi).dump() + "-s" +
                                     nlohmann::json(s).dump(),
                                 spec == pred, "boundary rule matches spectral verdict"));
      }
    const ThresholdReport tr = threshold_comparison(0.75, 0, pi, one);
    out.push_back(check_true("suite/periodic/domain-relations-s0.75", tr.consistent(),
                             "relations between the phi-, Dirichlet and Neumann domains"));
    return out;
  });
}

inline void halfline_suite(SuiteBuilder& b) {
  b.run([] {
    const TestFunction f = make_function("bump", {{"lo", 0.5}, {"hi", 1.5}});
    const HalflineTransform D(HalflineOperator(pi), f), B(BesselOperator(0.5), f);
    const double l2 = l2_norm(f).value;
    const double h1 = std::hypot(l2, l2_norm(derivative(f, 1)).value);
    return std::vector{
        check_rel("suite/halfline/parseval-dirichlet", fractional_norm(D, 0).value, l2, 1e-4,
                  "Parseval for the half-line transform"),
        check_rel("suite/halfline/h1-dirichlet", fractional_norm(D, 1).value, h1, 1e-4,
                  "fractional norm at s = 1 equals the H^1 norm"),
        check_rel("suite/halfline/bessel-half-equals-dirichlet", fractional_norm(B, 0.5).value,
                  fractional_norm(D, 0.5).value, 1e-3, "gamma = 1/2 reduces to the Dirichlet realization")};
  });
  b.run([] {
    studies::Agreement a = studies::halfline_matrix({"bump(lo=0.5,hi=1.5)", "box(a=0,b=1)"}, {0.3, 0.75});
    return std::vector{CheckRecord{"suite/halfline/predicate-matrix", a.all_agree() && a.determinate > 0,
                                   double(a.agree), double(a.determinate), 0.0,
                                   "regularity and boundary rule on the half-line: " + agreement_note(a),
                                   {}}};
  });
}

inline void hermite_suite(SuiteBuilder& b, std::uint64_t seed) {
  b.run([] {
    return std::vector{check_below("suite/hermite/gram-identity", studies::hermite_gram_deviation(), 1e-10,
                                   "orthonormality of the Hermite functions")};
  });
  b.run([] {
    return std::vector{check_below("suite/hermite/left-definite-two-way-grid", studies::left_definite_grid_gap(), 1e-8,
                                   "derivative-sum form equals spectral form of the left-definite product")};
  });
  b.run([] {
    return std::vector{check_below("suite/hermite/mehler-vs-eigen-sum", studies::mehler_grid_error(), 1e-8,
                                   "Mehler kernel equals its eigenfunction expansion"),
                       check_below("suite/hermite/mehler-semigroup", studies::mehler_composition_error(), 1e-6,
                                   "semigroup property of the Mehler kernel")};
  });
  b.run([seed] {
    const FormReport u0 = form_inequality_check(OscillatorState::basis(0), 1);
    const studies::FormTrials k1 = studies::form_trials(seed, 1, 100), k2 = studies::form_trials(seed, 2, 50);
    return std::vector{check_abs("suite/hermite/form-ground-state", u0.lhs, 1.5, 1e-12, "P^4 + X^4 on the ground state"),
                       check_count("suite/hermite/form-random-k1", k1.trials - k1.violations, k1.trials,
                                   "form inequality with a_1 = 1, b_1 = 2"),
                       check_count("suite/hermite/form-random-k2", k2.trials - k2.violations, k2.trials,
                                   "form inequality with recursive constants")};
  });
  b.run([] {
    studies::Agreement a = studies::oscillator_domain_agreement({"gauss", "box", "hat", "power(p=2)"});
    return std::vector{CheckRecord{"suite/hermite/oscillator-domain-agreement", a.all_agree() && a.determinate > 0,
                                   double(a.agree), double(a.determinate), 0.0,
                                   "oscillator domain equals H^2s with |x|^2s moment: " + agreement_note(a),
                                   {}}};
  });
}

inline void interp_suite(SuiteBuilder& b) {
  b.run([] {
    return std::vector{check_abs("suite/interp/semigroup-constant-k1-half", semigroup_constant(1, 0.5),
                                 2 * std::log(2.0), 1e-6, "per-atom constant of the semigroup characterization"),
                       check_abs("suite/interp/resolvent-constant-k1-half", resolvent_constant(1, 0.5), 1.0, 1e-8,
                                 "per-atom constant of the resolvent characterization")};
  });
  b.run([] {
    // one atom: each characterization is its constant times lambda^{2 k theta}
    std::vector<CheckRecord> out;
    auto mu = std::make_shared<const SpectralMeasure>(SpectralMeasure::discrete({{1, 1}, {10, 1}, {100, 1}}));
    for (std::size_t i = 0; i < 3; ++i) {
      std::vector<cplx> c(3, 0.0);
      c[i] = 1.0;
      CoefficientVector x = CoefficientVector::on(mu, c);
      x.finitely_supported = true;
      const InterpolationPair P(mu, 1, 0.5);
      const double lam = mu->atoms()[i].lambda;
      const std::string tag = "lambda" + nlohmann::json(lam).dump();
      out.push_back(check_rel("suite/interp/scaling-semigroup-" + tag, semigroup_characterization(x, P).value,
                              semigroup_constant(1, 0.5) * lam, 1e-8, "single-atom scaling"));
      out.push_back(check_rel("suite/interp/scaling-resolvent-" + tag, resolvent_characterization(x, P).value,
                              resolvent_constant(1, 0.5) * lam, 1e-8, "single-atom scaling"));
      out.push_back(check_rel("suite/interp/scaling-kfunctional-" + tag, interpolation_integral(x, P).value,
                              interpolation_constant(0.5) * lam, 1e-8, "single-atom scaling"));
    }
    return out;
  });
  b.run([] {
    const auto vectors = studies::stress_matrix(4096, {{1, 0.5}});
    const studies::StressOutcome st = studies::stress_agreement(vectors);
    const ConsistencyReport ident = spectral_identity_consistency(vectors.front().x, 1, 0.5, {4, 12});
    return std::vector{check_count("suite/interp/characterizations-agree", st.expected, st.vectors,
                                   "three characterizations agree on finiteness"),
                       check_true("suite/interp/identity-verdict", ident.agree,
                                  "interpolation space equals the domain of the fractional power"),
                       check_rel("suite/interp/identity-ratio", ident.ratio, ident.constant, 1e-6,
                                 "interpolation norm is a fixed multiple of the power norm")};
  });
  b.run([] {
    const auto f = OscillatorState::combination({0.5, cplx(0, 0.3), 0.0, 0.7, 0.2});
    const MehlerCrossCheck m = mehler_semigroup_crosscheck(f, 0.25);
    return std::vector{check_below("suite/interp/mehler-position-space", m.relative_gap(), 1e-8,
                                   "semigroup integral in position space matches the coefficient side")};
  });
}

}  // namespace detail

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"core", "sobolev", "periodic", "halfline", "hermite", "interp", "all"};
  return names;
}

/// Runs the executable checks of one module (or all of them). Checks are
/// ordered by name; wall times are attached only when `timing` is set, so the
/// default report is byte-identical across runs for a given seed.
inline Report verify_suite(std::string name, std::uint64_t seed, bool timing = false) {
  if (name == "interpolation") name = "interp";
  bool known = false;
  for (const auto& n : suite_names()) known = known || n == name;
  require(known, ErrorKind::Usage,
          "verify: unknown suite '" + name + "' (expected core|sobolev|periodic|halfline|hermite|interp|all)");
  Report rep;
  rep.command = "verify";
  rep.inputs = {{"suite", name}, {"seed", seed}, {"timing", timing}};
  detail::SuiteBuilder b(rep, timing);
  const bool all = name == "all";
  if (all || name == "core") detail::core_suite(b);
  if (all || name == "sobolev") detail::sobolev_suite(b);
  if (all || name == "periodic") detail::periodic_suite(b);
  if (all || name == "halfline") detail::halfline_suite(b);
  if (all || name == "hermite") detail::hermite_suite(b, seed);
  if (all || name == "interp") detail::interp_suite(b);
  rep.sort_checks();
  return rep;
}

}  // namespace ldspec
