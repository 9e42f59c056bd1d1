// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include <ldspec/studies.hpp>

using namespace ldspec;
namespace st = ldspec::studies;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string tally(const st::Agreement& a) {
  std::string s = std::to_string(a.agree) + "/" + std::to_string(a.determinate) + " determinate cells agree (" +
                  std::to_string(a.cells - a.determinate) + " indeterminate of " + std::to_string(a.cells) + ")";
  for (const auto& d : a.disagreements) s += "\n      disagreement: " + d;
  return s;
}

Outcome hermite_orthonormality() {
  const double dev = st::hermite_gram_deviation(20);
  return {dev < 1e-10, "max |G - I| = " + fmt("%.3g", dev) + " (< 1e-10)"};
}

Outcome left_definite_identity() {
  const double gap = st::left_definite_grid_gap(6);
  return {gap < 1e-8, "worst scaled gap = " + fmt("%.3g", gap) + " over 7x7 pairs, n = 1..3, c = 1,2 (< 1e-8)"};
}

Outcome mehler() {
  const double grid = st::mehler_grid_error(), comp = st::mehler_composition_error(0.3, 0.4);
  return {grid < 1e-8 && comp < 1e-6,
          "25-point grid error " + fmt("%.3g", grid) + " (< 1e-8); composition (0.3, 0.4) error " + fmt("%.3g", comp) +
              " (< 1e-6)"};
}

Outcome oscillator_domain() {
  const st::Agreement a = st::oscillator_domain_agreement();
  const int functions = int(st::oscillator_study_functions().size());
  return {functions >= 12 && a.determinate > 0 && a.all_agree(),
          std::to_string(functions) + " functions x s in {0.25, 0.5, 1, 1.5}: " + tally(a)};
}

Outcome form_inequality() {
  const st::FormTrials k1 = st::form_trials(20240601, 1, 100), k2 = st::form_trials(20240601, 2, 50);
  return {k1.violations == 0 && k2.violations == 0,
          "k=1: " + std::to_string(k1.violations) + "/100 violations, k=2: " + std::to_string(k2.violations) +
              "/50 violations; min relative slack " + fmt("%.3g", std::min(k1.min_slack_ratio, k2.min_slack_ratio))};
}

Outcome periodic_threshold() {
  const TestFunction one = make_function("const");
  const Status lo = fractional_membership(one, pi, 0.4).status, hi = fractional_membership(one, pi, 0.6).status;
  const st::Agreement a = st::periodic_matrix();
  return {lo == Status::Member && hi == Status::NonMember && a.determinate > 0 && a.all_agree(),
          std::string("f = 1, phi = pi: s=0.4 ") + to_string(lo) + ", s=0.6 " + to_string(hi) + "; matrix " + tally(a)};
}

Outcome interpolation_constants() {
  const double c = semigroup_constant(1, 0.5), b = resolvent_constant(1, 0.5);
  const st::StressOutcome s = st::stress_agreement();
  std::string d = "C_{1,1/2} - 2 ln 2 = " + fmt("%.3g", c - 2 * std::log(2.0)) + ", B(1,1) - 1 = " + fmt("%.3g", b - 1) +
                  "; stress matrix " + std::to_string(s.agree) + "/" + std::to_string(s.vectors) +
                  " agree across methods (" + std::to_string(s.expected) + " with the predicted verdict)";
  for (const auto& f : s.failures) d += "\n      " + f;
  return {std::abs(c - 2 * std::log(2.0)) < 1e-6 && std::abs(b - 1) < 1e-8 && s.agree == s.vectors && s.vectors == 30, d};
}

Outcome halfline_consistency() {
  const st::HalflineConsistency c = st::halfline_consistency();
  const st::Agreement a = st::halfline_matrix();
  return {c.worst_gamma_alpha < 1e-3 && c.worst_parseval < 1e-4 && a.determinate > 0 && a.all_agree(),
          "gamma=1/2 vs alpha=pi worst rel gap " + fmt("%.3g", c.worst_gamma_alpha) + " (< 1e-3); Parseval defect " +
              fmt("%.3g", c.worst_parseval) + " (< 1e-4); predicate matrix " + tally(a)};
}

Outcome strictness() {
  int ok = 0;
  std::string failures;
  for (const auto& w : st::strictness_witnesses()) {
    ok += w.ok();
    if (!w.ok()) failures += "\n      " + w.measure + ": " + (w.error.empty() ? "witness not separating" : w.error);
  }
  const std::string bounded = st::bounded_witness_error();
  return {ok == 5 && bounded == "bounded",
          std::to_string(ok) + "/5 unbounded measures give a witness; bounded spectrum raised '" + bounded + "'" + failures};
}

Outcome trace_tail() {
  const MembershipVerdict a = st::trace_tail(1.1), b = st::trace_tail(1.0);
  return {a.status == Status::Member && b.status == Status::NonMember,
          std::string("p=1.1 ") + to_string(a.status) + " (slope " + fmt("%.3f", a.divergence_exponent.value_or(NAN)) +
              "), p=1.0 " + to_string(b.status) + " (slope " + fmt("%.3f", b.divergence_exponent.value_or(NAN)) + ")"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Hermite orthonormality", hermite_orthonormality},
      {"left-definite two-way identity", left_definite_identity},
      {"Mehler kernel", mehler},
      {"oscillator domain agreement", oscillator_domain},
      {"form inequality", form_inequality},
      {"periodic threshold and boundary rule", periodic_threshold},
      {"interpolation constants and stress matrix", interpolation_constants},
      {"half-line / Bessel consistency", halfline_consistency},
      {"strict inclusion witnesses", strictness},
      {"trace-ideal tail", trace_tail},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(), sec);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
