#pragma once

// Cross-module studies shared by the verification suites and the acceptance
// binary. Each returns raw measurements; callers decide how to report them.

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "halfline.hpp"
#include "hermite.hpp"
#include "interpolation.hpp"
#include "periodic.hpp"
#include "sobolev.hpp"
#include "spectral_core.hpp"

namespace ldspec::studies {

/// Tally of a verdict comparison over a grid. Cells where either side is
/// Indeterminate (or the method lacks the capability) count as skipped.
struct Agreement {
  int cells = 0;
  int determinate = 0;
  int agree = 0;
  std::vector<std::string> disagreements;
  std::vector<std::string> skipped;
  bool all_agree() const { return agree == determinate; }

  void record(const std::string& label, Status a, Status b) {
    ++cells;
    if (a == Status::Indeterminate || b == Status::Indeterminate) {
      skipped.push_back(label);
      return;
    }
    ++determinate;
    if (a == b)
      ++agree;
    else
      disagreements.push_back(label + ": " + to_string(a) + " vs " + to_string(b));
  }
};

// ---------------------------------------------------------------------------
// spectral core

/// Verdict for sum over m of (2m+1)^{-p}, the trace tail of the oscillator resolvent power.
inline MembershipVerdict trace_tail(double p, int atoms = 16384) {
  auto mu = oscillator_measure(atoms - 1);
  std::vector<cplx> c(std::size_t(atoms), 0.0);
  for (int m = 0; m < atoms; ++m) c[std::size_t(m)] = std::pow(2.0 * m + 1, -p / 2);
  return membership(CoefficientVector::on(mu, std::move(c)), 0.0);
}

struct WitnessOutcome {
  std::string measure;
  bool built = false;
  Status at_r = Status::Indeterminate;  // membership of the witness at the lower index
  Status at_s = Status::Indeterminate;  // ... and at the upper one
  std::string error;
  bool ok() const { return built && at_r == Status::Member && at_s == Status::NonMember; }
};

inline std::vector<WitnessOutcome> strictness_witnesses(double r = 0.0, double s = 2.0, int atoms = 16384) {
  struct Case {
    const char* label;
    double (*lambda)(int);
  };
  const Case cases[] = {
      {"lambda_n = n", [](int n) { return double(n); }},
      {"lambda_n = 2n - 1", [](int n) { return 2.0 * n - 1; }},
      {"lambda_n = n^2", [](int n) { return double(n) * n; }},
      {"lambda_n = n^(1/2)", [](int n) { return std::sqrt(double(n)); }},
      {"lambda_n = n^(3/2)", [](int n) { return std::pow(double(n), 1.5); }},
  };
  std::vector<WitnessOutcome> out;
  for (const auto& c : cases) {
    WitnessOutcome w;
    w.measure = c.label;
    try {
      auto mu = std::make_shared<const SpectralMeasure>(
          SpectralMeasure::sequence(c.lambda, [](int n) { return 1.0 + 1.0 / n; }, atoms));
      CoefficientVector v = strict_inclusion_witness(mu, r, s);
      w.built = true;
      w.at_r = membership(v, r).status;
      w.at_s = membership(v, s).status;
    } catch (const Error& e) {
      w.error = e.what();
    }
    out.push_back(std::move(w));
  }
  return out;
}

/// Kind of the error raised for a bounded spectrum, or empty if none was raised.
inline std::string bounded_witness_error(int atoms = 4096) {
  auto mu = std::make_shared<const SpectralMeasure>(
      SpectralMeasure::sequence([](int n) { return 2.0 - 1.0 / n; }, [](int) { return 1.0; }, atoms));
  try {
    strict_inclusion_witness(mu, 0, 2);
  } catch (const Error& e) {
    return to_string(e.kind());
  }
  return "";
}

// ---------------------------------------------------------------------------
// Hermite / oscillator

/// Max |G_ij - delta_ij| for the Gram matrix of K_0..K_M under an n-point Gauss-Hermite rule.
inline double hermite_gram_deviation(int M = 20, int nodes = 0) {
  if (nodes <= 0) nodes = M + 16;
  const HermiteRule& rule = gauss_hermite(nodes);
  std::vector<std::vector<double>> u;
  for (double x : rule.nodes) u.push_back(hermite_functions(x, M));
  double worst = 0;
  for (int i = 0; i <= M; ++i)
    for (int j = 0; j <= M; ++j) {
      CompensatedSum g;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q)
        g.add(rule.scaled[q] * u[q][std::size_t(i)] * u[q][std::size_t(j)]);
      worst = std::max(worst, std::abs(g.value() - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

/// Worst gap between the derivative-sum and spectral forms of the
/// left-definite inner product over basis pairs (K_i, K_j), i, j <= max_index.
/// The gap is scaled by (||K_i||_n ||K_j||_n) so off-diagonal zeros are comparable.
inline double left_definite_grid_gap(int max_index = 6) {
  double worst = 0;
  for (int n = 1; n <= 3; ++n)
    for (double c : {1.0, 2.0})
      for (int i = 0; i <= max_index; ++i)
        for (int j = 0; j <= max_index; ++j) {
          auto Ki = OscillatorState::basis(i, OscillatorSide::Hermite);
          auto Kj = OscillatorState::basis(j, OscillatorSide::Hermite);
          LeftDefiniteValue v = left_definite_inner_product(Ki, Kj, n, c);
          const double scale = std::sqrt(std::pow(2.0 * i + c, n) * std::pow(2.0 * j + c, n));
          worst = std::max(worst, std::abs(v.derivative_form - v.spectral_form) / scale);
        }
  return worst;
}

/// sum_{m < terms} e^{-t(2m+1)} K_m(x) K_m(y).
inline double mehler_eigen_sum(double t, double x, double y, int terms = 200) {
  const auto ux = hermite_functions(x, terms - 1), uy = hermite_functions(y, terms - 1);
  CompensatedSum acc;
  for (int m = 0; m < terms; ++m) acc.add(std::exp(-t * (2.0 * m + 1)) * ux[std::size_t(m)] * uy[std::size_t(m)]);
  return acc.value();
}

inline const std::vector<std::pair<double, double>>& mehler_points() {
  static const std::vector<std::pair<double, double>> pts{{0.0, 0.0}, {0.3, -0.2}, {1.0, 0.5}, {-1.5, 2.0}, {2.5, 2.5}};
  return pts;
}

/// Max abs difference between the closed-form kernel and the 200-term eigen-sum on 5 t-values x 5 (x, y).
inline double mehler_grid_error() {
  double worst = 0;
  for (double t : {0.1, 0.25, 0.5, 1.0, 2.0})
    for (auto [x, y] : mehler_points()) worst = std::max(worst, std::abs(mehler_kernel(t, x, y) - mehler_eigen_sum(t, x, y)));
  return worst;
}

/// Max abs difference between int K_t(x,z) K_u(z,y) dz and K_{t+u}(x,y).
inline double mehler_composition_error(double t = 0.3, double u = 0.4) {
  double worst = 0;
  for (auto [x, y] : mehler_points()) {
    const cplx comp = composite([&](double z) { return cplx(mehler_kernel(t, x, z) * mehler_kernel(u, z, y)); }, -16.0,
                                16.0, {}, 0.25);
    worst = std::max(worst, std::abs(comp.real() - mehler_kernel(t + u, x, y)));
  }
  return worst;
}

/// Functions of the oscillator-domain comparison: whole-line entries with
/// smooth, cut-off, slowly decaying and half-line profiles.
inline const std::vector<std::string>& oscillator_study_functions() {
  static const std::vector<std::string> names{"gauss",
                                              "gauss(mu=1,sigma=0.7)",
                                              "gauss-x(k=1)",
                                              "gauss-x(k=2)",
                                              "hermite(m=3)",
                                              "hermite(m=7)",
                                              "abs-exp",
                                              "box",
                                              "hat",
                                              "power(p=1)",
                                              "power(p=2)",
                                              "bump(lo=-3,hi=3)",
                                              "half-gauss",
                                              "wave-packet(omega=4,lo=-4,hi=4)"};
  return names;
}

/// Oscillator-coefficient membership at index 2s against H^{2s} intersected with dom |X|^{2s}.
inline Agreement oscillator_domain_agreement(const std::vector<std::string>& names = oscillator_study_functions(),
                                             const std::vector<double>& s_values = {0.25, 0.5, 1.0, 1.5}) {
  Agreement a;
  for (const auto& name : names) {
    const TestFunction f = parse_function(name);
    const OscillatorState st = oscillator_coefficients(f);
    for (double s : s_values) {
      const std::string label = name + " s=" + nlohmann::json(s).dump();
      const Status spectral = oscillator_fractional_norm(st, 2 * s).status;
      Status side = Status::Indeterminate;
      try {
        side = sobolev_side_membership(f, s).status;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Capability) throw;
      }
      a.record(label, spectral, side);
    }
  }
  return a;
}

struct FormTrials {
  int trials = 0;
  int violations = 0;
  double min_slack_ratio = INFINITY;  // min (bound - lhs) / bound
};

inline FormTrials form_trials(std::uint64_t seed, int k, int trials) {
  SplitMix64 rng(seed);
  FormTrials r;
  r.trials = trials;
  for (int i = 0; i < trials; ++i) {
    FormReport rep = form_inequality_check(random_state(rng), k);
    if (!rep.holds) ++r.violations;
    r.min_slack_ratio = std::min(r.min_slack_ratio, rep.slack() / rep.bound);
  }
  return r;
}

// ---------------------------------------------------------------------------
// periodic

inline const std::vector<std::string>& periodic_study_functions() {
  static const std::vector<std::string> names{"const",
                                              "hat",
                                              "bump(lo=0,hi=6.283185307179586)",
                                              "sine",
                                              "sine(k=0.5)",
                                              "monomial",
                                              "fourier-mode(n=1,phi=1.5707963267948966)"};
  return names;
}

/// Spectral verdict under A_phi against the boundary-rule prediction.
inline Agreement periodic_matrix(const std::vector<double>& s_values = {0.3, 0.5, 0.75, 1.25, 1.75}) {
  Agreement a;
  for (const auto& name : periodic_study_functions()) {
    const TestFunction f = parse_function(name);
    for (double phi : {0.0, pi / 2, pi})
      for (double s : s_values) {
        const std::string label = name + " phi=" + nlohmann::json(phi).dump() + " s=" + nlohmann::json(s).dump();
        a.record(label, fractional_membership(f, phi, s).status, as_status(higher_order_membership(f, phi, s).prediction));
      }
  }
  return a;
}

// ---------------------------------------------------------------------------
// half-line

inline const std::vector<std::string>& halfline_bumps() {
  static const std::vector<std::string> names{"bump(lo=0.5,hi=1.5)", "bump(lo=0,hi=1)", "bump(lo=1,hi=4)",
                                              "wave-packet(omega=4,lo=0.5,hi=3)", "bump(lo=0.2,hi=0.6)"};
  return names;
}

struct HalflineConsistency {
  double worst_gamma_alpha = 0;  // max relative gap of gamma = 1/2 and alpha = pi norms
  double worst_parseval = 0;     // max relative | ||F f||^2 - ||f||^2 |
};

inline HalflineConsistency halfline_consistency(const std::vector<double>& s_values = {0.5, 1.0}) {
  HalflineConsistency r;
  for (const auto& name : halfline_bumps()) {
    const TestFunction f = parse_function(name);
    const HalflineTransform D(HalflineOperator(pi), f), B(BesselOperator(0.5), f);
    const double l2 = l2_norm(f).value;
    const double n0 = fractional_norm(D, 0).value;
    r.worst_parseval = std::max(r.worst_parseval, std::abs(n0 * n0 - l2 * l2) / (l2 * l2));
    for (double s : s_values) {
      const double a = fractional_norm(D, s).value, b = fractional_norm(B, s).value;
      r.worst_gamma_alpha = std::max(r.worst_gamma_alpha, std::abs(a - b) / a);
    }
  }
  return r;
}

inline std::vector<HalflineFamily> halfline_study_operators() {
  return {HalflineOperator(pi / 2), HalflineOperator(3 * pi / 4), HalflineOperator(pi),
          BesselOperator(0.5),      BesselOperator(1),            BesselOperator(2)};
}

/// Spectral verdicts of the half-line and Bessel operators against the
/// regularity-plus-boundary predicate.
inline Agreement halfline_matrix(const std::vector<std::string>& names = {"hat(a=0,b=2)", "box(a=0,b=1)",
                                                                          "bump(lo=0.5,hi=1.5)", "half-gauss"},
                                 const std::vector<double>& s_values = {0.3, 0.5, 0.75, 1.0}) {
  Agreement a;
  for (const auto& name : names) {
    const TestFunction f = parse_function(name);
    for (const auto& op : halfline_study_operators()) {
      const HalflineTransform T(op, f);
      for (double s : s_values) {
        const std::string label = name + " " + describe(op) + " s=" + nlohmann::json(s).dump();
        a.record(label, fractional_norm(T, s).status, as_status(boundary_predicate(op, f, s).prediction));
      }
    }
  }
  return a;
}

// ---------------------------------------------------------------------------
// interpolation

struct StressVector {
  std::string label;
  int k;
  double theta;
  CoefficientVector x;
  Status expected;
};

/// 30 vectors on lambda_n = n: threshold decays n^{-1/2 - k theta - eps}
/// with eps in {+-0.05, +-0.5}, an exponential decay and a finite support,
/// for five (k, theta).
inline std::vector<StressVector> stress_matrix(int atoms = 4096,
                                               std::vector<std::pair<int, double>> cases = {
                                                   {1, 0.25}, {1, 0.5}, {1, 0.75}, {2, 0.25}, {2, 0.4}}) {
  auto mu = std::make_shared<const SpectralMeasure>(
      SpectralMeasure::sequence([](int n) { return double(n); }, [](int) { return 1.0; }, atoms));
  std::vector<StressVector> out;
  for (auto [k, th] : cases) {
    const std::string tag = "k=" + std::to_string(k) + " theta=" + nlohmann::json(th).dump();
    for (double eps : {0.05, -0.05, 0.5, -0.5}) {
      std::vector<cplx> c;
      for (int n = 1; n <= atoms; ++n) c.push_back(std::pow(double(n), -0.5 - k * th - eps));
      out.push_back({tag + " eps=" + nlohmann::json(eps).dump(), k, th, CoefficientVector::on(mu, std::move(c)),
                     eps > 0 ? Status::Member : Status::NonMember});
    }
    std::vector<cplx> c;
    for (int n = 1; n <= atoms; ++n) c.push_back(std::exp(-n / 50.0));
    out.push_back({tag + " exp", k, th, CoefficientVector::on(mu, std::move(c)), Status::Member});
    std::vector<cplx> f(std::size_t(atoms), 0.0);
    for (int n = 0; n < 10; ++n) f[std::size_t(n)] = 1.0 / (n + 1);
    CoefficientVector fs = CoefficientVector::on(mu, std::move(f));
    fs.finitely_supported = true;
    out.push_back({tag + " finite", k, th, std::move(fs), Status::Member});
  }
  return out;
}

struct StressOutcome {
  int vectors = 0;
  int agree = 0;     // all three characterizations give the same determinate verdict
  int expected = 0;  // ... and it is the verdict the decay rate predicts
  std::vector<std::string> failures;
};

inline StressOutcome stress_agreement(const std::vector<StressVector>& vectors = stress_matrix()) {
  const DivergencePolicy pol{4, 12};
  StressOutcome r;
  for (const auto& v : vectors) {
    const InterpolationPair pair(v.x.measure, v.k, v.theta);
    const Status a = interpolation_integral(v.x, pair, pol).status;
    const Status b = semigroup_characterization(v.x, pair, pol).status;
    const Status c = resolvent_characterization(v.x, pair, pol).status;
    ++r.vectors;
    const bool same = a == b && b == c && a != Status::Indeterminate;
    if (same) ++r.agree;
    if (same && a == v.expected) ++r.expected;
    if (!same || a != v.expected)
      r.failures.push_back(v.label + ": " + to_string(a) + "/" + to_string(b) + "/" + to_string(c));
  }
  return r;
}

}  // namespace ldspec::studies
