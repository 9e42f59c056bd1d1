#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "divergence.hpp"
#include "errors.hpp"
#include "numeric.hpp"
#include "quadrature.hpp"
#include "sobolev.hpp"
#include "special.hpp"
#include "spectral_core.hpp"

namespace ldspec {

// ---------------------------------------------------------------------------
// Hermite polynomials

/// Physicists' Hermite polynomial H_m(x). Up to degree 300 the plain
/// three-term recurrence is used (exact on small integers) unless it
/// overflows; otherwise the orthonormal recurrence is run and rescaled at
/// the end, so the result is +-inf only when the true value is out of range.
inline double hermite_eval(int m, double x) {
  require(m >= 0, ErrorKind::Usage, "hermite_eval: degree must be >= 0");
  if (m <= 300) {
    double prev = 1.0, cur = 2 * x;
    if (m == 0) return prev;
    bool finite = true;
    for (int k = 1; k < m && finite; ++k) {
      double next = 2 * x * cur - 2 * k * prev;
      prev = cur;
      cur = next;
      finite = std::isfinite(cur);
    }
    if (finite) return cur;
  }
  // K_m(x) with a running log scale, then H_m = K_m (pi^{1/2} 2^m m!)^{1/2}
  double prev = 0.0, cur = 1.0, log_scale = -0.25 * std::log(pi);
  for (int k = 0; k < m; ++k) {
    double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(double(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e150) {
      cur *= 1e-150;
      prev *= 1e-150;
      log_scale += 150 * std::log(10.0);
    }
  }
  log_scale += 0.5 * (0.5 * std::log(pi) + m * std::log(2.0) + std::lgamma(m + 1.0));
  if (cur == 0.0) return 0.0;
  double mag = std::log(std::abs(cur)) + log_scale;
  return std::copysign(mag > 709.7 ? INFINITY : std::exp(mag), cur);
}

/// Orthonormal K_0..K_M at x (weight e^{-x^2}); polynomial values, no damping.
inline std::vector<double> hermite_polynomials_normalized(double x, int M) {
  std::vector<double> out(std::size_t(M) + 1);
  double prev = 0.0, cur = std::pow(pi, -0.25);
  out[0] = cur;
  for (int k = 0; k < M; ++k) {
    double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(double(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    out[std::size_t(k) + 1] = cur;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stirling numbers and the left-definite coefficients

/// Stirling numbers of the second kind S(l, j) for 0 <= l, j <= 12.
struct StirlingTable {
  static constexpr int max_index = 12;
  std::array<std::array<long long, max_index + 1>, max_index + 1> S{};

  StirlingTable() {
    S[0][0] = 1;
    for (int l = 0; l < max_index; ++l)
      for (int j = 1; j <= l + 1; ++j) S[l + 1][j] = j * S[l][j] + S[l][j - 1];
  }

  long long operator()(int l, int j) const {
    require(l >= 0 && l <= max_index && j >= 0 && j <= max_index, ErrorKind::Usage,
            "StirlingTable: indices must lie in [0, 12]");
    return S[l][j];
  }

  static const StirlingTable& instance() {
    static const StirlingTable t;
    return t;
  }
};

struct LeftDefiniteCoefficients {
  int n = 1;
  double c = 1.0;
  std::vector<double> cj;  // c_0 .. c_n
};

/// c_0 = c^n and c_j = sum_{m=0}^{n-1} C(n, m) c^m 2^{n-m-j} S(n-m, j) for j >= 1.
inline LeftDefiniteCoefficients stirling_coefficients(int n, double c) {
  require(n >= 1 && n <= 10, ErrorKind::Usage, "stirling_coefficients: n must lie in [1, 10]");
  require(c > 0 && std::isfinite(c), ErrorKind::Usage, "stirling_coefficients: c must be > 0");
  const auto& S = StirlingTable::instance();
  LeftDefiniteCoefficients r;
  r.n = n;
  r.c = c;
  r.cj.assign(std::size_t(n) + 1, 0.0);
  r.cj[0] = std::pow(c, n);
  for (int j = 1; j <= n; ++j) {
    double binom = 1.0, acc = 0.0;
    for (int m = 0; m <= n - 1; ++m) {
      acc += binom * std::pow(c, m) * std::ldexp(1.0, n - m - j) * double(S(n - m, j));
      binom = binom * (n - m) / (m + 1);
    }
    r.cj[std::size_t(j)] = acc;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Coefficient states

enum class OscillatorSide { Oscillator, Hermite };

inline const char* to_string(OscillatorSide s) { return s == OscillatorSide::Oscillator ? "oscillator" : "hermite"; }

/// Coefficients a_m against u_m (oscillator side, L^2(R)) or against K_m
/// (Hermite side, L^2(R; e^{-x^2} dx)). The map v -> e^{-x^2/2} v between the
/// two sides keeps the coefficients, so switching side only relabels.
struct OscillatorState {
  OscillatorSide side = OscillatorSide::Oscillator;
  std::vector<cplx> a;
  bool finite_combination = true;
  double l2_norm_sq = NAN;       // norm of the function on its own side, if known
  double parseval_defect = NAN;  // |sum |a_m|^2 - l2_norm_sq|

  static OscillatorState combination(std::vector<cplx> a, OscillatorSide side = OscillatorSide::Oscillator) {
    OscillatorState s;
    s.side = side;
    s.a = std::move(a);
    double n2 = 0;
    for (auto v : s.a) n2 += std::norm(v);
    s.l2_norm_sq = n2;
    s.parseval_defect = 0.0;
    return s;
  }

  /// Single eigenvector e_m.
  static OscillatorState basis(int m, OscillatorSide side = OscillatorSide::Oscillator) {
    require(m >= 0, ErrorKind::Usage, "basis index must be >= 0");
    std::vector<cplx> a(std::size_t(m) + 1, 0.0);
    a[std::size_t(m)] = 1.0;
    return combination(std::move(a), side);
  }

  int max_degree() const { return int(a.size()) - 1; }

  OscillatorState on_side(OscillatorSide s) const {
    OscillatorState r = *this;
    r.side = s;
    return r;
  }

  double coefficient_norm_sq() const {
    CompensatedSum acc;
    for (auto v : a) acc.add(std::norm(v));
    return acc.value();
  }

  /// Position-space value on the state's own side.
  cplx operator()(double x) const {
    if (a.empty()) return 0.0;
    std::vector<double> b = side == OscillatorSide::Oscillator ? hermite_functions(x, max_degree())
                                                               : hermite_polynomials_normalized(x, max_degree());
    cplx acc = 0;
    for (std::size_t m = 0; m < a.size(); ++m) acc += a[m] * b[m];
    return acc;
  }

  /// j-th derivative of a Hermite-side state, using K_m' = (2m)^{1/2} K_{m-1}.
  OscillatorState hermite_derivative(int j) const {
    require(side == OscillatorSide::Hermite, ErrorKind::Usage, "hermite_derivative: state must be on the Hermite side");
    OscillatorState d = *this;
    for (int k = 0; k < j; ++k) {
      std::vector<cplx> b(d.a.size(), 0.0);
      for (std::size_t m = 1; m < d.a.size(); ++m) b[m - 1] = std::sqrt(2.0 * double(m)) * d.a[m];
      d.a = std::move(b);
    }
    d.l2_norm_sq = d.coefficient_norm_sq();
    return d;
  }
};

/// Spectral data of A_H (or T_HO + (c - 1)): atoms 2m + c, unit weights.
inline std::shared_ptr<const SpectralMeasure> oscillator_measure(int M, double c = 1.0) {
  require(c > 0, ErrorKind::Usage, "oscillator_measure: c must be > 0");
  return std::make_shared<const SpectralMeasure>(
      SpectralMeasure::sequence([c](int n) { return 2.0 * (n - 1) + c; }, [](int) { return 1.0; }, M + 1));
}

inline CoefficientVector coefficient_vector(const OscillatorState& s, double c = 1.0) {
  CoefficientVector v = CoefficientVector::on(oscillator_measure(std::max(0, s.max_degree()), c), s.a);
  v.finitely_supported = s.finite_combination;
  return v;
}

// ---------------------------------------------------------------------------
// Transforms

/// Hermite-side coefficients c_m = (K_m, f) in L^2(R; e^{-x^2}) by
/// Gauss-Hermite quadrature with 2M + 32 nodes. Requires f smooth on R
/// (the rule's accuracy relies on it); piecewise functions are refused.
inline OscillatorState gauss_hermite_transform(const TestFunction& f, int M) {
  require(M >= 0 && M <= 2000, ErrorKind::Usage, "gauss_hermite_transform: M must lie in [0, 2000]");
  for (double p : f.breakpoints)
    require(f.smoothness >= kSmooth, ErrorKind::Capability,
            "gauss_hermite_transform: '" + f.name + "' is not smooth at " + std::to_string(p) +
                "; Gauss-Hermite quadrature cannot resolve it");
  require(f.support == SupportKind::WholeLine, ErrorKind::Capability,
          "gauss_hermite_transform: '" + f.name + "' is cut off; Gauss-Hermite quadrature needs a smooth function on R");
  const int n = 2 * M + 32;
  const HermiteRule& rule = gauss_hermite(n);
  std::vector<CompensatedComplexSum> acc(std::size_t(M) + 1);
  CompensatedSum norm;
  std::vector<double> u(std::size_t(M) + 1);
  for (int i = 0; i < n; ++i) {
    const double x = rule.nodes[std::size_t(i)];
    const cplx fx = f(x);
    hermite_functions(x, M, u.data());
    // w K_m = scaled e^{-x^2} e^{x^2/2} u_m = scaled e^{-x^2/2} u_m
    const double wd = rule.scaled[std::size_t(i)] * std::exp(-0.5 * x * x);
    for (int m = 0; m <= M; ++m) acc[std::size_t(m)].add(wd * u[std::size_t(m)] * fx);
    norm.add(rule.weights[std::size_t(i)] * std::norm(fx));
  }
  OscillatorState s;
  s.side = OscillatorSide::Hermite;
  s.finite_combination = false;
  for (auto& v : acc) s.a.push_back(v.value());
  s.l2_norm_sq = norm.value();
  s.parseval_defect = std::abs(s.coefficient_norm_sq() - s.l2_norm_sq);
  return s;
}

/// Oscillator-side coefficients a_m = (u_m, f) in L^2(R) for m <= M, by
/// composite Gauss-Legendre quadrature over the classically allowed region
/// (|x| <= (2M+1)^{1/2}) plus a margin, clipped to the support of f.
inline OscillatorState oscillator_coefficients(const TestFunction& f, int M = 4096) {
  require(M >= 0 && M <= 20000, ErrorKind::Usage, "oscillator_coefficients: M must lie in [0, 20000]");
  require(f.square_integrable(), ErrorKind::Capability,
          "oscillator_coefficients: '" + f.name + "' is not square integrable");
  const double turn = std::sqrt(2.0 * M + 1.0);
  double lo = std::max(f.lo, -turn - 12), hi = std::min(f.hi, turn + 12);
  if (f.decay == DecayKind::Gaussian || f.decay == DecayKind::Exponential || f.decay == DecayKind::Compact) {
    lo = std::max(lo, f.bulk_lo);
    hi = std::min(hi, f.bulk_hi);
  }
  const double h = std::min({0.5, 4.0 / turn, 2 * detail::panel_width(f)});
  NodeSet ns = composite_nodes(lo, hi, f.breakpoints, h);
  std::vector<CompensatedComplexSum> acc(std::size_t(M) + 1);
  std::vector<double> u(std::size_t(M) + 1);
  CompensatedSum norm;
  for (std::size_t i = 0; i < ns.x.size(); ++i) {
    const cplx fx = f(ns.x[i]) * ns.w[i];
    if (fx == 0.0) continue;
    hermite_functions(ns.x[i], M, u.data());
    for (int m = 0; m <= M; ++m) acc[std::size_t(m)].add(u[std::size_t(m)] * fx);
    norm.add(ns.w[i] * std::norm(f(ns.x[i])));
  }
  OscillatorState s;
  s.side = OscillatorSide::Oscillator;
  s.finite_combination = false;
  for (auto& v : acc) s.a.push_back(v.value());
  s.l2_norm_sq = norm.value();
  s.parseval_defect = std::abs(s.coefficient_norm_sq() - s.l2_norm_sq);
  return s;
}

// ---------------------------------------------------------------------------
// Norms and memberships

/// (sum_m (2m + c)^s |a_m|^2)^{1/2}; c = 1 gives the T_HO scale on the
/// oscillator side, and the same arithmetic serves A_H on the Hermite side.
inline NormResult oscillator_fractional_norm(const OscillatorState& st, double s, double c = 1.0,
                                             DivergencePolicy pol = {4, 12}) {
  require(s >= 0 && std::isfinite(s), ErrorKind::Usage, "oscillator_fractional_norm: s must be >= 0");
  return from_verdict(membership(coefficient_vector(st, c), s, pol), "oscillator");
}

inline NormResult oscillator_fractional_norm(const TestFunction& f, double s, int M = 4096) {
  return oscillator_fractional_norm(oscillator_coefficients(f, M), s);
}

/// Left-definite inner product of two Hermite-side states, computed as the
/// weighted derivative sum (Gauss-Hermite quadrature in position space) and
/// as the spectral sum over (2m + c)^n.
struct LeftDefiniteValue {
  cplx derivative_form;
  cplx spectral_form;
  double relative_gap() const {
    double scale = std::max({std::abs(derivative_form), std::abs(spectral_form), 1e-300});
    return std::abs(derivative_form - spectral_form) / scale;
  }
};

inline LeftDefiniteValue left_definite_inner_product(const OscillatorState& f, const OscillatorState& g, int n,
                                                     double c = 1.0) {
  require(f.finite_combination && g.finite_combination, ErrorKind::Capability,
          "left_definite_inner_product: needs finite Hermite combinations (analytic derivatives)");
  const OscillatorState F = f.on_side(OscillatorSide::Hermite), G = g.on_side(OscillatorSide::Hermite);
  const LeftDefiniteCoefficients cj = stirling_coefficients(n, c);
  const int deg = std::max(F.max_degree(), G.max_degree());
  const HermiteRule& rule = gauss_hermite(deg + 2);
  CompensatedComplexSum dsum;
  for (int j = 0; j <= n; ++j) {
    const OscillatorState Fj = F.hermite_derivative(j), Gj = G.hermite_derivative(j);
    CompensatedComplexSum q;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      q.add(rule.weights[i] * std::conj(Fj(rule.nodes[i])) * Gj(rule.nodes[i]));
    dsum.add(cj.cj[std::size_t(j)] * q.value());
  }
  CompensatedComplexSum ssum;
  const std::size_t common = std::min(F.a.size(), G.a.size());
  for (std::size_t m = 0; m < common; ++m) ssum.add(std::pow(2.0 * double(m) + c, n) * std::conj(F.a[m]) * G.a[m]);
  return {dsum.value(), ssum.value()};
}

struct SobolevSideResult {
  Status status = Status::Indeterminate;
  NormResult hs;      // H^{2s}(R)
  NormResult moment;  // int |x|^{4s} |f|^2
  std::string reason;
};

/// Membership in H^{2s}(R) intersected with the domain of |X|^{2s}.
/// A divergent moment decides NonMember before the Fourier side is tried.
inline SobolevSideResult sobolev_side_membership(const TestFunction& f, double s) {
  require(s > 0 && std::isfinite(s), ErrorKind::Usage, "sobolev_side_membership: s must be > 0");
  SobolevSideResult r;
  r.moment = weighted_moment_norm(f, 2 * s, DivergencePolicy{4, 30});
  if (r.moment.status == Status::NonMember) {
    r.status = Status::NonMember;
    r.reason = "moment of order 4s diverges";
    return r;
  }
  r.hs = hs_norm_fourier(f, 2 * s);
  if (r.hs.status == Status::NonMember) {
    r.status = Status::NonMember;
    r.reason = "H^{2s} norm diverges";
  } else if (r.hs.status == Status::Member && r.moment.status == Status::Member) {
    r.status = Status::Member;
    r.reason = "both norms finite";
  } else {
    r.reason = "inconclusive";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Ladder arithmetic on oscillator-side coefficient vectors

namespace detail {
/// a|m> = m^{1/2}|m-1>,  a+|m> = (m+1)^{1/2}|m+1>.
inline std::vector<cplx> apply_x(const std::vector<cplx>& v) {
  std::vector<cplx> r(v.size() + 1, 0.0);
  for (std::size_t m = 0; m < v.size(); ++m) {
    if (m > 0) r[m - 1] += std::sqrt(0.5 * double(m)) * v[m];
    r[m + 1] += std::sqrt(0.5 * double(m + 1)) * v[m];
  }
  return r;
}

/// P = -i d/dx = i (a+ - a) / 2^{1/2}.
inline std::vector<cplx> apply_p(const std::vector<cplx>& v) {
  const cplx I(0, 1);
  std::vector<cplx> r(v.size() + 1, 0.0);
  for (std::size_t m = 0; m < v.size(); ++m) {
    if (m > 0) r[m - 1] -= I * std::sqrt(0.5 * double(m)) * v[m];
    r[m + 1] += I * std::sqrt(0.5 * double(m + 1)) * v[m];
  }
  return r;
}

inline double norm_sq(const std::vector<cplx>& v) {
  CompensatedSum acc;
  for (auto z : v) acc.add(std::norm(z));
  return acc.value();
}
}  // namespace detail

/// <f, X^{2j} f> = ||X^j f||^2.
inline double x_power_form(const OscillatorState& f, int j) {
  std::vector<cplx> v = f.a;
  for (int k = 0; k < j; ++k) v = detail::apply_x(v);
  return detail::norm_sq(v);
}

inline double p_power_form(const OscillatorState& f, int j) {
  std::vector<cplx> v = f.a;
  for (int k = 0; k < j; ++k) v = detail::apply_p(v);
  return detail::norm_sq(v);
}

/// <f, (P^2 + X^2)^{j} f> with P^2 + X^2 = 2 a+ a + 1 diagonal.
inline double number_form(const OscillatorState& f, int j) {
  CompensatedSum acc;
  for (std::size_t m = 0; m < f.a.size(); ++m) acc.add(std::pow(2.0 * double(m) + 1, j) * std::norm(f.a[m]));
  return acc.value();
}

/// Constants (a_k, b_k) of P^{4k} + X^{4k} <= a_k (P^2 + X^2)^{2k} + b_k from
/// a_1 = 1, b_1 = 2 and the induction step a_{k+1} = 2(a_k + b_k),
/// b_{k+1} = 2 c_k, where c_k/2 = -min_t (t^{4k+4}/2 - (4k+2)(4k+1) t^{4k}).
inline std::pair<double, double> form_constants(int k) {
  require(k >= 1 && k <= 3, ErrorKind::Usage, "form_constants: k must lie in [1, 3]");
  double a = 1, b = 2;
  for (int j = 1; j < k; ++j) {
    const double A = (4.0 * j + 2) * (4.0 * j + 1);
    const double y = 2.0 * j * A / (j + 1);  // minimiser in t^4
    const double ck = 2 * A * std::pow(y, j) / (j + 1);
    const double an = 2 * (a + b);
    b = 2 * ck;
    a = an;
  }
  return {a, b};
}

struct FormReport {
  int k = 1;
  double lhs = 0;     // <f, (P^{4k} + X^{4k}) f>
  double number = 0;  // <f, (P^2 + X^2)^{2k} f>
  double norm_sq = 0;
  double a_k = 0, b_k = 0;
  double bound = 0;  // a_k number + b_k norm_sq
  bool holds = false;
  double slack() const { return bound - lhs; }
};

inline FormReport form_inequality_check(const OscillatorState& f, int k) {
  require(k >= 1 && k <= 3, ErrorKind::Usage, "form_inequality_check: k > 3 is rejected (coefficient growth)");
  require(f.finite_combination, ErrorKind::Capability, "form_inequality_check: needs a finite Hermite combination");
  FormReport r;
  r.k = k;
  r.lhs = p_power_form(f, 2 * k) + x_power_form(f, 2 * k);
  r.number = number_form(f, 2 * k);
  r.norm_sq = f.coefficient_norm_sq();
  std::tie(r.a_k, r.b_k) = form_constants(k);
  r.bound = r.a_k * r.number + r.b_k * r.norm_sq;
  r.holds = r.lhs <= r.bound * (1 + 1e-12);
  return r;
}

/// Random finite combination: `terms` distinct degrees below max_degree with
/// standard normal real and imaginary parts.
inline OscillatorState random_state(SplitMix64& rng, int terms = 10, int max_degree = 40) {
  require(terms >= 1 && terms <= max_degree + 1, ErrorKind::Usage, "random_state: need 1 <= terms <= max_degree + 1");
  std::vector<cplx> a(std::size_t(max_degree) + 1, 0.0);
  int placed = 0;
  while (placed < terms) {
    std::size_t m = std::size_t(rng.next() % std::uint64_t(max_degree + 1));
    if (a[m] != 0.0) continue;
    a[m] = cplx(rng.normal(), rng.normal());
    ++placed;
  }
  return OscillatorState::combination(std::move(a));
}

// ---------------------------------------------------------------------------
// Mehler kernel

enum class MehlerSide { Oscillator, Hermite };

/// log sinh(u) for u > 0 without overflow or cancellation.
inline double log_sinh(double u) { return u + std::log(-std::expm1(-2 * u)) - std::log(2.0); }

/// Kernel of e^{-t T_HO} (w.r.t. dy), or of e^{-t A_H} w.r.t. e^{-y^2} dy on the
/// Hermite side. Evaluated in log space.
inline double mehler_kernel(double t, double x, double y, MehlerSide side = MehlerSide::Oscillator, double c = 1.0) {
  require(t > 0 && std::isfinite(t), ErrorKind::Usage, "mehler_kernel: t must be > 0");
  require(c > 0, ErrorKind::Usage, "mehler_kernel: c must be > 0");
  const double u = 2 * t;
  const double ls = log_sinh(u);
  const double inv_sinh = 2 * std::exp(-u) / (-std::expm1(-2 * u));
  double expo;
  if (side == MehlerSide::Oscillator) {
    const double coth = 1 / std::tanh(u);
    expo = -0.5 * coth * (x * x + y * y) + inv_sinh * x * y;
  } else {
    expo = 0.5 * inv_sinh * (-std::exp(-u) * (x * x + y * y) + 2 * x * y) - t * (c - 1);
  }
  return std::exp(-0.5 * (std::log(2 * pi) + ls) + expo);
}

}  // namespace ldspec
