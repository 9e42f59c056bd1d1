#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "divergence.hpp"
#include "errors.hpp"
#include "hermite.hpp"
#include "legendre.hpp"
#include "numeric.hpp"
#include "spectral_core.hpp"

namespace ldspec {

/// The couple (H, dom(A^power)) of a diagonal model, with interpolation
/// parameter theta. `power` is the integer k of the characterizations, or a
/// real beta for the general identity check.
struct InterpolationPair {
  std::shared_ptr<const SpectralMeasure> measure;
  double power = 1;
  double theta = 0.5;

  InterpolationPair(std::shared_ptr<const SpectralMeasure> mu, int k, double th)
      : InterpolationPair(std::move(mu), double(k), th, true) {
    require(k >= 1, ErrorKind::Usage, "interpolation pair: k must be >= 1");
  }

  static InterpolationPair with_power(std::shared_ptr<const SpectralMeasure> mu, double beta, double th) {
    require(beta > 0 && std::isfinite(beta), ErrorKind::Usage, "interpolation pair: beta must be > 0");
    return InterpolationPair(std::move(mu), beta, th, true);
  }

  int k() const { return int(std::lround(power)); }
  bool integer_power() const { return std::abs(power - std::round(power)) < 1e-12; }

 private:
  InterpolationPair(std::shared_ptr<const SpectralMeasure> mu, double p, double th, bool)
      : measure(std::move(mu)), power(p), theta(th) {
    require(measure != nullptr, ErrorKind::Usage, "interpolation pair: missing measure");
    require(th > 0 && th < 1, ErrorKind::Usage, "interpolation pair: theta must lie in (0, 1)");
    require(measure->left_definite(), ErrorKind::Normalization,
            "interpolation pair: measure must be supported in [1, inf)");
  }
};

/// Contribution of one dyadic panel [t0, 2 t0] of the t-integral.
struct PanelContribution {
  double t0;
  double value;
};

/// Value and finiteness verdict of one characterization.
struct SemigroupIntegralResult {
  Status status = Status::Indeterminate;
  double value = NAN;  // the integral over the truncated vector
  MembershipVerdict verdict;
  std::vector<PanelContribution> panels;
  bool finite() const { return status == Status::Member; }
};

namespace detail {

inline constexpr int t_lo_exp = -40;
inline constexpr int t_hi_exp = 40;

/// Per-point integrals  int_0^inf kernel(t, lambda_i) dt  over dyadic panels
/// of [2^-40, 2^40] (Gauss-Legendre 16) plus the two analytic end pieces.
/// kernel(t, lambda) -> value; ends(lambda) -> {below, above}.
template <class Kernel, class Ends>
SemigroupIntegralResult per_point_integral(const CoefficientVector& f, Kernel&& kernel, Ends&& ends,
                                           const DivergencePolicy& pol, int lo_exp = t_lo_exp) {
  check_coefficients(f);
  const std::size_t n = f.size();
  std::vector<double> mass(n);
  for (std::size_t i = 0; i < n; ++i) mass[i] = std::norm(f.coeffs[i]) * f.weight[i];
  std::vector<CompensatedSum> per(n);
  SemigroupIntegralResult r;
  const GaussRule& g = gauss_legendre(16);
  for (int e = lo_exp; e < t_hi_exp; ++e) {
    const double a = std::ldexp(1.0, e), b = 2 * a, c = 0.5 * (a + b), h = 0.5 * (b - a);
    CompensatedSum panel;
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double t = c + h * g.nodes[q], w = h * g.weights[q];
      for (std::size_t i = 0; i < n; ++i) {
        if (mass[i] == 0.0) continue;
        const double v = w * kernel(t, f.lambda[i]) * mass[i];
        per[i].add(v);
        panel.add(v);
      }
    }
    r.panels.push_back({a, panel.value()});
  }
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (mass[i] == 0.0) continue;
    auto [below, above] = ends(f.lambda[i]);
    per[i].add((below + above) * mass[i]);
    vals[i] = per[i].value();
  }
  CompensatedSum total;
  for (double v : vals) total.add(v);
  r.value = total.value();

  if (f.finitely_supported) {
    r.status = Status::Member;
    r.verdict.status = Status::Member;
    r.verdict.norm_estimate = std::sqrt(r.value);
    r.verdict.diagnostic = "finitely supported";
    return r;
  }
  // partial sums over the same windows the spectral-core membership uses
  const bool continuous = f.measure && f.measure->kind() == SpectralMeasure::Kind::Continuous;
  std::vector<PartialSum> trace;
  CompensatedSum acc;
  std::size_t i = 0;
  for (double w : pol.windows()) {
    if (!continuous && w > double(n)) break;
    if (continuous && w * w > f.lambda.back() * (1 + 1e-12)) break;
    while (i < n && (continuous ? f.lambda[i] <= w * w : double(i) < w)) acc.add(vals[i++]);
    trace.push_back({w, acc.value()});
  }
  r.verdict = classify(std::move(trace), pol);
  r.status = r.verdict.status;
  return r;
}

/// Lower panel exponent: 2^-40, or lower still so that t * scale stays below
/// 1e-4 at the first panel, where the end pieces use leading-order expansions.
inline int lower_exp(const CoefficientVector& f, double power) {
  double mx = 1.0;
  for (double l : f.lambda) mx = std::max(mx, std::pow(l, power));
  return std::min(t_lo_exp, int(std::floor(std::log2(1e-4 / mx))));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// K-functional

/// K(t, x) = inf_{x = a + b} ||a||^2 + t ||A^power b||^2, which decouples per
/// atom into |c|^2 w t lambda^{2 power} / (1 + t lambda^{2 power}). Returns the
/// square root.
inline double k_functional(const CoefficientVector& x, const InterpolationPair& pair, double t) {
  require(t > 0 && std::isfinite(t), ErrorKind::Usage, "k_functional: t must be > 0");
  detail::check_coefficients(x);
  CompensatedSum acc;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double m = std::norm(x.coeffs[i]) * x.weight[i];
    if (m == 0.0) continue;
    const double v = t * std::pow(x.lambda[i], 2 * pair.power);
    acc.add(m * (std::isinf(v) ? 1.0 : v / (1 + v)));
  }
  return std::sqrt(acc.value());
}

/// int_0^inf t^{-1-theta} K(t, x)^2 dt. Per atom this equals
/// lambda^{2 power theta} pi / sin(pi theta).
inline SemigroupIntegralResult interpolation_integral(const CoefficientVector& x, const InterpolationPair& pair,
                                                      const DivergencePolicy& pol = {}) {
  const double th = pair.theta, p2 = 2 * pair.power;
  const int lo = detail::lower_exp(x, p2);
  const double T0 = std::ldexp(1.0, lo), T1 = std::ldexp(1.0, detail::t_hi_exp);
  auto kernel = [&](double t, double lam) {
    const double v = t * std::pow(lam, p2);
    return std::pow(t, -1 - th) * v / (1 + v);
  };
  auto ends = [&](double lam) {
    const double L = std::pow(lam, p2);
    // below: integrand ~ t^{-theta} L / (1 + t L); above: t^{-1-theta} (1 - 1/(tL))
    const double below = L * std::pow(T0, 1 - th) / (1 - th) - L * L * std::pow(T0, 2 - th) / (2 - th);
    const double above = std::pow(T1, -th) / th - std::pow(T1, -1 - th) / ((1 + th) * L);
    return std::pair{below, above};
  };
  return detail::per_point_integral(x, kernel, ends, pol, lo);
}

/// Interpolation norm: the square root of interpolation_integral.
inline double interpolation_norm(const CoefficientVector& x, const InterpolationPair& pair) {
  return std::sqrt(interpolation_integral(x, pair).value);
}

/// pi / sin(pi theta): the per-atom factor of interpolation_integral.
inline double interpolation_constant(double theta) {
  require(theta > 0 && theta < 1, ErrorKind::Usage, "interpolation_constant: theta must lie in (0, 1)");
  return pi / std::sin(pi * theta);
}

// ---------------------------------------------------------------------------
// Semigroup and resolvent characterizations

/// C_{k,theta} = int_0^inf u^{-1-2k theta} (1 - e^{-u})^{2k} du by quadrature.
inline double semigroup_constant(int k, double theta) {
  require(k >= 1 && theta > 0 && theta < 1, ErrorKind::Usage, "semigroup_constant: need k >= 1, 0 < theta < 1");
  const double a = 2 * k * theta;
  auto g = [&](double u) { return std::pow(u, -1 - a) * std::pow(-std::expm1(-u), 2 * k); };
  CompensatedSum acc;
  for (int e = detail::t_lo_exp; e < detail::t_hi_exp; ++e) acc.add(gl_panel(g, std::ldexp(1.0, e), std::ldexp(1.0, e + 1)));
  const double T0 = std::ldexp(1.0, detail::t_lo_exp), T1 = std::ldexp(1.0, detail::t_hi_exp);
  acc.add(std::pow(T0, 2 * k - a) / (2 * k - a));
  acc.add(std::pow(T1, -a) / a);
  return acc.value();
}

/// int_0^inf t^{-1-2k theta} ||(e^{-tA} - I)^k x||^2 dt.
inline SemigroupIntegralResult semigroup_characterization(const CoefficientVector& x, const InterpolationPair& pair,
                                                          const DivergencePolicy& pol = {}) {
  require(pair.integer_power(), ErrorKind::Usage, "semigroup_characterization: needs an integer k");
  const int k = pair.k();
  const double a = 2 * k * pair.theta;
  const int lo = detail::lower_exp(x, 1.0);
  const double T0 = std::ldexp(1.0, lo), T1 = std::ldexp(1.0, detail::t_hi_exp);
  auto kernel = [&](double t, double lam) { return std::pow(t, -1 - a) * std::pow(-std::expm1(-t * lam), 2 * k); };
  auto ends = [&](double lam) {
    const double below = std::pow(lam, 2 * k) * std::pow(T0, 2 * k - a) / (2 * k - a);
    const double above = std::pow(T1, -a) / a;
    return std::pair{below, above};
  };
  return detail::per_point_integral(x, kernel, ends, pol, lo);
}

/// B(2k theta, 2k - 2k theta) in closed form.
inline double resolvent_constant(int k, double theta) {
  require(k >= 1 && theta > 0 && theta < 1, ErrorKind::Usage, "resolvent_constant: need k >= 1, 0 < theta < 1");
  const double p = 2 * k * theta, q = 2 * k - p;
  return std::exp(std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q));
}

/// int_0^inf lambda^{-1+2k theta} ||[A (A + lambda)^{-1}]^k x||^2 d lambda.
inline SemigroupIntegralResult resolvent_characterization(const CoefficientVector& x, const InterpolationPair& pair,
                                                          const DivergencePolicy& pol = {}) {
  require(pair.integer_power(), ErrorKind::Usage, "resolvent_characterization: needs an integer k");
  const int k = pair.k();
  const double a = 2 * k * pair.theta;
  const double T0 = std::ldexp(1.0, detail::t_lo_exp), T1 = std::ldexp(1.0, detail::t_hi_exp);
  auto kernel = [&](double l, double mu) { return std::pow(l, -1 + a) * std::pow(mu / (mu + l), 2 * k); };
  auto ends = [&](double mu) {
    const double below = std::pow(T0, a) / a;
    const double above = std::pow(mu, 2 * k) * std::pow(T1, a - 2 * k) / (2 * k - a);
    return std::pair{below, above};
  };
  return detail::per_point_integral(x, kernel, ends, pol);
}

// ---------------------------------------------------------------------------
// Interpolation identity

struct ConsistencyReport {
  Status interpolation = Status::Indeterminate;
  Status direct = Status::Indeterminate;  // membership at index 2 theta beta
  bool agree = false;
  double ratio = NAN;     // interpolation integral / sum lambda^{2 theta beta} |c|^2 w
  double constant = NAN;  // pi / sin(pi theta), the one-atom ratio
};

inline ConsistencyReport spectral_identity_consistency(const CoefficientVector& x, double beta, double theta,
                                                const DivergencePolicy& pol = {}) {
  require(x.measure != nullptr, ErrorKind::Usage, "spectral_identity_consistency: vector has no measure");
  const InterpolationPair pair = InterpolationPair::with_power(x.measure, beta, theta);
  ConsistencyReport r;
  const SemigroupIntegralResult I = interpolation_integral(x, pair, pol);
  const MembershipVerdict direct = membership(x, 2 * theta * beta, pol);
  r.interpolation = I.status;
  r.direct = direct.status;
  r.agree = r.interpolation == r.direct;
  CompensatedSum acc;
  for (std::size_t i = 0; i < x.size(); ++i) acc.add(detail::term(x, i, 2 * theta * beta));
  r.ratio = I.value / acc.value();
  r.constant = interpolation_constant(theta);
  return r;
}

// ---------------------------------------------------------------------------
// Position-space check on the oscillator

struct MehlerCrossCheck {
  double position = 0;     // kernel applied by quadrature
  double coefficient = 0;  // same integral from the coefficients
  double relative_gap() const { return std::abs(position - coefficient) / std::abs(coefficient); }
};

/// int_{t_lo}^{t_hi} t^{-1-2 theta} ||(e^{-t T_HO} - I) f||^2 dt for a finite
/// combination f, once with the Mehler kernel applied by Gauss-Legendre
/// quadrature in position space and once from the coefficients. Both use the
/// same t-nodes (dyadic panels, order 8), so the gap isolates the kernel.
inline MehlerCrossCheck mehler_semigroup_crosscheck(const OscillatorState& f, double theta, double t_lo = 1.0 / 64,
                                                    double t_hi = 64) {
  require(f.finite_combination && f.side == OscillatorSide::Oscillator, ErrorKind::Usage,
          "mehler_semigroup_crosscheck: needs a finite oscillator-side combination");
  require(theta > 0 && theta < 1 && t_lo > 0 && t_hi > t_lo, ErrorKind::Usage,
          "mehler_semigroup_crosscheck: need 0 < theta < 1 and 0 < t_lo < t_hi");
  const double L = std::sqrt(2.0 * f.max_degree() + 1) + 9;
  const NodeSet xs = composite_nodes(-L, L, {}, 1.0);
  std::vector<cplx> fx;
  for (double x : xs.x) fx.push_back(f(x));
  const GaussRule& tg = gauss_legendre(8);
  MehlerCrossCheck r;
  CompensatedSum pos, coef;
  for (double a = t_lo; a < t_hi * (1 - 1e-12); a *= 2) {
    const double b = std::min(2 * a, t_hi), c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (std::size_t q = 0; q < tg.nodes.size(); ++q) {
      const double t = c + h * tg.nodes[q], w = h * tg.weights[q] * std::pow(t, -1 - 2 * theta);
      // kernel centre y = x / cosh 2t, width tanh(2t)^{1/2}
      const double sig = std::sqrt(std::tanh(2 * t));
      CompensatedSum nrm;
      for (std::size_t i = 0; i < xs.x.size(); ++i) {
        const double x = xs.x[i], y0 = x / std::cosh(2 * t);
        const cplx applied = composite([&](double y) { return mehler_kernel(t, x, y) * f(y); }, y0 - 10 * sig,
                                       y0 + 10 * sig, {}, 2 * sig);
        nrm.add(xs.w[i] * std::norm(applied - fx[i]));
      }
      pos.add(w * nrm.value());
      CompensatedSum cs;
      for (std::size_t m = 0; m < f.a.size(); ++m)
        cs.add(std::norm(f.a[m]) * std::pow(-std::expm1(-t * (2.0 * double(m) + 1)), 2));
      coef.add(w * cs.value());
    }
  }
  r.position = pos.value();
  r.coefficient = coef.value();
  return r;
}

}  // namespace ldspec
