#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "divergence.hpp"
#include "errors.hpp"
#include "numeric.hpp"
#include "quadrature.hpp"

namespace ldspec {

/// A norm value together with the convergence verdict it came from.
struct NormResult {
  Status status = Status::Indeterminate;
  double value = NAN;  // the norm (not squared) when finite; last partial value otherwise
  MembershipVerdict verdict;
  std::string method;

  bool finite() const { return status == Status::Member; }
};

inline NormResult finite_norm(double squared, std::string method) {
  NormResult r;
  r.status = Status::Member;
  r.value = std::sqrt(std::max(0.0, squared));
  r.verdict.status = Status::Member;
  r.verdict.norm_estimate = r.value;
  r.verdict.partial_sums = {{1.0, squared}};
  r.method = std::move(method);
  return r;
}

inline NormResult from_verdict(MembershipVerdict v, std::string method) {
  NormResult r;
  r.status = v.status;
  if (v.norm_estimate)
    r.value = *v.norm_estimate;
  else if (!v.partial_sums.empty())
    r.value = std::sqrt(std::max(0.0, v.partial_sums.back().s));
  r.verdict = std::move(v);
  r.method = std::move(method);
  return r;
}

struct Interval {
  double a;
  double b;
};

struct GagliardoConfig {
  double s = 0.5;
  int order = 16;
  bool diagonal_substitution = true;  // |f(y+u)-f(y)| ~ u|f'(y+u/2)| for tiny u on smooth panels
  double cutoff = 1e-5;               // relative to the function's feature scale
  int levels = 40;
  bool symmetric_pairing = true;      // integrate u > 0 and double, instead of both signs
};

namespace detail {

inline double panel_width(const TestFunction& f) { return std::max(1e-6, 0.5 * f.scale); }

/// Support of f intersected with [lo, hi], as finite integration limits.
inline std::pair<double, double> clip_to_support(const TestFunction& f, double lo, double hi) {
  return {std::max(lo, f.lo), std::min(hi, f.hi)};
}

/// int g over the function's support. Fast-decaying functions are integrated
/// over their bulk; otherwise over windows [-2^j, 2^j] whose partial values are
/// classified with the shared divergence policy.
template <class G>
MembershipVerdict windowed_line_integral(const TestFunction& f, G&& g, const DivergencePolicy& pol) {
  const double w = panel_width(f);
  if (f.decay != DecayKind::Polynomial && f.decay != DecayKind::None) {
    auto [lo, hi] = clip_to_support(f, f.bulk_lo, f.bulk_hi);
    double v = composite(g, lo, hi, f.breakpoints, w);
    MembershipVerdict mv;
    mv.status = Status::Member;
    mv.norm_estimate = std::sqrt(std::max(0.0, v));
    mv.partial_sums = {{hi - lo, v}};
    mv.diagnostic = "integrated over the decay window";
    return mv;
  }
  std::vector<PartialSum> trace;
  CompensatedSum acc;
  double prev = 0.0;
  for (double R : pol.windows()) {
    auto [lo, hi] = clip_to_support(f, -R, R);
    auto [plo, phi] = clip_to_support(f, -prev, prev);
    double width = std::max(w, R / 64.0);
    if (prev == 0.0)
      acc.add(composite(g, lo, hi, f.breakpoints, std::min(width, w * 4)));
    else {
      if (lo < plo) acc.add(composite(g, lo, plo, f.breakpoints, width));
      if (phi < hi) acc.add(composite(g, phi, hi, f.breakpoints, width));
    }
    trace.push_back({R, acc.value()});
    prev = R;
  }
  return classify(std::move(trace), pol);
}

}  // namespace detail

/// (int |x|^{2 sigma} |f|^2 dx)^{1/2}, or a divergence signal.
inline NormResult weighted_moment_norm(const TestFunction& f, double sigma, const DivergencePolicy& pol = {}) {
  require(sigma >= 0 && std::isfinite(sigma), ErrorKind::Usage, "weighted_moment_norm: sigma must be >= 0");
  auto g = [&](double x) {
    double a = std::abs(f(x));
    if (a == 0.0) return 0.0;
    return (sigma == 0.0 ? 1.0 : std::pow(std::abs(x), 2 * sigma)) * a * a;
  };
  return from_verdict(detail::windowed_line_integral(f, g, pol), "moment");
}

inline NormResult l2_norm(const TestFunction& f, const DivergencePolicy& pol = {}) {
  return weighted_moment_norm(f, 0.0, pol);
}

/// L^2 norm of f over a bounded interval.
inline double l2_norm_interval(const TestFunction& f, Interval I) {
  require(I.b > I.a, ErrorKind::Usage, "interval must have a < b");
  double v = composite([&](double x) { return std::norm(f(x)); }, I.a, I.b, f.breakpoints, detail::panel_width(f));
  return std::sqrt(v);
}

/// Unitary Fourier transform (kernel e^{-i xi x}/sqrt(2 pi)) by the Filon-type
/// integrator, for functions without a registered closed form.
class FourierTransform {
 public:
  explicit FourierTransform(const TestFunction& f) {
    if (f.fourier) {
      analytic_ = f.fourier;
      return;
    }
    double lo = f.bulk_lo, hi = f.bulk_hi;
    std::vector<double> breaks = f.breakpoints;
    double width = detail::panel_width(f);
    if (f.decay == DecayKind::Polynomial) {
      // geometric panels out to where |f| ~ 1e-10 (capped)
      double X = std::min(std::pow(1e10, 1.0 / f.decay_rate), std::ldexp(1.0, 30));
      for (double r = std::max(std::abs(lo), std::abs(hi)); r < X; r *= 2) {
        breaks.push_back(r);
        breaks.push_back(-r);
      }
      lo = std::max(f.lo, -X);
      hi = std::min(f.hi, X);
      breaks.push_back(X);
      breaks.push_back(-X);
      width = 1e300;
      // inner region keeps the fine width through explicit breakpoints
      for (double x = f.bulk_lo; x < f.bulk_hi; x += detail::panel_width(f)) breaks.push_back(x);
    } else {
      std::tie(lo, hi) = detail::clip_to_support(f, lo, hi);
    }
    // graded panels toward each breakpoint, where f may be flat but not analytic
    for (double p : f.breakpoints)
      for (int j = 1; j <= 12; ++j)
        for (double q : {p - std::ldexp(detail::panel_width(f), -j), p + std::ldexp(detail::panel_width(f), -j)})
          breaks.push_back(q);
    auto g = [f](double x) { return f(x); };
    filon_.emplace(g, lo, hi, breaks, width, 20);
    // rounding floor of the panel sums; below it the transform is noise
    const double l1 = composite([&](double x) { return std::abs(f(x)); }, lo, hi, breaks, std::min(width, 1e6));
    floor_ = 64 * std::numeric_limits<double>::epsilon() * l1 / std::sqrt(2 * pi);
  }

  cplx operator()(double xi) const {
    if (analytic_) return analytic_(xi);
    // int f e^{-i xi x} = filon at -xi
    cplx v = (*filon_)(-xi) / std::sqrt(2 * pi);
    return std::abs(v) < floor_ ? cplx(0.0) : v;
  }

  bool analytic() const { return static_cast<bool>(analytic_); }

 private:
  std::function<cplx(double)> analytic_;
  std::optional<OscillatoryIntegral> filon_;
  double floor_ = 0.0;
};

/// (int (1+xi^2)^s |f^(xi)|^2 dxi)^{1/2}, integrated over growing frequency
/// windows [-2^j, 2^j] with the shared divergence policy; stops early once the
/// partial values are classified as convergent.
inline NormResult hs_norm_fourier(const TestFunction& f, double s, DivergencePolicy pol = {4, 12}) {
  require(s >= 0 && std::isfinite(s), ErrorKind::Usage, "hs_norm_fourier: s must be >= 0");
  require(f.square_integrable(), ErrorKind::Capability,
          "norm not representable at truncation: '" + f.name + "' is not square integrable");
  if (!f.fourier && f.decay == DecayKind::Polynomial)
    require(2 * f.decay_rate > 2 * s + 1, ErrorKind::Capability,
            "norm not representable at truncation: polynomial decay of '" + f.name + "' too slow for s");
  FourierTransform F(f);
  const double L = std::max(1.0, f.bulk_hi - f.bulk_lo);
  const double width = std::min(1.0, pi / (2 * L)) * std::min(1.0, std::max(f.scale, 0.05) * 4);
  auto g = [&](double xi) {
    double a = std::abs(F(xi));
    return std::pow(1 + xi * xi, s) * a * a;
  };
  std::vector<PartialSum> trace;
  CompensatedSum acc;
  double prev = 0.0;
  MembershipVerdict v;
  const int earliest = pol.fit_points + 1;
  for (int e = pol.min_exp; e <= pol.max_exp; ++e) {
    double R = std::ldexp(1.0, e);
    if (prev == 0.0)
      acc.add(composite(g, -R, R, {0.0}, width));
    else {
      acc.add(composite(g, -R, -prev, {}, width));
      acc.add(composite(g, prev, R, {}, width));
    }
    prev = R;
    trace.push_back({R, acc.value()});
    if (int(trace.size()) >= earliest) {
      if (settled(trace)) break;
      // strong power growth is already decisive; wider windows only cost time
      v = classify(trace, pol);
      if (v.status == Status::NonMember && v.divergence_exponent.value_or(0) > 0.5) break;
    }
  }
  v = classify(trace, pol);
  return from_verdict(std::move(v), F.analytic() ? "fourier-analytic" : "fourier-filon");
}

/// 4 int_0^inf (1 - cos t) t^{-1-2s} dt: the factor between the Gagliardo
/// seminorm on the line and int |xi|^{2s} |f^|^2 for the unitary transform.
inline double fourier_gagliardo_constant(double s) {
  require(s > 0 && s < 1, ErrorKind::Usage, "fourier_gagliardo_constant: need 0 < s < 1");
  if (std::abs(s - 0.5) < 1e-12) return 2 * pi;
  return -4.0 * std::tgamma(-2 * s) * std::cos(pi * s);
}

namespace detail {

/// D(u) = int |f(y+u) - f(y)|^2 dy over y with y, y+u in [lo, hi] (u may be negative).
/// With `extend_by_zero`, f is a function on the line vanishing outside [lo, hi].
inline double difference_energy(const TestFunction& f, double lo, double hi, double u, const GagliardoConfig& cfg,
                                bool extend_by_zero) {
  double ylo = extend_by_zero ? std::min(lo, lo - u) : std::max(lo, lo - u);
  double yhi = extend_by_zero ? std::max(hi, hi - u) : std::min(hi, hi - u);
  if (!(yhi > ylo)) return 0.0;
  std::vector<double> breaks;
  for (double p : f.breakpoints) {
    breaks.push_back(p);
    breaks.push_back(p - u);
  }
  auto pts = segment_points(ylo, yhi, breaks);
  const double au = std::abs(u);
  const bool taylor = cfg.diagonal_substitution && au < cfg.cutoff * f.scale && f.derivative;
  const double width = panel_width(f);
  CompensatedSum acc;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i], b = pts[i + 1];
    // a segment between y = p - u and y = p straddles a breakpoint
    bool straddle = false;
    double m = 0.5 * (a + b);
    for (double p : f.breakpoints) straddle = straddle || (std::min(p, p - u) < m && m < std::max(p, p - u));
    if (taylor && !straddle) {
      acc.add(composite([&](double y) { return u * u * std::norm(f.deriv(1, y + 0.5 * u)); }, a, b, {}, width,
                        cfg.order));
    } else {
      acc.add(composite([&](double y) { return std::norm(f(y + u) - f(y)); }, a, b, {}, width, cfg.order));
    }
  }
  return acc.value();
}

}  // namespace detail

/// Gagliardo-Slobodeckij seminorm (double integral of |f(x)-f(y)|^2/|x-y|^{1+2s})
/// over domain^2, in the difference variable u = x - y with geometric levels
/// toward the diagonal. `domain` empty means the whole line.
inline NormResult gagliardo_seminorm(const TestFunction& f, std::optional<Interval> domain, const GagliardoConfig& cfg) {
  const double s = cfg.s;
  require(s > 0 && s < 1, ErrorKind::Usage,
          "gagliardo_seminorm: s must lie in (0,1); reduce with an integer derivative split");
  require(cfg.cutoff > 0, ErrorKind::Usage, "gagliardo_seminorm: cutoff must be positive");
  double lo, hi;
  if (domain) {
    require(domain->b > domain->a, ErrorKind::Usage, "interval must have a < b");
    lo = domain->a;
    hi = domain->b;
  } else {
    require(f.decay != DecayKind::Polynomial && f.decay != DecayKind::None, ErrorKind::Capability,
            "gagliardo_seminorm on the line needs compact, gaussian or exponential decay");
    std::tie(lo, hi) = detail::clip_to_support(f, f.bulk_lo, f.bulk_hi);
  }
  const double U = hi - lo;
  // u-kinks: pairwise differences of breakpoints and domain ends
  std::vector<double> marks = f.breakpoints;
  marks.push_back(lo);
  marks.push_back(hi);
  std::vector<double> ukinks;
  for (double p : marks)
    for (double q : marks)
      if (p - q > 0 && p - q < U) ukinks.push_back(p - q);

  const double width = detail::panel_width(f);
  std::vector<PartialSum> trace;
  CompensatedSum acc;
  for (int k = 0; k < cfg.levels; ++k) {
    double u1 = std::ldexp(U, -k), u0 = std::ldexp(U, -k - 1);
    auto level = [&](double sign) {
      return composite(
          [&](double u) { return detail::difference_energy(f, lo, hi, sign * u, cfg, !domain) * std::pow(u, -1 - 2 * s); }, u0,
          u1, ukinks, width, cfg.order);
    };
    double contrib = cfg.symmetric_pairing ? 2.0 * level(1.0) : level(1.0) + level(-1.0);
    acc.add(contrib);
    trace.push_back({std::ldexp(1.0, k + 1), acc.value()});
  }
  DivergencePolicy pol;
  pol.min_exp = 1;
  pol.max_exp = cfg.levels;
  MembershipVerdict v = classify(trace, pol);
  if (!domain && v.status == Status::Member) {
    // beyond u = U the shifted copies no longer overlap: D(u) = 2 ||f||^2
    double l2sq = composite([&](double x) { return std::norm(f(x)); }, lo, hi, f.breakpoints, width);
    double tail = 2.0 * 2.0 * l2sq * std::pow(U, -2 * s) / (2 * s);
    double total = std::pow(*v.norm_estimate, 2) + tail;
    v.norm_estimate = std::sqrt(total);
  }
  return from_verdict(std::move(v), "gagliardo");
}

/// (||f||^2 + ||f^(m)||^2 + [theta > 0] |f^(m)|_theta^2)^{1/2} on (a, b) with
/// s = m + theta.
inline NormResult hs_norm_interval(const TestFunction& f, Interval I, double s, const GagliardoConfig& base = {}) {
  require(s > 0 && std::isfinite(s), ErrorKind::Usage, "hs_norm_interval: s must be > 0");
  require(I.b > I.a, ErrorKind::Usage, "interval must have a < b");
  const int m = int(std::floor(s + 1e-12));
  const double theta = s - m;
  require(m == 0 || (f.derivative && m <= f.max_derivative), ErrorKind::Capability,
          "hs_norm_interval: '" + f.name + "' lacks derivatives of order " + std::to_string(m));
  if (m >= 1 && f.kink_inside(I.a, I.b, m - 1)) {
    NormResult r;
    r.status = r.verdict.status = Status::NonMember;
    r.value = INFINITY;
    r.verdict.divergence_exponent = INFINITY;
    r.verdict.diagnostic = "derivative of order " + std::to_string(m - 1) + " jumps inside the interval";
    r.method = "interval";
    return r;
  }
  double l2 = l2_norm_interval(f, I);
  TestFunction fm = derivative(f, m);
  double dm = m == 0 ? l2 : l2_norm_interval(fm, I);
  double total = l2 * l2 + dm * dm;
  if (theta > 1e-12) {
    GagliardoConfig cfg = base;
    cfg.s = theta;
    NormResult g = gagliardo_seminorm(fm, I, cfg);
    if (!g.finite()) {
      g.method = "interval";
      return g;
    }
    total += g.value * g.value;
  }
  return finite_norm(total, "interval");
}

}  // namespace ldspec
