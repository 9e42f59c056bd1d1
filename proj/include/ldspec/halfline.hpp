#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "catalog.hpp"
#include "divergence.hpp"
#include "errors.hpp"
#include "periodic.hpp"
#include "quadrature.hpp"
#include "sobolev.hpp"
#include "special.hpp"

namespace ldspec {

/// -d^2/dx^2 on (0, inf) with sin(alpha) g'(0) + cos(alpha) g(0) = 0, alpha in [pi/2, pi].
struct HalflineOperator {
  double alpha;
  explicit HalflineOperator(double a) : alpha(a) {
    require(a >= pi / 2 - 1e-15 && a <= pi + 1e-15, ErrorKind::Usage,
            "half-line operator: alpha must lie in [pi/2, pi] (nonnegative realizations only)");
  }
  bool dirichlet() const { return std::abs(alpha - pi) < 1e-12; }
};

/// -d^2/dx^2 + (gamma^2 - 1/4)/x^2 on (0, inf), 0 < gamma <= 10.
struct BesselOperator {
  double gamma;
  explicit BesselOperator(double g) : gamma(g) {
    require(g > 0 && g <= 10, ErrorKind::Usage, "Bessel operator: gamma must lie in (0, 10]");
  }
};

using HalflineFamily = std::variant<HalflineOperator, BesselOperator>;

inline std::string describe(const HalflineFamily& op) {
  if (auto h = std::get_if<HalflineOperator>(&op)) return "halfline(alpha=" + std::to_string(h->alpha) + ")";
  return "bessel(gamma=" + std::to_string(std::get<BesselOperator>(op).gamma) + ")";
}

/// -sin(alpha) cos(k x) + cos(alpha) sin(k x)/k with k = lambda^{1/2}.
inline double phi_alpha(double alpha, double lambda, double x) {
  require(lambda >= 0, ErrorKind::Usage, "phi_alpha: lambda must be >= 0");
  const double k = std::sqrt(lambda);
  double sinc_term;  // sin(k x)/k
  if (k * x < 1e-4) {
    double z2 = lambda * x * x;
    sinc_term = x * (1 - z2 / 6 * (1 - z2 / 20));
  } else {
    sinc_term = std::sin(k * x) / k;
  }
  return -std::sin(alpha) * std::cos(k * x) + std::cos(alpha) * sinc_term;
}

/// Spectral function of B_alpha (vanishing at 0).
inline double rho_alpha(double alpha, double lambda) {
  if (lambda <= 0) return 0.0;
  const double r = std::sqrt(lambda);
  const double s = std::sin(alpha), c = std::cos(alpha);
  if (std::abs(c) < 1e-15) return 2 / pi * r;
  const double u2 = lambda * s * s / (c * c);  // (lambda^{1/2} / cot alpha)^2
  if (u2 < 0.25) {
    // expansion of r - cot(a) arctan(r / cot(a)) divided by sin^2
    double term = lambda * r / (c * c);  // k = 1 term: lambda^{3/2} / cos^2
    double sum = 0.0;
    for (int k = 1; k < 80; ++k) {
      sum += term / (2.0 * k + 1.0);
      term *= -u2;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return 2 / pi * sum;
  }
  const double cot = c / s;
  return 2 / pi / (s * s) * (r - cot * std::atan(r / cot));
}

/// d rho_alpha / d lambda = (1/pi) lambda^{1/2} / (cos^2 alpha + lambda sin^2 alpha).
inline double density_alpha(double alpha, double lambda) {
  if (lambda <= 0) return 0.0;
  const double s = std::sin(alpha), c = std::cos(alpha);
  return std::sqrt(lambda) / (pi * (c * c + lambda * s * s));
}

/// (pi/2)^{1/2} lambda^{-gamma/2} x^{1/2} J_gamma(lambda^{1/2} x).
inline double phi_gamma(double gamma, double lambda, double x) {
  require(lambda >= 0 && x >= 0, ErrorKind::Usage, "phi_gamma: need lambda >= 0, x >= 0");
  const double k = std::sqrt(lambda);
  return std::sqrt(pi / 2) * std::pow(x, gamma + 0.5) * bessel_j_scaled(gamma, k * x);
}

inline double rho_gamma(double gamma, double lambda) {
  return lambda <= 0 ? 0.0 : std::pow(lambda, gamma + 1) / (pi * (gamma + 1));
}

inline double density_gamma(double gamma, double lambda) { return lambda <= 0 ? 0.0 : std::pow(lambda, gamma) / pi; }

inline double spectral_density(const HalflineFamily& op, double lambda) {
  if (auto h = std::get_if<HalflineOperator>(&op)) return density_alpha(h->alpha, lambda);
  return density_gamma(std::get<BesselOperator>(op).gamma, lambda);
}

inline double eigenfunction(const HalflineFamily& op, double lambda, double x) {
  if (auto h = std::get_if<HalflineOperator>(&op)) return phi_alpha(h->alpha, lambda, x);
  return phi_gamma(std::get<BesselOperator>(op).gamma, lambda, x);
}

/// Density of the spectral measure in k = lambda^{1/2}: rho'(k^2) 2k.
inline double k_density(const HalflineFamily& op, double k) {
  if (auto h = std::get_if<HalflineOperator>(&op)) {
    const double s = std::sin(h->alpha), c = std::cos(h->alpha);
    return 2 / pi * k * k / (c * c + k * k * s * s);
  }
  const double g = std::get<BesselOperator>(op).gamma;
  return 2 / pi * std::pow(k, 2 * g + 1);
}

/// Spectral mass |F f(k)|^2 rho'(k) on the quadrature nodes of one k-window.
struct KWindow {
  std::vector<double> k, w, mass;
};

/// Eigenfunction transform of f restricted to (0, inf): int_0^inf phi(lambda, x) f(x) dx.
/// The alpha family uses the Filon-type integrator (one setup, any frequency).
/// The Bessel family sums over a fixed x-grid per dyadic k-window, fine enough
/// for the largest k of that window; grids and k-window masses are cached so
/// that several s-values reuse the same transform samples.
class HalflineTransform {
 public:
  HalflineTransform(HalflineFamily op, const TestFunction& f)
      : op_(std::move(op)), f_(f), cache_(std::make_shared<Cache>()) {
    require(f.decay != DecayKind::Polynomial && f.decay != DecayKind::None, ErrorKind::Capability,
            "half-line transform of '" + f.name + "': needs compact, gaussian or exponential decay");
    lo_ = std::max(0.0, f.lo);
    hi_ = std::min(f.hi, f.bulk_hi);
    require(hi_ > lo_, ErrorKind::Domain, "function '" + f.name + "' vanishes on (0, inf)");
    for (double p : f.breakpoints)
      if (p > lo_ && p < hi_) breaks_.push_back(p);
    if (std::holds_alternative<HalflineOperator>(op_)) {
      auto g = [f](double x) { return f(x); };
      auto gx = [f](double x) { return x * f(x); };
      filon_.emplace(g, lo_, hi_, breaks_, detail::panel_width(f), 20);
      moment_ = composite(gx, lo_, hi_, breaks_, detail::panel_width(f));
    }
  }

  /// Transform at lambda = k^2.
  cplx at_k(double k) const {
    if (auto h = std::get_if<HalflineOperator>(&op_)) {
      const double s = std::sin(h->alpha), c = std::cos(h->alpha);
      cplx ip = (*filon_)(k), im = (*filon_)(-k);
      cplx C = 0.5 * (ip + im);
      cplx S_over_k = k < 1e-6 ? moment_ : (ip - im) / cplx(0, 2 * k);
      return -s * C + c * S_over_k;
    }
    const double g = std::get<BesselOperator>(op_).gamma;
    const XGrid& grid = x_grid(k <= 1 ? 0 : int(std::ceil(std::log2(k))));
    cplx acc = 0;
    for (std::size_t i = 0; i < grid.x.size(); ++i) acc += grid.c[i] * bessel_j_scaled(g, k * grid.x[i]);
    return acc;
  }

  cplx operator()(double lambda) const { return at_k(std::sqrt(std::max(0.0, lambda))); }

  /// Nodes of the k-window (2^{e-1}, 2^e], or [0, 2^e] when e == first.
  const KWindow& window(int e, int first) const {
    auto key = std::make_pair(e, first);
    auto it = cache_->windows.find(key);
    if (it != cache_->windows.end()) return it->second;
    const double a = e == first ? 0.0 : std::ldexp(1.0, e - 1), b = std::ldexp(1.0, e);
    NodeSet ns = composite_nodes(a, b, {}, k_width());
    KWindow w;
    w.k = ns.x;
    w.w = ns.w;
    for (double k : ns.x) w.mass.push_back(std::norm(at_k(k)) * k_density(op_, k));
    return cache_->windows.emplace(key, std::move(w)).first->second;
  }

  const HalflineFamily& op() const { return op_; }
  const TestFunction& function() const { return f_; }
  /// Furthest point where f has structure; sets the oscillation period in k.
  double reach() const { return std::min(hi_, lo_ + 6 * f_.scale + (f_.decay == DecayKind::Compact ? hi_ : 0.0)); }
  double k_width() const { return std::min(1.0, 2 * pi / std::max(reach(), 1e-3)); }

 private:
  struct XGrid {
    std::vector<double> x;
    std::vector<cplx> c;
  };
  struct Cache {
    std::map<std::pair<int, int>, KWindow> windows;
    std::map<int, XGrid> grids;
  };

  const XGrid& x_grid(int e) const {
    auto it = cache_->grids.find(e);
    if (it != cache_->grids.end()) return it->second;
    const double g = std::get<BesselOperator>(op_).gamma;
    const double width = std::min(0.5 * detail::panel_width(f_), pi / std::ldexp(1.0, e));
    NodeSet ns = composite_nodes(lo_, hi_, breaks_, width);
    XGrid grid;
    grid.x = ns.x;
    for (std::size_t i = 0; i < ns.x.size(); ++i)
      grid.c.push_back(ns.w[i] * std::sqrt(pi / 2) * std::pow(ns.x[i], g + 0.5) * f_(ns.x[i]));
    return cache_->grids.emplace(e, std::move(grid)).first->second;
  }

  HalflineFamily op_;
  TestFunction f_;
  double lo_ = 0, hi_ = 0;
  std::vector<double> breaks_;
  std::optional<OscillatoryIntegral> filon_;
  cplx moment_ = 0;
  std::shared_ptr<Cache> cache_;
};

struct SpectralSamples {
  std::vector<double> lambda;
  std::vector<cplx> values;
  std::vector<double> density;

  void write_csv(std::ostream& os) const {
    os << "lambda,re,im,density\n";
    os.precision(17);
    for (std::size_t i = 0; i < lambda.size(); ++i)
      os << lambda[i] << ',' << values[i].real() << ',' << values[i].imag() << ',' << density[i] << '\n';
  }
};

/// Geometric grid from lo to hi with the given points per decade.
inline std::vector<double> geometric_grid(double lo, double hi, int per_decade = 40) {
  require(lo > 0 && hi > lo, ErrorKind::Usage, "geometric_grid: need 0 < lo < hi");
  std::vector<double> g;
  const int n = int(std::ceil(std::log10(hi / lo) * per_decade));
  for (int i = 0; i <= n; ++i) g.push_back(lo * std::pow(hi / lo, double(i) / n));
  return g;
}

inline SpectralSamples transform(const HalflineFamily& op, const TestFunction& f, const std::vector<double>& grid) {
  HalflineTransform T(op, f);
  SpectralSamples out;
  for (double l : grid) {
    require(l > 0, ErrorKind::Usage, "transform: grid points must be positive");
    out.lambda.push_back(l);
    out.values.push_back(T(l));
    out.density.push_back(spectral_density(op, l));
  }
  return out;
}

/// Default k-windows: 2^0 .. 2^9 for the alpha family, 2^0 .. 2^8 for Bessel.
inline DivergencePolicy default_halfline_policy(const HalflineFamily& op) {
  DivergencePolicy pol;
  pol.min_exp = 0;
  pol.max_exp = std::holds_alternative<HalflineOperator>(op) ? 9 : 8;
  return pol;
}

/// (int (1+lambda)^s |F f|^2 d rho)^{1/2}, integrated in k = lambda^{1/2} over
/// windows [0, 2^j]; stops early once the partial sums have settled.
inline NormResult fractional_norm(const HalflineTransform& T, double s, std::optional<DivergencePolicy> policy = {}) {
  require(s >= 0 && std::isfinite(s), ErrorKind::Usage, "fractional_norm: s must be >= 0");
  const DivergencePolicy pol = policy.value_or(default_halfline_policy(T.op()));
  std::vector<PartialSum> trace;
  CompensatedSum acc;
  for (int e = pol.min_exp; e <= pol.max_exp; ++e) {
    const KWindow& w = T.window(e, pol.min_exp);
    for (std::size_t i = 0; i < w.k.size(); ++i) acc.add(w.w[i] * std::pow(1 + w.k[i] * w.k[i], s) * w.mass[i]);
    trace.push_back({std::ldexp(1.0, e), acc.value()});
    if (int(trace.size()) >= pol.fit_points + 1 && settled(trace)) break;
  }
  return from_verdict(classify(std::move(trace), pol), "spectral");
}

inline NormResult fractional_norm(const HalflineFamily& op, const TestFunction& f, double s,
                                  std::optional<DivergencePolicy> policy = {}) {
  return fractional_norm(HalflineTransform(op, f), s, policy);
}

/// int_0^inf |f|^2 / x dx with geometric levels toward 0.
inline NormResult hardy_quotient(const TestFunction& f, int levels = 40) {
  const double X = std::min(f.hi, f.bulk_hi);
  require(X > 0, ErrorKind::Domain, "hardy_quotient: function vanishes on (0, inf)");
  auto g = [&](double x) { return std::norm(f(x)) / x; };
  std::vector<PartialSum> trace;
  CompensatedSum acc;
  for (int k = 0; k < levels; ++k) {
    double x1 = std::ldexp(X, -k), x0 = std::ldexp(X, -k - 1);
    acc.add(composite(g, x0, x1, f.breakpoints, detail::panel_width(f)));
    trace.push_back({std::ldexp(1.0, k + 1), acc.value()});
  }
  DivergencePolicy pol;
  pol.min_exp = 1;
  pol.max_exp = levels;
  return from_verdict(classify(std::move(trace), pol), "hardy");
}

struct HalflinePrediction {
  Prediction prediction = Prediction::PredictedNonMember;
  NormResult hs;
  std::optional<NormResult> hardy;
  std::optional<double> boundary_value;
  std::string reason;
};

/// Regularity and boundary rule on (0, inf): below 1/2 only H^s; for the
/// Dirichlet (alpha = pi) and Bessel cases the Hardy quotient at s = 1/2 and
/// f(0) = 0 above 1/2; other alpha give plain H^s.
inline HalflinePrediction boundary_predicate(const HalflineFamily& op, const TestFunction& f, double s) {
  require(s > 0 && s <= 1, ErrorKind::Usage, "boundary_predicate: s must lie in (0, 1]");
  require(f.decay != DecayKind::Polynomial && f.decay != DecayKind::None, ErrorKind::Capability,
          "boundary_predicate: needs compact, gaussian or exponential decay");
  const bool zero_trace = std::holds_alternative<BesselOperator>(op) || std::get<HalflineOperator>(op).dirichlet();
  // A support end inside (0, inf) is a point where the zero extension may
  // jump, so the interval has to reach past it.
  const double X = std::isfinite(f.hi) ? 1.5 * f.hi : f.bulk_hi;
  require(X > 0, ErrorKind::Domain, "boundary_predicate: function vanishes on (0, inf)");
  HalflinePrediction r;
  r.hs = hs_norm_interval(f, Interval{0.0, X}, s);
  bool ok = r.hs.finite();
  r.reason = ok ? "H^s finite" : "H^s norm diverges";
  if (ok && zero_trace && std::abs(s - 0.5) < 1e-12) {
    r.hardy = hardy_quotient(f);
    ok = r.hardy->finite();
    if (!ok) r.reason = "Hardy quotient diverges";
  } else if (ok && zero_trace && s > 0.5) {
    cplx b = f(X * 1e-14);
    r.boundary_value = std::abs(b);
    ok = std::abs(b) < bc_tol * std::max(1.0, std::abs(f(0.5 * X)));
    if (!ok) r.reason = "nonzero boundary value";
  }
  r.prediction = ok ? Prediction::PredictedMember : Prediction::PredictedNonMember;
  return r;
}

}  // namespace ldspec
