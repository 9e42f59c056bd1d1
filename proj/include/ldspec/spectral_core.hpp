#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "divergence.hpp"
#include "errors.hpp"
#include "numeric.hpp"
#include "quadrature.hpp"

namespace ldspec {

struct Atom {
  double lambda;
  double weight;
};

/// Quadrature hint for continuous measures.
struct QuadratureHint {
  int panels = 64;
  double oscillation_scale = 1.0;
};

/// Spectral measure of a multiplication-operator model: either a list of
/// atoms or a density on [lo, hi).
class SpectralMeasure {
 public:
  enum class Kind { Discrete, Continuous };

  static SpectralMeasure discrete(std::vector<Atom> atoms) {
    for (const auto& a : atoms) {
      require(std::isfinite(a.lambda), ErrorKind::Input, "spectral measure: non-finite eigenvalue");
      require(a.weight > 0 && std::isfinite(a.weight), ErrorKind::Input,
              "spectral measure: weights must be finite and strictly positive");
    }
    SpectralMeasure m;
    m.kind_ = Kind::Discrete;
    m.atoms_ = std::move(atoms);
    return m;
  }

  /// Atoms lambda(n), weight(n) for n = 1..count.
  static SpectralMeasure sequence(const std::function<double(int)>& lambda, const std::function<double(int)>& weight,
                                  int count) {
    std::vector<Atom> atoms;
    atoms.reserve(std::size_t(count));
    for (int n = 1; n <= count; ++n) atoms.push_back({lambda(n), weight(n)});
    return discrete(std::move(atoms));
  }

  static SpectralMeasure continuous(std::function<double(double)> density, double lo, double hi,
                                    QuadratureHint hint = {}, std::string family = "custom") {
    require(lo >= 0 && hi > lo, ErrorKind::Input, "continuous measure: support must be [lo, hi) within [0, inf)");
    SpectralMeasure m;
    m.kind_ = Kind::Continuous;
    m.density_ = std::move(density);
    m.lo_ = lo;
    m.hi_ = hi;
    m.hint_ = hint;
    m.family_ = std::move(family);
    return m;
  }

  /// lambda -> lambda + 1, turning a nonnegative operator into one >= I.
  SpectralMeasure shifted_by_identity() const {
    SpectralMeasure m = *this;
    m.shift_ += 1.0;
    if (kind_ == Kind::Discrete)
      for (auto& a : m.atoms_) a.lambda += 1.0;
    else {
      m.lo_ += 1.0;
      m.hi_ += 1.0;
    }
    return m;
  }

  Kind kind() const { return kind_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double shift() const { return shift_; }
  const QuadratureHint& hint() const { return hint_; }
  const std::string& family() const { return family_; }

  /// Density in the (possibly shifted) variable.
  double density(double lambda) const {
    require(kind_ == Kind::Continuous, ErrorKind::Usage, "density of a discrete measure");
    double x = lambda - shift_;
    if (x < lo_ - shift_ || x >= hi_ - shift_) return 0.0;
    return density_(x);
  }

  double min_support() const {
    if (kind_ == Kind::Continuous) return lo_;
    double m = INFINITY;
    for (const auto& a : atoms_) m = std::min(m, a.lambda);
    return m;
  }

  bool left_definite() const { return min_support() >= 1.0; }

  /// Growth exponent g of lambda_n ~ n^g, fitted over the last half of the
  /// atoms; ~0 signals a bounded spectrum.
  double growth_exponent() const {
    if (kind_ == Kind::Continuous) return std::isfinite(hi_) ? 0.0 : 1.0;
    const std::size_t n = atoms_.size();
    if (n < 8) return 0.0;
    std::vector<double> lx, ly;
    for (std::size_t i = n / 2; i < n; i += std::max<std::size_t>(1, n / 64)) {
      lx.push_back(std::log(double(i + 1)));
      ly.push_back(std::log(std::abs(atoms_[i].lambda)));
    }
    return ls_slope(lx, ly);
  }

 private:
  Kind kind_ = Kind::Discrete;
  std::vector<Atom> atoms_;
  std::function<double(double)> density_;
  double lo_ = 0, hi_ = 0, shift_ = 0;
  QuadratureHint hint_;
  std::string family_ = "discrete";
};

/// Optional analytic tail beyond the stored truncation: |c_n|^2 w_n ~ n^{-decay},
/// lambda_n ~ n^{growth}.
struct TailModel {
  double decay;
  double growth = 1.0;
};

/// Coefficients of a function in the spectral representation. For continuous
/// measures, `lambda`/`weight` form a quadrature grid of the measure and the
/// coefficients are samples of the spectral-side function.
struct CoefficientVector {
  std::shared_ptr<const SpectralMeasure> measure;
  std::vector<double> lambda;
  std::vector<double> weight;
  std::vector<cplx> coeffs;
  std::size_t truncation = 0;
  bool finitely_supported = false;  // coefficients beyond truncation are exactly zero
  std::optional<TailModel> tail;

  std::size_t size() const { return coeffs.size(); }

  static CoefficientVector on(std::shared_ptr<const SpectralMeasure> mu, std::vector<cplx> c) {
    require(mu->kind() == SpectralMeasure::Kind::Discrete, ErrorKind::Usage,
            "CoefficientVector::on expects a discrete measure");
    require(c.size() <= mu->atoms().size(), ErrorKind::Input, "more coefficients than atoms");
    CoefficientVector v;
    v.measure = mu;
    for (std::size_t i = 0; i < c.size(); ++i) {
      v.lambda.push_back(mu->atoms()[i].lambda);
      v.weight.push_back(mu->atoms()[i].weight);
    }
    v.coeffs = std::move(c);
    v.truncation = v.coeffs.size();
    return v;
  }

  /// Samples g(lambda) on a composite Gauss-Legendre grid of a continuous measure.
  static CoefficientVector sampled(std::shared_ptr<const SpectralMeasure> mu,
                                   const std::function<cplx(double)>& g, double cutoff) {
    require(mu->kind() == SpectralMeasure::Kind::Continuous, ErrorKind::Usage,
            "CoefficientVector::sampled expects a continuous measure");
    CoefficientVector v;
    v.measure = mu;
    double hi = std::min(cutoff, mu->hi());
    double width = std::max((hi - mu->lo()) / mu->hint().panels, 1e-12);
    width = std::min(width, mu->hint().oscillation_scale);
    NodeSet ns = composite_nodes(mu->lo(), hi, {}, width, 16);
    for (std::size_t i = 0; i < ns.x.size(); ++i) {
      v.lambda.push_back(ns.x[i]);
      v.weight.push_back(ns.w[i] * mu->density(ns.x[i]));
      v.coeffs.push_back(g(ns.x[i]));
    }
    v.truncation = v.coeffs.size();
    return v;
  }
};

namespace detail {
inline void check_coefficients(const CoefficientVector& f) {
  require(all_finite(f.coeffs), ErrorKind::Input, "non-finite coefficients");
  require(f.lambda.size() == f.coeffs.size() && f.weight.size() == f.coeffs.size(), ErrorKind::Input,
          "coefficient vector is inconsistent with its grid");
}
inline void check_scale(double s) {
  require(std::isfinite(s) && s >= 0.0, ErrorKind::Usage, "scale index must be finite and >= 0");
}
inline double term(const CoefficientVector& f, std::size_t i, double s) {
  double a = std::abs(f.coeffs[i]);
  if (a == 0.0) return 0.0;
  return std::exp(s * std::log(f.lambda[i])) * a * a * f.weight[i];
}
}  // namespace detail

/// (sum lambda^s |f|^2 w)^{1/2}.
inline double scale_norm(const CoefficientVector& f, double s) {
  detail::check_scale(s);
  detail::check_coefficients(f);
  for (double l : f.lambda)
    require(l >= 1.0, ErrorKind::Normalization, "scale_norm: support point below 1 (use shifted_by_identity)");
  CompensatedSum acc;
  for (std::size_t i = 0; i < f.size(); ++i) acc.add(detail::term(f, i, s));
  return std::sqrt(acc.value());
}

/// Partial sums of lambda^s |f|^2 w over the policy's windows. Discrete data
/// use counts of leading atoms; continuous data use frequency cutoffs K with
/// lambda <= K^2.
inline std::vector<PartialSum> partial_sums(const CoefficientVector& f, double s, const DivergencePolicy& pol) {
  std::vector<PartialSum> trace;
  const bool continuous = f.measure && f.measure->kind() == SpectralMeasure::Kind::Continuous;
  CompensatedSum acc;
  std::size_t i = 0;
  for (double w : pol.windows()) {
    if (!continuous && w > double(f.size())) break;
    if (continuous && w * w > f.lambda.back() * (1 + 1e-12)) break;
    while (i < f.size() && (continuous ? f.lambda[i] <= w * w : double(i) < w)) acc.add(detail::term(f, i++, s));
    trace.push_back({w, acc.value()});
  }
  return trace;
}

inline MembershipVerdict membership(const CoefficientVector& f, double s, const DivergencePolicy& pol = {}) {
  detail::check_scale(s);
  detail::check_coefficients(f);
  if (f.finitely_supported) {
    MembershipVerdict v;
    v.status = Status::Member;
    CompensatedSum acc;
    for (std::size_t i = 0; i < f.size(); ++i) acc.add(detail::term(f, i, s));
    v.norm_estimate = std::sqrt(acc.value());
    v.partial_sums = {{double(f.size()), acc.value()}};
    v.diagnostic = "finitely supported";
    return v;
  }
  if (f.tail) {
    // analytic tail: terms behave like n^{s*growth - decay}
    MembershipVerdict v;
    CompensatedSum acc;
    for (std::size_t i = 0; i < f.size(); ++i) acc.add(detail::term(f, i, s));
    v.partial_sums = partial_sums(f, s, pol);
    double p = f.tail->decay - s * f.tail->growth;
    if (p > 1.0) {
      double n = double(f.size());
      double lastterm = f.size() ? detail::term(f, f.size() - 1, s) : 0.0;
      double bound = lastterm * n / (p - 1.0);
      v.status = Status::Member;
      v.norm_estimate = std::sqrt(acc.value() + bound);
      v.diagnostic = "analytic tail model, truncation bound " + std::to_string(bound);
    } else {
      v.status = Status::NonMember;
      v.divergence_exponent = 1.0 - p;
      v.diagnostic = "analytic tail model diverges";
    }
    return v;
  }
  return classify(partial_sums(f, s, pol), pol);
}

/// g(lambda) = lambda f(lambda), defined when f lies in V_{r+2}.
inline CoefficientVector apply_left_definite_operator(const CoefficientVector& f, double r,
                                                      const DivergencePolicy& pol = {}) {
  detail::check_scale(r);
  MembershipVerdict v = membership(f, r + 2.0, pol);
  require(v.status == Status::Member, ErrorKind::Domain,
          "apply_left_definite_operator: argument not in the domain (membership at index r+2 is " +
              std::string(to_string(v.status)) + ")");
  CoefficientVector g = f;
  for (std::size_t i = 0; i < g.size(); ++i) g.coeffs[i] *= g.lambda[i];
  if (g.tail) g.tail->decay -= 2.0 * g.tail->growth;
  return g;
}

/// Multiply coefficients by lambda^p (the isometric identification between scale spaces).
inline CoefficientVector scale_by_power(const CoefficientVector& f, double p) {
  CoefficientVector g = f;
  for (std::size_t i = 0; i < g.size(); ++i) g.coeffs[i] *= std::exp(p * std::log(g.lambda[i]));
  if (g.tail) g.tail->decay -= 2.0 * p * g.tail->growth;
  return g;
}

/// A vector in H_r \ H_s for an unbounded discrete measure:
/// |c_n|^2 w_n = lambda_n^{-(r+s)/2} / n, so the r-series has terms
/// lambda^{-(s-r)/2}/n and the s-series lambda^{(s-r)/2}/n.
inline CoefficientVector strict_inclusion_witness(std::shared_ptr<const SpectralMeasure> mu, double r, double s,
                                                  const DivergencePolicy& pol = {}) {
  require(r >= 0 && s > r, ErrorKind::Usage, "strict_inclusion_witness requires 0 <= r < s");
  require(mu->kind() == SpectralMeasure::Kind::Discrete, ErrorKind::Usage,
          "strict_inclusion_witness expects a discrete measure");
  require(mu->left_definite(), ErrorKind::Normalization, "measure has support below 1");
  double g = mu->growth_exponent();
  if (!(g > 0.01))
    fail(ErrorKind::Bounded, "operator bounded: spectrum does not grow, so the scale spaces coincide");
  std::vector<cplx> c;
  const auto& atoms = mu->atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    double n = double(i + 1);
    double mag2 = std::exp(-0.5 * (r + s) * std::log(atoms[i].lambda)) / (n * atoms[i].weight);
    c.emplace_back(std::sqrt(mag2), 0.0);
  }
  CoefficientVector v = CoefficientVector::on(mu, std::move(c));
  MembershipVerdict in_r = membership(v, r, pol), in_s = membership(v, s, pol);
  require(in_r.status == Status::Member && in_s.status == Status::NonMember, ErrorKind::Capability,
          "strict_inclusion_witness: self-check failed (r: " + std::string(to_string(in_r.status)) +
              ", s: " + to_string(in_s.status) + ")");
  return v;
}

}  // namespace ldspec
