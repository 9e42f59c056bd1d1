#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "divergence.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "sobolev.hpp"
#include "spectral_core.hpp"

namespace ldspec {

enum class Prediction { PredictedMember, PredictedNonMember };

inline const char* to_string(Prediction p) {
  return p == Prediction::PredictedMember ? "PredictedMember" : "PredictedNonMember";
}

inline Status as_status(Prediction p) {
  return p == Prediction::PredictedMember ? Status::Member : Status::NonMember;
}

/// -d^2/dx^2 on (0, 2 pi) with g(0) = e^{i phi} g(2 pi) (and the same for g').
/// Eigenfunctions (2 pi)^{-1/2} e^{i k_n x}, k_n = n - phi/(2 pi), eigenvalues k_n^2.
class PeriodicOperator {
 public:
  explicit PeriodicOperator(double phi) : phi_(phi) {
    require(phi >= 0 && phi < 2 * pi, ErrorKind::Usage, "periodic operator: phi must lie in [0, 2 pi)");
  }
  double phi() const { return phi_; }
  double wavenumber(int n) const { return n - phi_ / (2 * pi); }
  double eigenvalue(int n) const { return wavenumber(n) * wavenumber(n); }
  cplx eigenfunction(int n, double x) const { return std::polar(1.0 / std::sqrt(2 * pi), wavenumber(n) * x); }

 private:
  double phi_;
};

struct PeriodicCoefficients {
  double phi = 0;
  int N = 0;
  std::vector<cplx> c;  // c[n + N] for |n| <= N
  double l2_norm_sq = 0;
  double parseval_defect = 0;  // (||f||^2 - sum |c_n|^2) / ||f||^2

  cplx at(int n) const { return std::abs(n) <= N ? c[std::size_t(n + N)] : cplx(0); }
};

namespace detail {

inline constexpr double two_pi = 2 * pi;

inline void require_periodic_support(const TestFunction& f) {
  if (f.support == SupportKind::Compact)
    require(f.lo >= -1e-12 && f.hi <= two_pi + 1e-12, ErrorKind::Domain,
            "function '" + f.name + "' is not supported in [0, 2 pi]");
}

/// int_0^{2 pi} g(x) e^{-i omega x} dx for many omega.
inline OscillatoryIntegral interval_transform(const TestFunction& f, const std::function<cplx(double)>& g) {
  return OscillatoryIntegral(g, 0.0, two_pi, f.breakpoints, std::min(0.5, panel_width(f)), 20);
}

/// One-sided boundary values from inside (0, 2 pi).
inline cplx left_end(const TestFunction& f, int k) { return f.deriv(k, two_pi * 1e-13); }
inline cplx right_end(const TestFunction& f, int k) { return f.deriv(k, two_pi * (1 - 1e-13)); }

inline CoefficientVector sorted_vector(std::vector<std::pair<double, cplx>> terms) {
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Atom> atoms;
  std::vector<cplx> c;
  for (const auto& [nu, v] : terms) {
    atoms.push_back({1.0 + nu, 1.0});
    c.push_back(v);
  }
  auto mu = std::make_shared<const SpectralMeasure>(SpectralMeasure::discrete(std::move(atoms)));
  return CoefficientVector::on(mu, std::move(c));
}

}  // namespace detail

inline PeriodicCoefficients analyze(const TestFunction& f, double phi, int N) {
  PeriodicOperator op(phi);
  require(N >= 1, ErrorKind::Usage, "analyze: N must be >= 1");
  detail::require_periodic_support(f);
  const double kappa = phi / (2 * pi);
  // c_n = (2 pi)^{-1/2} int f(x) e^{i kappa x} e^{-i n x} dx
  auto g = [&f, kappa](double x) { return f(x) * std::polar(1.0, kappa * x); };
  OscillatoryIntegral I = detail::interval_transform(f, g);
  PeriodicCoefficients pc;
  pc.phi = phi;
  pc.N = N;
  pc.c.resize(std::size_t(2 * N + 1));
  CompensatedSum energy;
  for (int n = -N; n <= N; ++n) {
    cplx v = I(-double(n)) / std::sqrt(2 * pi);
    pc.c[std::size_t(n + N)] = v;
    energy.add(std::norm(v));
  }
  pc.l2_norm_sq = std::pow(l2_norm_interval(f, {0, 2 * pi}), 2);
  pc.parseval_defect = pc.l2_norm_sq > 0 ? (pc.l2_norm_sq - energy.value()) / pc.l2_norm_sq : 0.0;
  return pc;
}

/// Spectral coefficients ordered by eigenvalue, on atoms 1 + k_n^2 (the
/// shifted operator A_phi + I); the weights (1 + k_n^2)^s and |k_n|^{2s} give
/// the same convergence.
inline CoefficientVector coefficient_vector(const PeriodicCoefficients& pc) {
  PeriodicOperator op(pc.phi);
  std::vector<std::pair<double, cplx>> terms;
  for (int n = -pc.N; n <= pc.N; ++n) terms.emplace_back(op.eigenvalue(n), pc.at(n));
  return detail::sorted_vector(std::move(terms));
}

inline MembershipVerdict fractional_membership(const TestFunction& f, double phi, double s, int N = 4096,
                                               const DivergencePolicy& pol = {}) {
  require(s > 0 && std::isfinite(s), ErrorKind::Usage, "fractional_membership: s must be > 0");
  return membership(coefficient_vector(analyze(f, phi, N)), s, pol);
}

enum class Realization { Dirichlet, Neumann };

inline const char* to_string(Realization r) { return r == Realization::Dirichlet ? "Dirichlet" : "Neumann"; }

/// Coefficients against sin(n x/2)/sqrt(pi) (n >= 1) or cos(n x/2)/sqrt(pi)
/// (n >= 1) plus the constant 1/sqrt(2 pi); eigenvalues n^2/4.
inline CoefficientVector realization_coefficients(const TestFunction& f, Realization r, int N) {
  require(N >= 1, ErrorKind::Usage, "realization_coefficients: N must be >= 1");
  detail::require_periodic_support(f);
  OscillatoryIntegral I = detail::interval_transform(f, [&f](double x) { return f(x); });
  std::vector<std::pair<double, cplx>> terms;
  if (r == Realization::Neumann) terms.emplace_back(0.0, I(0.0) / std::sqrt(2 * pi));
  for (int n = 1; n <= 2 * N; ++n) {
    cplx plus = I(0.5 * n), minus = I(-0.5 * n);  // int f e^{+-i n x/2}
    cplx v = r == Realization::Dirichlet ? (plus - minus) / cplx(0, 2) : (plus + minus) / 2.0;
    terms.emplace_back(0.25 * n * n, v / std::sqrt(pi));
  }
  return detail::sorted_vector(std::move(terms));
}

inline MembershipVerdict realization_membership(const TestFunction& f, Realization r, double s, int N = 4096,
                                                const DivergencePolicy& pol = {}) {
  return membership(realization_coefficients(f, r, N), s, pol);
}

/// (B): int_0^{2 pi} t^{-1-2s} int_0^t |e^{i phi} f(x + 2 pi - t) - f(x)|^2 dx dt,
/// on geometric t-levels [2 pi 2^{-k-1}, 2 pi 2^{-k}] with the shared slope policy.
inline NormResult wraparound_integral(const TestFunction& f, double phi, double s, int levels = 40) {
  const cplx e = std::polar(1.0, phi);
  auto inner = [&](double t) {
    std::vector<double> br;
    for (double p : f.breakpoints) {
      br.push_back(p);
      br.push_back(p - 2 * pi + t);
    }
    return composite([&](double x) { return std::norm(e * f(x + 2 * pi - t) - f(x)); }, 0.0, t, br,
                     detail::panel_width(f));
  };
  std::vector<double> tk;
  for (double p : f.breakpoints)
    if (p > 0 && p < 2 * pi) {
      tk.push_back(p);
      tk.push_back(2 * pi - p);
    }
  std::vector<PartialSum> trace;
  CompensatedSum acc;
  for (int k = 0; k < levels; ++k) {
    double t1 = std::ldexp(2 * pi, -k), t0 = std::ldexp(2 * pi, -k - 1);
    acc.add(composite([&](double t) { return inner(t) * std::pow(t, -1 - 2 * s); }, t0, t1, tk,
                      detail::panel_width(f)));
    trace.push_back({std::ldexp(1.0, k + 1), acc.value()});
  }
  DivergencePolicy pol;
  pol.min_exp = 1;
  pol.max_exp = levels;
  return from_verdict(classify(std::move(trace), pol), "wrap-around");
}

struct SplitSeminorm {
  double A = 0;  // interior part: half the squared interval seminorm
  NormResult B;  // wrap-around part, as a squared quantity in B.value^2
  bool finite() const { return B.finite() && std::isfinite(A); }
  double total() const { return finite() ? A + B.value * B.value : INFINITY; }
};

inline SplitSeminorm split_seminorm_AB(const TestFunction& f, double phi, double s) {
  PeriodicOperator op(phi);
  require(s > 0 && s < 1, ErrorKind::Usage, "split_seminorm_AB: s must lie in (0,1)");
  GagliardoConfig cfg;
  cfg.s = s;
  SplitSeminorm r;
  NormResult g = gagliardo_seminorm(f, Interval{0, 2 * pi}, cfg);
  r.A = g.finite() ? 0.5 * g.value * g.value : INFINITY;
  r.B = wraparound_integral(f, phi, s);
  return r;
}

/// (T_phi(t) f)(x) = f(x - t) for x >= t and e^{i phi} f(x + 2 pi - t) for x < t.
inline TestFunction translate(const TestFunction& f, double phi, double t) {
  require(t >= 0 && t <= 2 * pi, ErrorKind::Usage, "translate: t must lie in [0, 2 pi]");
  TestFunction g = f;
  g.name = f.name + "/translated";
  const cplx e = std::polar(1.0, phi);
  g.value = [f, e, t](double x) {
    if (x < 0 || x > 2 * pi) return cplx(0);
    return x >= t ? f(x - t) : e * f(x + 2 * pi - t);
  };
  g.derivative = nullptr;
  g.max_derivative = 0;
  g.fourier = nullptr;
  g.support = SupportKind::Compact;
  g.lo = g.bulk_lo = 0;
  g.hi = g.bulk_hi = 2 * pi;
  g.breakpoints.clear();
  for (double p : f.breakpoints) {
    if (p + t >= 0 && p + t <= 2 * pi) g.breakpoints.push_back(p + t);
    if (p - 2 * pi + t >= 0 && p - 2 * pi + t <= 2 * pi) g.breakpoints.push_back(p - 2 * pi + t);
  }
  g.breakpoints.push_back(t);
  g.smoothness = std::min(f.smoothness, -1);
  return g;
}

/// -f'' as a function (the action of A_phi on smooth functions in its domain).
inline TestFunction apply_periodic_operator(const TestFunction& f) {
  TestFunction d = derivative(f, 2);
  TestFunction g = d;
  g.name = "-(" + f.name + ")''";
  g.value = [d](double x) { return -d(x); };
  if (d.derivative) g.derivative = [d](int k, double x) { return -d.derivative(k, x); };
  g.fourier = nullptr;
  return g;
}

struct CharacterizationResult {
  Prediction prediction = Prediction::PredictedNonMember;
  NormResult hs;                             // interval H^s norm
  std::vector<double> boundary_defects;      // |f^(k)(0) - e^{i phi} f^(k)(2 pi)| / scale, k = 0..
  std::optional<NormResult> wraparound;      // (B), when the rule asks for it
  std::string reason;
};

inline constexpr double bc_tol = 1e-8;

namespace detail {

inline double boundary_defect(const TestFunction& f, double phi, int k) {
  cplx a = left_end(f, k), b = right_end(f, k);
  double scale = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - std::polar(1.0, phi) * b) / scale;
}

inline bool is_half(double theta) { return std::abs(theta - 0.5) < 1e-12; }

}  // namespace detail

/// Membership in dom(A_phi^{s/2}) predicted from regularity and boundary
/// behaviour, for s = m + theta: H^s finiteness; the conditions
/// f^(k)(0) = e^{i phi} f^(k)(2 pi) for k < m, and also for k = m when
/// theta > 1/2; when theta = 1/2, finiteness of (B) for f^(m).
inline CharacterizationResult higher_order_membership(const TestFunction& f, double phi, double s) {
  PeriodicOperator op(phi);
  require(s > 0 && std::isfinite(s), ErrorKind::Usage, "membership rule: s must be > 0");
  detail::require_periodic_support(f);
  const int m = int(std::floor(s + 1e-12));
  const double theta = s - m;
  require(m == 0 || m <= f.max_derivative, ErrorKind::Capability,
          "missing derivatives of '" + f.name + "' for the boundary rule");
  CharacterizationResult r;
  r.hs = hs_norm_interval(f, Interval{0, 2 * pi}, s);
  const int kmax = theta > 0.5 + 1e-12 ? m : m - 1;
  bool bc_ok = true;
  for (int k = 0; k <= kmax; ++k) {
    double d = detail::boundary_defect(f, phi, k);
    r.boundary_defects.push_back(d);
    if (d >= bc_tol) {
      bc_ok = false;
      if (r.reason.empty()) r.reason = "boundary condition fails for derivative order " + std::to_string(k);
    }
  }
  bool ok = r.hs.finite() && bc_ok;
  if (!r.hs.finite()) r.reason = "H^s norm on (0, 2 pi) diverges";
  if (ok && detail::is_half(theta)) {
    r.wraparound = wraparound_integral(derivative(f, m), phi, 0.5);
    ok = r.wraparound->finite();
    if (!ok) r.reason = "wrap-around integral diverges";
  }
  if (ok) r.reason = "all conditions hold";
  r.prediction = ok ? Prediction::PredictedMember : Prediction::PredictedNonMember;
  return r;
}

inline CharacterizationResult boundary_characterization(const TestFunction& f, double phi, double s) {
  require(s > 0 && s < 1, ErrorKind::Usage, "boundary_characterization: s must lie in (0,1)");
  return higher_order_membership(f, phi, s);
}

/// One set relation between domains and whether this instance is consistent with it.
struct RelationCheck {
  std::string relation;
  std::string outcome;  // "consistent", "violated" or "undetermined"
};

struct ThresholdReport {
  double s = 0, phi1 = 0, phi2 = 0;
  MembershipVerdict phi1_verdict, phi2_verdict, dirichlet, neumann;
  std::vector<RelationCheck> relations;
  bool consistent() const {
    for (const auto& r : relations)
      if (r.outcome == "violated") return false;
    return true;
  }
};

/// Spectral membership under A_phi1, A_phi2 and the Dirichlet and Neumann
/// realizations, compared with the set relations that hold for 0 < s < 1.
inline ThresholdReport threshold_comparison(double s, double phi1, double phi2, const TestFunction& f, int N = 4096) {
  require(s > 0 && s < 1, ErrorKind::Usage, "threshold_comparison: s must lie in (0,1)");
  ThresholdReport rep;
  rep.s = s;
  rep.phi1 = phi1;
  rep.phi2 = phi2;
  rep.phi1_verdict = fractional_membership(f, phi1, s, N);
  rep.phi2_verdict = fractional_membership(f, phi2, s, N);
  rep.dirichlet = realization_membership(f, Realization::Dirichlet, s, N);
  rep.neumann = realization_membership(f, Realization::Neumann, s, N);
  auto det = [](Status a) { return a != Status::Indeterminate; };
  auto add_equal = [&](std::string name, std::vector<Status> st) {
    bool all_det = std::all_of(st.begin(), st.end(), det);
    bool eq = std::all_of(st.begin(), st.end(), [&](Status x) { return x == st.front(); });
    rep.relations.push_back({std::move(name), !all_det ? "undetermined" : (eq ? "consistent" : "violated")});
  };
  const Status p1 = rep.phi1_verdict.status, p2 = rep.phi2_verdict.status;
  const Status D = rep.dirichlet.status, Nm = rep.neumann.status;
  if (s < 0.5 - 1e-12) {
    add_equal("all four domains coincide below 1/2", {p1, p2, D, Nm});
  } else {
    if (std::abs(phi1 - phi2) > 1e-12) {
      Status both = (p1 == Status::Member && p2 == Status::Member) ? Status::Member
                    : (p1 == Status::NonMember || p2 == Status::NonMember) ? Status::NonMember
                                                                           : Status::Indeterminate;
      add_equal("intersection of the two phi-domains equals the Dirichlet domain", {both, D});
    }
    auto implies = [&](std::string name, Status a, Status b) {
      std::string out = !det(a) || !det(b) ? "undetermined"
                        : (a == Status::Member && b != Status::Member) ? "violated"
                                                                       : "consistent";
      rep.relations.push_back({std::move(name), out});
    };
    implies("Dirichlet domain inside the phi1-domain", D, p1);
    implies("Dirichlet domain inside the phi2-domain", D, p2);
    implies("phi1-domain inside the Neumann domain", p1, Nm);
    implies("phi2-domain inside the Neumann domain", p2, Nm);
  }
  return rep;
}

/// int_0^{2 pi} |f|^2 / min(x, 2 pi - x) dx, finite for functions vanishing at both ends at rate.
inline NormResult hardy_quotient_interval(const TestFunction& f, int levels = 40) {
  std::vector<PartialSum> trace;
  CompensatedSum acc;
  auto g = [&](double x) { return std::norm(f(x)) / std::min(x, 2 * pi - x); };
  acc.add(composite(g, pi / 2, 3 * pi / 2, f.breakpoints, detail::panel_width(f)));
  for (int k = 0; k < levels; ++k) {
    double x1 = std::ldexp(pi / 2, -k), x0 = std::ldexp(pi / 2, -k - 1);
    acc.add(composite(g, x0, x1, f.breakpoints, detail::panel_width(f)));
    acc.add(composite(g, 2 * pi - x1, 2 * pi - x0, f.breakpoints, detail::panel_width(f)));
    trace.push_back({std::ldexp(1.0, k + 1), acc.value()});
  }
  DivergencePolicy pol;
  pol.min_exp = 1;
  pol.max_exp = levels;
  return from_verdict(classify(std::move(trace), pol), "hardy");
}

}  // namespace ldspec
