#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "errors.hpp"
#include "legendre.hpp"
#include "numeric.hpp"
#include "special.hpp"

namespace ldspec {

/// Sorted, de-duplicated breakpoints of [a, b], including both ends.
inline std::vector<double> segment_points(double a, double b, const std::vector<double>& interior) {
  std::vector<double> pts{a, b};
  for (double p : interior)
    if (p > a && p < b) pts.push_back(p);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double x, double y) { return std::abs(x - y) <= 1e-14 * (1 + std::abs(x)); }),
            pts.end());
  return pts;
}

/// Composite Gauss-Legendre over [a, b]: each breakpoint segment is split into
/// panels no wider than max_width.
template <class F>
auto composite(F&& f, double a, double b, const std::vector<double>& breaks, double max_width, int order = 16) {
  using R = decltype(f(a));
  R total{};
  if (!(b > a)) return total;
  auto pts = segment_points(a, b, breaks);
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    double lo = pts[s], hi = pts[s + 1];
    int n = std::max(1, int(std::ceil((hi - lo) / max_width)));
    for (int p = 0; p < n; ++p) {
      double x0 = lo + (hi - lo) * p / n, x1 = lo + (hi - lo) * (p + 1) / n;
      total += gl_panel(f, x0, x1, order);
    }
  }
  return total;
}

/// Node/weight list for a composite rule (reused across many integrands).
struct NodeSet {
  std::vector<double> x;
  std::vector<double> w;
};

inline NodeSet composite_nodes(double a, double b, const std::vector<double>& breaks, double max_width,
                               int order = 16) {
  NodeSet ns;
  if (!(b > a)) return ns;
  const GaussRule& r = gauss_legendre(order);
  auto pts = segment_points(a, b, breaks);
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    double lo = pts[s], hi = pts[s + 1];
    int n = std::max(1, int(std::ceil((hi - lo) / max_width)));
    for (int p = 0; p < n; ++p) {
      double x0 = lo + (hi - lo) * p / n, x1 = lo + (hi - lo) * (p + 1) / n;
      double c = 0.5 * (x0 + x1), h = 0.5 * (x1 - x0);
      for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        ns.x.push_back(c + h * r.nodes[i]);
        ns.w.push_back(h * r.weights[i]);
      }
    }
  }
  return ns;
}

/// Adaptive bisection comparing a panel with its two halves.
template <class F>
double adaptive_gl(F&& f, double a, double b, double tol = 1e-12, int depth = 0) {
  double whole = gl_panel(f, a, b, 16);
  double m = 0.5 * (a + b);
  double left = gl_panel(f, a, m, 16), right = gl_panel(f, m, b, 16);
  double err = std::abs(left + right - whole);
  if (depth >= 40 || err <= tol * std::max(1.0, std::abs(left + right))) return left + right;
  return adaptive_gl(f, a, m, tol, depth + 1) + adaptive_gl(f, m, b, tol, depth + 1);
}

/// Gauss-Hermite rule for the weight e^{-x^2}. `scaled` holds w_i e^{x_i^2}, so
/// that sum scaled_i g(x_i) approximates the unweighted integral of g.
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> scaled;
  double max_residual = 0.0;
};

namespace detail {
inline HermiteRule build_gauss_hermite(int n) {
  // Golub-Welsch: eigenvalues of the Jacobi matrix of the orthonormal family
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(std::max(0, n - 1)), Eigen::EigenvaluesOnly);
  HermiteRule r;
  r.nodes.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::vector<double> u(std::size_t(n) + 1);
  for (int i = 0; i < n; ++i) {
    double x = r.nodes[std::size_t(i)];
    // Newton polish on u_n (same zeros as H_n); u_n' = sqrt(2n) u_{n-1} - x u_n
    for (int it = 0; it < 3; ++it) {
      hermite_functions(x, n, u.data());
      double d = std::sqrt(2.0 * n) * u[std::size_t(n - 1)] - x * u[std::size_t(n)];
      if (d == 0.0) break;
      x -= u[std::size_t(n)] / d;
    }
    hermite_functions(x, n, u.data());
    CompensatedSum christoffel;
    for (int k = 0; k < n; ++k) christoffel.add(u[std::size_t(k)] * u[std::size_t(k)]);
    double sc = 1.0 / christoffel.value();
    r.nodes[std::size_t(i)] = x;
    r.scaled.push_back(sc);
    r.weights.push_back(sc * std::exp(-x * x));
    r.max_residual = std::max(r.max_residual, std::abs(u[std::size_t(n)]) * std::sqrt(sc));
  }
  return r;
}
}  // namespace detail

inline const HermiteRule& gauss_hermite(int n) {
  static std::mutex mtx;
  static std::map<int, HermiteRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) {
    HermiteRule r = detail::build_gauss_hermite(n);
    require(r.max_residual < 1e-10, ErrorKind::Capability, "gauss_hermite: node residual too large");
    it = cache.emplace(n, std::move(r)).first;
  }
  return it->second;
}

/// Filon-type integrator for  int_a^b g(x) e^{i omega x} dx  with g smooth on
/// each panel. g is expanded per panel in Legendre polynomials once; each
/// frequency then costs O(panels * degree) using
///   int_{-1}^{1} P_k(t) e^{i kappa t} dt = 2 i^k j_k(kappa).
class OscillatoryIntegral {
 public:
  OscillatoryIntegral(const std::function<cplx(double)>& g, double a, double b, const std::vector<double>& breaks,
                      double max_width, int degree = 20)
      : degree_(degree) {
    const int nq = degree + 8;
    const GaussRule& r = gauss_legendre(nq);
    // Legendre values at the quadrature nodes
    std::vector<double> P(std::size_t(nq) * std::size_t(degree + 1));
    for (int i = 0; i < nq; ++i) {
      double t = r.nodes[std::size_t(i)];
      double p0 = 1.0, p1 = t;
      P[std::size_t(i) * std::size_t(degree + 1)] = 1.0;
      if (degree >= 1) P[std::size_t(i) * std::size_t(degree + 1) + 1] = t;
      for (int k = 1; k < degree; ++k) {
        double p2 = ((2.0 * k + 1.0) * t * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
        P[std::size_t(i) * std::size_t(degree + 1) + std::size_t(k + 1)] = p2;
      }
    }
    auto pts = segment_points(a, b, breaks);
    std::vector<cplx> gv(static_cast<std::size_t>(nq));
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
      double lo = pts[s], hi = pts[s + 1];
      int n = std::max(1, int(std::ceil((hi - lo) / max_width)));
      for (int p = 0; p < n; ++p) {
        double x0 = lo + (hi - lo) * p / n, x1 = lo + (hi - lo) * (p + 1) / n;
        Panel pan;
        pan.c = 0.5 * (x0 + x1);
        pan.h = 0.5 * (x1 - x0);
        for (int i = 0; i < nq; ++i) gv[std::size_t(i)] = g(pan.c + pan.h * r.nodes[std::size_t(i)]);
        pan.beta.resize(std::size_t(degree + 1));
        for (int k = 0; k <= degree; ++k) {
          cplx acc = 0;
          for (int i = 0; i < nq; ++i)
            acc += r.weights[std::size_t(i)] * gv[std::size_t(i)] * P[std::size_t(i) * std::size_t(degree + 1) + std::size_t(k)];
          pan.beta[std::size_t(k)] = acc * (2.0 * k + 1.0) / 2.0;
        }
        panels_.push_back(std::move(pan));
      }
    }
    // group panels by half-width so spherical Bessel values are shared
    for (std::size_t i = 0; i < panels_.size(); ++i) {
      bool found = false;
      for (auto& grp : groups_)
        if (grp.h == panels_[i].h) {
          grp.members.push_back(i);
          found = true;
          break;
        }
      if (!found) groups_.push_back({panels_[i].h, {i}});
    }
  }

  cplx operator()(double omega) const {
    std::vector<double> j(std::size_t(degree_) + 1);
    std::vector<cplx> moments(std::size_t(degree_) + 1);
    CompensatedComplexSum total;
    static const cplx ik[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
    for (const auto& grp : groups_) {
      spherical_bessel_seq(omega * grp.h, degree_, j.data());
      for (int k = 0; k <= degree_; ++k) moments[std::size_t(k)] = 2.0 * ik[k % 4] * j[std::size_t(k)];
      for (std::size_t idx : grp.members) {
        const Panel& pan = panels_[idx];
        cplx acc = 0;
        for (int k = 0; k <= degree_; ++k) acc += pan.beta[std::size_t(k)] * moments[std::size_t(k)];
        total.add(pan.h * std::polar(1.0, omega * pan.c) * acc);
      }
    }
    return total.value();
  }

  std::size_t panel_count() const { return panels_.size(); }

 private:
  struct Panel {
    double c = 0, h = 0;
    std::vector<cplx> beta;
  };
  struct Group {
    double h;
    std::vector<std::size_t> members;
  };
  int degree_;
  std::vector<Panel> panels_;
  std::vector<Group> groups_;
};

}  // namespace ldspec
