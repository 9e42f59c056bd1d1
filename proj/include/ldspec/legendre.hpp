#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "numeric.hpp"

namespace ldspec {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {
inline GaussRule build_gauss_legendre(int n) {
  GaussRule r;
  r.nodes.resize(std::size_t(n));
  r.weights.resize(std::size_t(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[std::size_t(i)] = -x;
    r.nodes[std::size_t(n - 1 - i)] = x;
    r.weights[std::size_t(i)] = w;
    r.weights[std::size_t(n - 1 - i)] = w;
  }
  if (n % 2 == 1) r.nodes[std::size_t(n / 2)] = 0.0;
  return r;
}
}  // namespace detail

/// Cached rule of order n (thread-safe; rules are immutable once built).
inline const GaussRule& gauss_legendre(int n) {
  static std::mutex mtx;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::build_gauss_legendre(n)).first;
  return it->second;
}

/// Integrate f over [a, b] with a single n-point panel.
template <class F>
auto gl_panel(F&& f, double a, double b, int n = 16) {
  const GaussRule& r = gauss_legendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  using R = decltype(f(c));
  R acc = f(c + h * r.nodes[0]) * r.weights[0];
  for (std::size_t i = 1; i < r.nodes.size(); ++i) acc += f(c + h * r.nodes[i]) * r.weights[i];
  return acc * h;
}

}  // namespace ldspec
