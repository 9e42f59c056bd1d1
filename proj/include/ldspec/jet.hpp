#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "numeric.hpp"

namespace ldspec {

/// Truncated Taylor series c_0 + c_1 h + ... + c_{N-1} h^{N-1}; used to get
/// exact derivatives of catalog functions from a single generic formula.
template <int N>
struct Jet {
  std::array<cplx, N> c{};

  Jet() = default;
  Jet(double v) { c[0] = v; }
  Jet(cplx v) { c[0] = v; }
  static Jet variable(double x) {
    Jet j(x);
    if constexpr (N > 1) j.c[1] = 1.0;
    return j;
  }
  double real_value() const { return c[0].real(); }

  friend Jet operator+(Jet a, const Jet& b) {
    for (int i = 0; i < N; ++i) a.c[i] += b.c[i];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    for (int i = 0; i < N; ++i) a.c[i] -= b.c[i];
    return a;
  }
  friend Jet operator-(Jet a) {
    for (int i = 0; i < N; ++i) a.c[i] = -a.c[i];
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < N; ++i)
      for (int j = 0; i + j < N; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet q;
    for (int k = 0; k < N; ++k) {
      cplx acc = a.c[k];
      for (int j = 1; j <= k; ++j) acc -= b.c[j] * q.c[k - j];
      q.c[k] = acc / b.c[0];
    }
    return q;
  }
};

template <int N>
Jet<N> exp(const Jet<N>& a) {
  Jet<N> e;
  e.c[0] = std::exp(a.c[0]);
  for (int k = 1; k < N; ++k) {
    cplx acc = 0;
    for (int j = 1; j <= k; ++j) acc += double(j) * a.c[j] * e.c[k - j];
    e.c[k] = acc / double(k);
  }
  return e;
}

template <int N>
void sincos(const Jet<N>& a, Jet<N>& s, Jet<N>& co) {
  s.c[0] = std::sin(a.c[0]);
  co.c[0] = std::cos(a.c[0]);
  for (int k = 1; k < N; ++k) {
    cplx as = 0, ac = 0;
    for (int j = 1; j <= k; ++j) {
      as += double(j) * a.c[j] * co.c[k - j];
      ac += double(j) * a.c[j] * s.c[k - j];
    }
    s.c[k] = as / double(k);
    co.c[k] = -ac / double(k);
  }
}

template <int N>
Jet<N> sin(const Jet<N>& a) {
  Jet<N> s, c;
  sincos(a, s, c);
  return s;
}

template <int N>
Jet<N> cos(const Jet<N>& a) {
  Jet<N> s, c;
  sincos(a, s, c);
  return c;
}

/// a^r for a real positive leading coefficient.
template <int N>
Jet<N> pow(const Jet<N>& a, double r) {
  Jet<N> p;
  p.c[0] = std::pow(a.c[0], r);
  for (int k = 1; k < N; ++k) {
    cplx acc = 0;
    for (int j = 1; j <= k; ++j) acc += ((r + 1.0) * j - k) * a.c[j] * p.c[k - j];
    p.c[k] = acc / (double(k) * a.c[0]);
  }
  return p;
}

}  // namespace ldspec
