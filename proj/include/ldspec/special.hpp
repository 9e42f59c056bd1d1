#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "legendre.hpp"
#include "numeric.hpp"

namespace ldspec {

/// Orthonormal Hermite functions u_0..u_M at x, written into out (size M+1).
/// The recurrence runs on rescaled values with a separate log-scale so that
/// large |x| neither overflows the polynomial part nor underflows the gaussian.
inline void hermite_functions(double x, int M, double* out) {
  double log_scale = -0.5 * x * x - 0.25 * std::log(pi);
  double prev = 0.0, cur = 1.0;
  double factor = std::exp(log_scale);
  out[0] = cur * factor;
  for (int k = 0; k < M; ++k) {
    double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(double(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e150) {
      cur *= 1e-150;
      prev *= 1e-150;
      log_scale += 150.0 * std::log(10.0);
      factor = log_scale < -745.0 ? 0.0 : std::exp(log_scale);
    }
    out[k + 1] = cur * factor;
  }
}

inline std::vector<double> hermite_functions(double x, int M) {
  std::vector<double> v(std::size_t(M) + 1);
  hermite_functions(x, M, v.data());
  return v;
}

/// Spherical Bessel functions j_0..j_K at kappa (any sign).
inline void spherical_bessel_seq(double kappa, int K, double* out) {
  const double sgn = kappa < 0 ? -1.0 : 1.0;
  const double z = std::abs(kappa);
  if (z == 0.0) {
    out[0] = 1.0;
    for (int k = 1; k <= K; ++k) out[k] = 0.0;
    return;
  }
  if (z > K + 1.0) {
    double s = std::sin(z), c = std::cos(z);
    out[0] = s / z;
    if (K >= 1) out[1] = s / (z * z) - c / z;
    for (int k = 1; k < K; ++k) out[k + 1] = (2 * k + 1) / z * out[k] - out[k - 1];
  } else {
    // Miller's downward recurrence, normalised by sum (2k+1) j_k^2 = 1.
    const int L = K + 30 + int(z);
    std::vector<double> buf(std::size_t(L) + 2, 0.0);
    buf[L + 1] = 0.0;
    buf[L] = 1.0;
    for (int k = L; k >= 1; --k) {
      buf[k - 1] = (2 * k + 1) / z * buf[k] - buf[k + 1];
      if (std::abs(buf[k - 1]) > 1e100) {
        for (int i = k - 1; i <= L + 1; ++i) buf[i] *= 1e-100;
      }
    }
    CompensatedSum norm;
    for (int k = 0; k <= L; ++k) norm.add((2 * k + 1) * buf[k] * buf[k]);
    double scale = 1.0 / std::sqrt(norm.value());
    // fix the overall sign with j_0 = sin z / z (or j_1 when j_0 is tiny)
    double j0 = std::sin(z) / z;
    double ref = buf[0];
    if (std::abs(j0) < 1e-3) {
      double j1 = std::sin(z) / (z * z) - std::cos(z) / z;
      if ((j1 < 0) != (buf[1] < 0)) scale = -scale;
      (void)ref;
    } else if ((j0 < 0) != (ref < 0)) {
      scale = -scale;
    }
    for (int k = 0; k <= K; ++k) out[k] = buf[k] * scale;
  }
  if (sgn < 0)
    for (int k = 1; k <= K; k += 2) out[k] = -out[k];
}

namespace detail {

inline double bessel_series(double nu, double z) {
  // (z/2)^nu sum (-1)^k (z/2)^{2k} / (k! Gamma(nu+k+1))
  const double h = 0.5 * z;
  const double q = h * h;
  double term = std::exp(nu * std::log(h) - std::lgamma(nu + 1.0));
  CompensatedSum s;
  s.add(term);
  for (int k = 1; k < 300; ++k) {
    term *= -q / (double(k) * (nu + k));
    s.add(term);
    if (std::abs(term) < 1e-18 * std::abs(s.value())) break;
  }
  return s.value();
}

/// Series of z^{-nu} J_nu(z); finite at z = 0.
inline double bessel_scaled_series(double nu, double z) {
  const double q = 0.25 * z * z;
  double term = std::exp(-nu * std::log(2.0) - std::lgamma(nu + 1.0));
  CompensatedSum s;
  s.add(term);
  for (int k = 1; k < 300; ++k) {
    term *= -q / (double(k) * (nu + k));
    s.add(term);
    if (std::abs(term) < 1e-18 * std::abs(s.value())) break;
  }
  return s.value();
}

inline double bessel_asymptotic(double nu, double z) {
  // Hankel expansion, summed until the terms stop decreasing.
  const double mu = 4.0 * nu * nu;
  double P = 1.0, Q = 0.0;
  double a = 1.0;  // a_k(nu) / z^k
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    double odd = 2.0 * k - 1.0;
    a *= (mu - odd * odd) / (double(k) * 8.0 * z);
    if (std::abs(a) > last) break;
    last = std::abs(a);
    // k odd -> Q, k even -> P; signs alternate within each series
    if (k % 2 == 1)
      Q += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * a;
    else
      P += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * a;
    if (last < 1e-17) break;
  }
  const double chi = z - (0.5 * nu + 0.25) * pi;
  return std::sqrt(2.0 / (pi * z)) * (P * std::cos(chi) - Q * std::sin(chi));
}

/// Miller's backward recurrence in the order, normalised by
/// (z/2)^nu = sum_k (nu + 2k) Gamma(nu + k) / k! J_{nu+2k}(z).
inline double bessel_miller(double nu, double z) {
  int N = int(z + 40.0 + 4.0 * std::sqrt(z));
  N += N % 2;
  // r_k = Gamma(nu + k) / k!, walked downward from k = N/2
  int k = N / 2;
  double log_r = std::lgamma(nu + k) - std::lgamma(k + 1.0);
  double jp1 = 0.0, j = 1e-300, norm = 0.0, j0 = 0.0;
  for (int n = N; n >= 0; --n) {
    if (n % 2 == 0) {
      k = n / 2;
      double c = k == 0 ? std::exp(std::lgamma(nu + 1.0)) : (nu + 2.0 * k) * std::exp(log_r);
      norm += c * j;
      if (k > 0) log_r += std::log(double(k)) - std::log(nu + k - 1.0 > 0 ? nu + k - 1.0 : 1.0);
    }
    if (n == 0) j0 = j;
    double jm1 = 2.0 * (nu + n) / z * j - jp1;
    jp1 = j;
    j = jm1;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
      j0 *= 1e-250;
    }
  }
  return j0 / norm * std::exp(nu * std::log(0.5 * z));
}

}  // namespace detail

inline constexpr double bessel_series_switch = 8.0;

inline double bessel_asymptotic_switch(double nu) { return std::max(40.0, 2.0 * nu * nu); }

/// J_nu(z) for 0 <= nu <= 10, z >= 0.
inline double bessel_j(double nu, double z) {
  require(nu >= 0.0 && nu <= 10.0, ErrorKind::Usage, "bessel_j: order must lie in [0, 10]");
  require(z >= 0.0 && std::isfinite(z), ErrorKind::Usage, "bessel_j: argument must be finite and >= 0");
  if (z == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (z <= bessel_series_switch) return detail::bessel_series(nu, z);
  if (z >= bessel_asymptotic_switch(nu)) return detail::bessel_asymptotic(nu, z);
  return detail::bessel_miller(nu, z);
}

/// z^{-nu} J_nu(z), regular at z = 0.
inline double bessel_j_scaled(double nu, double z) {
  if (z <= bessel_series_switch) return detail::bessel_scaled_series(nu, z);
  return bessel_j(nu, z) * std::exp(-nu * std::log(z));
}

}  // namespace ldspec
