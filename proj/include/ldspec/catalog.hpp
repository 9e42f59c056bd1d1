#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "jet.hpp"
#include "numeric.hpp"

namespace ldspec {

enum class SupportKind { Compact, WholeLine, HalfLine };
enum class DecayKind { Gaussian, Exponential, Polynomial, Compact, None };

inline const char* to_string(SupportKind s) {
  switch (s) {
    case SupportKind::Compact: return "compact";
    case SupportKind::WholeLine: return "whole-line";
    case SupportKind::HalfLine: return "half-line";
  }
  return "?";
}

inline const char* to_string(DecayKind d) {
  switch (d) {
    case DecayKind::Gaussian: return "gaussian";
    case DecayKind::Exponential: return "exponential";
    case DecayKind::Polynomial: return "polynomial";
    case DecayKind::Compact: return "compact";
    case DecayKind::None: return "none";
  }
  return "?";
}

inline constexpr int kSmooth = 1000;  // smoothness value standing for C^infinity

using Jet5 = Jet<5>;

/// An analytic test function with the metadata the quadrature routines need.
///
/// `smoothness` is the regularity class at the listed breakpoints (-1 for a
/// jump, k for C^k); between breakpoints every catalog entry is C^infinity.
/// `lo`/`hi` bound the support (infinite ends for whole-line or half-line
/// functions); `bulk_lo`/`bulk_hi` enclose the region where the function is
/// non-negligible (|f| below ~1e-16 of its peak outside, for fast decay) or,
/// for slowly decaying functions, where its structure lives.
struct TestFunction {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  std::function<cplx(double)> value;
  std::function<cplx(int, double)> derivative;  // empty if unavailable
  int max_derivative = 0;
  SupportKind support = SupportKind::WholeLine;
  double lo = -INFINITY, hi = INFINITY;
  int smoothness = kSmooth;
  DecayKind decay = DecayKind::None;
  double decay_rate = 0.0;  // polynomial exponent p of |f| ~ |x|^{-p}, or exponential rate
  double bulk_lo = -1.0, bulk_hi = 1.0;
  double scale = 1.0;  // characteristic length of features
  std::vector<double> breakpoints;
  std::function<cplx(double)> fourier;  // unitary transform with kernel e^{-i xi x}/sqrt(2 pi), if known

  cplx operator()(double x) const { return value(x); }

  cplx deriv(int k, double x) const {
    if (k == 0) return value(x);
    require(derivative && k <= max_derivative, ErrorKind::Capability,
            "function '" + name + "' has no derivative of order " + std::to_string(k));
    return derivative(k, x);
  }

  bool has_fourier() const { return static_cast<bool>(fourier); }

  bool square_integrable() const {
    switch (decay) {
      case DecayKind::Gaussian:
      case DecayKind::Exponential:
      case DecayKind::Compact: return true;
      case DecayKind::Polynomial: return decay_rate > 0.5;
      case DecayKind::None: return false;
    }
    return false;
  }

  /// Breakpoints lying strictly inside (a, b) where the function is not C^k.
  bool kink_inside(double a, double b, int k) const {
    if (smoothness >= k) return false;
    for (double p : breakpoints)
      if (p > a + 1e-14 * (1 + std::abs(a)) && p < b - 1e-14 * (1 + std::abs(b))) return true;
    return false;
  }

  std::string spec() const { return nlohmann::json{{"fn", name}, {"params", params}}.dump(); }
};

namespace detail {

inline double re(cplx z) { return z.real(); }
template <int N>
double re(const Jet<N>& j) {
  return j.c[0].real();
}

/// Wraps a generic formula F(T) (T = cplx or Jet5) into value/derivative callables.
template <class F>
void install(TestFunction& tf, F formula) {
  tf.value = [formula](double x) { return cplx(formula(cplx(x))); };
  tf.derivative = [formula](int k, double x) {
    Jet5 j = formula(Jet5::variable(x));
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return j.c[std::size_t(k)] * fact;
  };
  tf.max_derivative = 4;
}

template <class T>
T hermite_fn(const T& x, int m) {
  // orthonormal Hermite function u_m by the normalised three-term recurrence
  T prev(0.0);
  T cur = exp(-0.5 * (x * x)) * T(std::pow(pi, -0.25));
  for (int k = 0; k < m; ++k) {
    T next = T(std::sqrt(2.0 / (k + 1))) * x * cur - T(std::sqrt(double(k) / (k + 1))) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

template <class T>
T hermite_poly_normalized(const T& x, int m) {
  // K_m = u_m e^{x^2/2}
  T prev(0.0);
  T cur(std::pow(pi, -0.25));
  for (int k = 0; k < m; ++k) {
    T next = T(std::sqrt(2.0 / (k + 1))) * x * cur - T(std::sqrt(double(k) / (k + 1))) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Probabilists' Hermite polynomial He_k.
inline double hermite_he(int k, double x) {
  double a = 1.0, b = x;
  if (k == 0) return a;
  for (int i = 1; i < k; ++i) {
    double c = x * b - i * a;
    a = b;
    b = c;
  }
  return b;
}

inline double param(const nlohmann::json& p, const char* key, double def) {
  if (!p.contains(key)) return def;
  const auto& v = p.at(key);
  require(v.is_number(), ErrorKind::Usage, std::string("catalog parameter '") + key + "' must be a number");
  double d = v.get<double>();
  require(std::isfinite(d), ErrorKind::Usage, std::string("catalog parameter '") + key + "' must be finite");
  return d;
}

inline int int_param(const nlohmann::json& p, const char* key, int def, int lo, int hi) {
  double d = param(p, key, def);
  require(d == std::floor(d) && d >= lo && d <= hi, ErrorKind::Usage,
          std::string("catalog parameter '") + key + "' must be an integer in [" + std::to_string(lo) + ", " +
              std::to_string(hi) + "]");
  return int(d);
}

inline double sinc(double t) { return std::abs(t) < 1e-8 ? 1.0 - t * t / 6.0 : std::sin(t) / t; }

/// (e^{-i xi a} - e^{-i xi b}) / (i xi), the transform of an indicator up to 1/sqrt(2 pi).
inline cplx indicator_transform(double a, double b, double xi) {
  double h = 0.5 * (b - a), c = 0.5 * (a + b);
  return std::polar(2.0 * h * sinc(xi * h), -xi * c);
}

struct Entry {
  std::vector<std::pair<std::string, double>> defaults;
  std::function<TestFunction(const nlohmann::json&)> make;
};

inline const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> reg = [] {
    std::map<std::string, Entry> r;
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi);

    r["const"] = {{{"c", 1.0}}, [](const nlohmann::json& p) {
                    TestFunction f;
                    double c = param(p, "c", 1.0);
                    install(f, [c](auto x) { return decltype(x)(c) + 0.0 * x; });
                    f.decay = DecayKind::None;
                    f.bulk_lo = 0;
                    f.bulk_hi = 2 * pi;
                    return f;
                  }};

    r["hat"] = {{{"a", 0.0}, {"b", 2 * pi}}, [inv_sqrt_2pi](const nlohmann::json& p) {
                  TestFunction f;
                  double a = param(p, "a", 0.0), b = param(p, "b", 2 * pi);
                  require(b > a, ErrorKind::Usage, "hat: need a < b");
                  double c = 0.5 * (a + b), h = 0.5 * (b - a);
                  install(f, [a, b, c, h](auto x) {
                    using T = decltype(x);
                    double xr = re(x);
                    if (xr <= a || xr >= b) return T(0.0);
                    return xr < c ? (x - T(a)) / T(h) : (T(b) - x) / T(h);
                  });
                  f.support = SupportKind::Compact;
                  f.lo = f.bulk_lo = a;
                  f.hi = f.bulk_hi = b;
                  f.smoothness = 0;
                  f.decay = DecayKind::Compact;
                  f.breakpoints = {a, c, b};
                  f.scale = h;
                  f.fourier = [c, h, inv_sqrt_2pi](double xi) {
                    double s = sinc(0.5 * xi * h);
                    return std::polar(inv_sqrt_2pi * h * s * s, -xi * c);
                  };
                  return f;
                }};

    r["box"] = {{{"a", 0.0}, {"b", 1.0}}, [inv_sqrt_2pi](const nlohmann::json& p) {
                  TestFunction f;
                  double a = param(p, "a", 0.0), b = param(p, "b", 1.0);
                  require(b > a, ErrorKind::Usage, "box: need a < b");
                  install(f, [a, b](auto x) {
                    using T = decltype(x);
                    double xr = re(x);
                    return (xr >= a && xr <= b) ? T(1.0) + 0.0 * x : T(0.0);
                  });
                  f.support = SupportKind::Compact;
                  f.lo = f.bulk_lo = a;
                  f.hi = f.bulk_hi = b;
                  f.smoothness = -1;
                  f.decay = DecayKind::Compact;
                  f.breakpoints = {a, b};
                  f.scale = b - a;
                  f.fourier = [a, b, inv_sqrt_2pi](double xi) { return inv_sqrt_2pi * indicator_transform(a, b, xi); };
                  return f;
                }};

    r["gauss"] = {{{"mu", 0.0}, {"sigma", 1.0}}, [](const nlohmann::json& p) {
                    TestFunction f;
                    double mu = param(p, "mu", 0.0), sigma = param(p, "sigma", 1.0);
                    require(sigma > 0, ErrorKind::Usage, "gauss: sigma must be positive");
                    install(f, [mu, sigma](auto x) {
                      using T = decltype(x);
                      T d = (x - T(mu)) / T(sigma);
                      return exp(-0.5 * (d * d));
                    });
                    f.decay = DecayKind::Gaussian;
                    f.bulk_lo = mu - 9 * sigma;
                    f.bulk_hi = mu + 9 * sigma;
                    f.scale = sigma;
                    f.fourier = [mu, sigma](double xi) {
                      return std::polar(sigma * std::exp(-0.5 * sigma * sigma * xi * xi), -xi * mu);
                    };
                    return f;
                  }};

    r["half-gauss"] = {{{"sigma", 1.0}}, [](const nlohmann::json& p) {
                         TestFunction f;
                         double sigma = param(p, "sigma", 1.0);
                         require(sigma > 0, ErrorKind::Usage, "half-gauss: sigma must be positive");
                         install(f, [sigma](auto x) {
                           using T = decltype(x);
                           if (re(x) < 0) return T(0.0);
                           T d = x / T(sigma);
                           return exp(-0.5 * (d * d));
                         });
                         f.support = SupportKind::HalfLine;
                         f.lo = 0;
                         f.decay = DecayKind::Gaussian;
                         f.bulk_lo = 0;
                         f.bulk_hi = 9 * sigma;
                         f.smoothness = -1;
                         f.breakpoints = {0.0};
                         f.scale = sigma;
                         return f;
                       }};

    r["gauss-x"] = {{{"k", 1.0}}, [](const nlohmann::json& p) {
                      TestFunction f;
                      int k = int_param(p, "k", 1, 0, 12);
                      install(f, [k](auto x) {
                        using T = decltype(x);
                        T v = exp(-0.5 * (x * x));
                        for (int i = 0; i < k; ++i) v = v * x;
                        return v;
                      });
                      f.decay = DecayKind::Gaussian;
                      f.bulk_lo = -12;
                      f.bulk_hi = 12;
                      f.fourier = [k](double xi) {
                        static const cplx mi[4] = {cplx(1, 0), cplx(0, -1), cplx(-1, 0), cplx(0, 1)};
                        return mi[k % 4] * hermite_he(k, xi) * std::exp(-0.5 * xi * xi);
                      };
                      return f;
                    }};

    r["hermite"] = {{{"m", 0.0}}, [](const nlohmann::json& p) {
                      TestFunction f;
                      int m = int_param(p, "m", 0, 0, 200);
                      install(f, [m](auto x) { return hermite_fn(x, m); });
                      f.decay = DecayKind::Gaussian;
                      double turn = std::sqrt(2.0 * m + 1.0);
                      f.bulk_lo = -turn - 10;
                      f.bulk_hi = turn + 10;
                      f.scale = 1.0 / std::sqrt(2.0 * m + 1.0);
                      f.fourier = [m](double xi) {
                        static const cplx mi[4] = {cplx(1, 0), cplx(0, -1), cplx(-1, 0), cplx(0, 1)};
                        return mi[m % 4] * hermite_fn(cplx(xi), m);
                      };
                      return f;
                    }};

    r["hermite-poly"] = {{{"m", 0.0}}, [](const nlohmann::json& p) {
                           TestFunction f;
                           int m = int_param(p, "m", 0, 0, 200);
                           install(f, [m](auto x) { return hermite_poly_normalized(x, m); });
                           f.decay = DecayKind::None;
                           f.bulk_lo = -std::sqrt(2.0 * m + 1.0) - 2;
                           f.bulk_hi = -f.bulk_lo;
                           return f;
                         }};

    r["power"] = {{{"p", 1.0}}, [](const nlohmann::json& p) {
                    TestFunction f;
                    double q = param(p, "p", 1.0);
                    require(q > 0, ErrorKind::Usage, "power: p must be positive");
                    install(f, [q](auto x) {
                      using T = decltype(x);
                      return pow(T(1.0) + x * x, -0.5 * q);
                    });
                    f.decay = DecayKind::Polynomial;
                    f.decay_rate = q;
                    f.bulk_lo = -4;
                    f.bulk_hi = 4;
                    if (q == 2.0) f.fourier = [](double xi) { return cplx(std::sqrt(pi / 2) * std::exp(-std::abs(xi))); };
                    return f;
                  }};

    r["abs-exp"] = {{{"a", 1.0}}, [](const nlohmann::json& p) {
                      TestFunction f;
                      double a = param(p, "a", 1.0);
                      require(a > 0, ErrorKind::Usage, "abs-exp: a must be positive");
                      install(f, [a](auto x) {
                        using T = decltype(x);
                        return re(x) >= 0 ? exp(T(-a) * x) : exp(T(a) * x);
                      });
                      f.decay = DecayKind::Exponential;
                      f.decay_rate = a;
                      f.bulk_lo = -40.0 / a;
                      f.bulk_hi = 40.0 / a;
                      f.smoothness = 0;
                      f.breakpoints = {0.0};
                      f.scale = 1.0 / a;
                      f.fourier = [a](double xi) { return cplx(std::sqrt(2.0 / pi) * a / (a * a + xi * xi)); };
                      return f;
                    }};

    r["fourier-mode"] = {{{"n", 0.0}, {"phi", 0.0}}, [](const nlohmann::json& p) {
                           TestFunction f;
                           int n = int_param(p, "n", 0, -100000, 100000);
                           double phi = param(p, "phi", 0.0);
                           double k = n - phi / (2 * pi);
                           install(f, [k](auto x) {
                             using T = decltype(x);
                             double xr = re(x);
                             if (xr < 0 || xr > 2 * pi) return T(0.0);
                             T arg = T(cplx(0.0, k)) * x;
                             return T(1.0 / std::sqrt(2 * pi)) * exp(arg);
                           });
                           f.support = SupportKind::Compact;
                           f.lo = f.bulk_lo = 0;
                           f.hi = f.bulk_hi = 2 * pi;
                           f.smoothness = -1;
                           f.decay = DecayKind::Compact;
                           f.breakpoints = {0.0, 2 * pi};
                           f.fourier = [k](double xi) {
                             double w = k - xi;
                             // (2 pi)^{-1} int_0^{2 pi} e^{i w x} dx
                             return std::polar(sinc(pi * w), pi * w);
                           };
                           return f;
                         }};

    r["bump"] = {{{"lo", 0.0}, {"hi", 1.0}}, [](const nlohmann::json& p) {
                   TestFunction f;
                   double a = param(p, "lo", 0.0), b = param(p, "hi", 1.0);
                   require(b > a, ErrorKind::Usage, "bump: need lo < hi");
                   double c = 0.5 * (a + b), h = 0.5 * (b - a);
                   install(f, [c, h](auto x) {
                     using T = decltype(x);
                     T t = (x - T(c)) / T(h);
                     double tr = re(t);
                     if (tr <= -1 || tr >= 1) return T(0.0);
                     return exp(T(1.0) - T(1.0) / (T(1.0) - t * t));
                   });
                   f.support = SupportKind::Compact;
                   f.lo = f.bulk_lo = a;
                   f.hi = f.bulk_hi = b;
                   f.decay = DecayKind::Compact;
                   f.breakpoints = {a, b};
                   f.scale = h;
                   return f;
                 }};

    r["wave-packet"] = {{{"omega", 4.0}, {"lo", 0.0}, {"hi", 8.0}}, [](const nlohmann::json& p) {
                          TestFunction f;
                          double w = param(p, "omega", 4.0), a = param(p, "lo", 0.0), b = param(p, "hi", 8.0);
                          require(b > a, ErrorKind::Usage, "wave-packet: need lo < hi");
                          double c = 0.5 * (a + b), h = 0.5 * (b - a);
                          install(f, [w, c, h](auto x) {
                            using T = decltype(x);
                            T t = (x - T(c)) / T(h);
                            double tr = re(t);
                            if (tr <= -1 || tr >= 1) return T(0.0);
                            return sin(T(w) * x) * exp(T(1.0) - T(1.0) / (T(1.0) - t * t));
                          });
                          f.support = SupportKind::Compact;
                          f.lo = f.bulk_lo = a;
                          f.hi = f.bulk_hi = b;
                          f.decay = DecayKind::Compact;
                          f.breakpoints = {a, b};
                          f.scale = std::min(h, 1.0 / (1.0 + std::abs(w)));
                          return f;
                        }};

    r["monomial"] = {{{"k", 1.0}}, [](const nlohmann::json& p) {
                       TestFunction f;
                       int k = int_param(p, "k", 1, 0, 20);
                       install(f, [k](auto x) {
                         using T = decltype(x);
                         T v(1.0);
                         for (int i = 0; i < k; ++i) v = v * x;
                         return v;
                       });
                       f.decay = DecayKind::None;
                       f.bulk_lo = 0;
                       f.bulk_hi = 2 * pi;
                       return f;
                     }};

    r["sine"] = {{{"k", 1.0}}, [](const nlohmann::json& p) {
                   TestFunction f;
                   double k = param(p, "k", 1.0);
                   install(f, [k](auto x) {
                     using T = decltype(x);
                     return sin(T(k) * x);
                   });
                   f.decay = DecayKind::None;
                   f.bulk_lo = 0;
                   f.bulk_hi = 2 * pi;
                   f.scale = 1.0 / std::max(1.0, std::abs(k));
                   return f;
                 }};
    return r;
  }();
  return reg;
}

}  // namespace detail

inline std::vector<std::string> catalog_names() {
  std::vector<std::string> v;
  for (const auto& [k, e] : detail::registry()) v.push_back(k);
  return v;
}

/// Checks each available derivative against a Richardson-extrapolated central
/// difference of the next lower order at deterministic sample points away
/// from breakpoints; returns the largest relative mismatch.
inline double derivative_mismatch(const TestFunction& f, std::uint64_t seed = 0x5eed, int points = 10) {
  if (!f.derivative) return 0.0;
  SplitMix64 rng(seed);
  double lo = std::isfinite(f.lo) ? f.lo : f.bulk_lo, hi = std::isfinite(f.hi) ? f.hi : f.bulk_hi;
  const double h = 1e-3 * std::max(1e-3, std::min(1.0, f.scale));
  double worst = 0.0;
  int done = 0;
  for (int attempt = 0; attempt < 50 * points && done < points; ++attempt) {
    double x = rng.uniform(lo, hi);
    bool near = false;
    for (double b : f.breakpoints) near = near || std::abs(x - b) < 8 * h;
    if (near) continue;
    ++done;
    for (int k = 1; k <= f.max_derivative; ++k) {
      auto d1 = (f.deriv(k - 1, x + h) - f.deriv(k - 1, x - h)) / (2 * h);
      auto d2 = (f.deriv(k - 1, x + 2 * h) - f.deriv(k - 1, x - 2 * h)) / (4 * h);
      cplx fd = (4.0 * d1 - d2) / 3.0;
      cplx ex = f.deriv(k, x);
      double mag = std::max({std::abs(ex), std::abs(f.deriv(k - 1, x)) / f.scale, 1e-3});
      worst = std::max(worst, std::abs(fd - ex) / mag);
    }
  }
  return worst;
}

inline TestFunction make_function(const std::string& name, const nlohmann::json& params = nlohmann::json::object()) {
  const auto& reg = detail::registry();
  auto it = reg.find(name);
  if (it == reg.end()) {
    std::string known;
    for (const auto& [k, e] : reg) known += (known.empty() ? "" : ", ") + k;
    fail(ErrorKind::Usage, "unknown catalog function '" + name + "' (known: " + known + ")");
  }
  require(params.is_object(), ErrorKind::Usage, "catalog parameters must be a JSON object");
  for (const auto& [key, v] : params.items()) {
    bool known = false;
    for (const auto& d : it->second.defaults) known = known || d.first == key;
    require(known, ErrorKind::Usage, "catalog function '" + name + "' has no parameter '" + key + "'");
  }
  TestFunction f = it->second.make(params);
  f.name = name;
  nlohmann::json full = nlohmann::json::object();
  for (const auto& [k, d] : it->second.defaults) full[k] = params.contains(k) ? params.at(k).get<double>() : d;
  f.params = full;
  require(derivative_mismatch(f) < 1e-5, ErrorKind::Capability,
          "catalog function '" + name + "': derivative data disagree with finite differences");
  return f;
}

inline TestFunction function_from_json(const nlohmann::json& j) {
  require(j.is_object() && j.contains("fn") && j.at("fn").is_string(), ErrorKind::Usage,
          "function JSON must look like {\"fn\": name, \"params\": {...}}");
  return make_function(j.at("fn").get<std::string>(), j.value("params", nlohmann::json::object()));
}

/// Parses `name`, `name(v1,v2)` (positional, in declaration order) or
/// `name(key=v,...)`; a leading '{' is read as JSON.
inline TestFunction parse_function(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  require(!s.empty(), ErrorKind::Usage, "empty function spec");
  if (s.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::Usage, std::string("function spec is not valid JSON: ") + e.what());
    }
    return function_from_json(j);
  }
  auto open = s.find('(');
  std::string name = s.substr(0, open);
  nlohmann::json params = nlohmann::json::object();
  if (open != std::string::npos) {
    require(s.back() == ')', ErrorKind::Usage, "function spec: missing ')'");
    std::string inner = s.substr(open + 1, s.size() - open - 2);
    const auto& reg = detail::registry();
    auto it = reg.find(name);
    require(it != reg.end(), ErrorKind::Usage, "unknown catalog function '" + name + "'");
    std::stringstream ss(inner);
    std::string item;
    std::size_t pos = 0;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      std::string key;
      std::string val = item;
      auto eq = item.find('=');
      if (eq != std::string::npos) {
        key = item.substr(0, eq);
        val = item.substr(eq + 1);
      } else {
        require(pos < it->second.defaults.size(), ErrorKind::Usage, "too many parameters for '" + name + "'");
        key = it->second.defaults[pos].first;
      }
      ++pos;
      double d = 0;
      try {
        std::size_t used = 0;
        d = std::stod(val, &used);
        require(used == val.size(), ErrorKind::Usage, "bad number '" + val + "'");
      } catch (const std::logic_error&) {
        fail(ErrorKind::Usage, "bad number '" + val + "' in function spec");
      }
      params[key] = d;
    }
  }
  return make_function(name, params);
}

/// f(x / h).
inline TestFunction dilate(const TestFunction& f, double h) {
  require(h > 0, ErrorKind::Usage, "dilate: h must be positive");
  TestFunction g = f;
  g.name = f.name + "/dilated";
  g.params["dilation"] = h;
  g.value = [f, h](double x) { return f.value(x / h); };
  if (f.derivative)
    g.derivative = [f, h](int k, double x) { return f.derivative(k, x / h) * std::pow(h, -k); };
  auto sc = [h](double v) { return v * h; };
  g.lo = sc(f.lo);
  g.hi = sc(f.hi);
  g.bulk_lo = sc(f.bulk_lo);
  g.bulk_hi = sc(f.bulk_hi);
  g.scale = f.scale * h;
  g.decay_rate = f.decay == DecayKind::Exponential ? f.decay_rate / h : f.decay_rate;
  for (auto& b : g.breakpoints) b *= h;
  if (f.fourier) g.fourier = [f, h](double xi) { return h * f.fourier(h * xi); };
  return g;
}

/// The k-th derivative as a function in its own right (piecewise between breakpoints).
inline TestFunction derivative(const TestFunction& f, int k) {
  require(k >= 0, ErrorKind::Usage, "derivative order must be >= 0");
  if (k == 0) return f;
  require(f.derivative && k <= f.max_derivative, ErrorKind::Capability,
          "function '" + f.name + "' has no derivative of order " + std::to_string(k));
  TestFunction g = f;
  g.name = f.name + "'" + std::to_string(k);
  g.params["derivative"] = k;
  g.value = [f, k](double x) { return f.derivative(k, x); };
  g.max_derivative = f.max_derivative - k;
  if (g.max_derivative > 0)
    g.derivative = [f, k](int j, double x) { return f.derivative(k + j, x); };
  else
    g.derivative = nullptr;
  g.smoothness = f.smoothness >= kSmooth ? kSmooth : f.smoothness - k;
  if (f.decay == DecayKind::Polynomial) g.decay_rate = f.decay_rate + k;
  if (f.fourier) {
    g.fourier = [f, k](double xi) { return std::pow(cplx(0.0, xi), k) * f.fourier(xi); };
    if (f.smoothness < k - 1) g.fourier = nullptr;  // distributional parts not represented
  }
  return g;
}

}  // namespace ldspec
