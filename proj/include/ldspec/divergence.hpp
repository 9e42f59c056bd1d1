#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "numeric.hpp"

namespace ldspec {

enum class Status { Member, NonMember, Indeterminate };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Member: return "Member";
    case Status::NonMember: return "NonMember";
    case Status::Indeterminate: return "Indeterminate";
  }
  return "?";
}

/// One point of a partial-sum trace: window size (count or cutoff) and S.
struct PartialSum {
  double n;
  double s;
};

struct MembershipVerdict {
  Status status = Status::Indeterminate;
  std::optional<double> norm_estimate;         // sqrt of the (extrapolated) sum
  std::optional<double> divergence_exponent;   // fitted log-log slope of S_N
  std::optional<double> tail_exponent;         // fitted slope of block increments
  std::vector<PartialSum> partial_sums;
  std::string diagnostic;
};

/// Shared convergence test for spectral series and windowed integrals.
///
/// The slope of log S against log N over the last `fit_points` windows
/// detects growth; the slope q of the dyadic block increments
/// S_N - S_{N/2} detects a decaying tail (q ~ 1 - p for terms n^{-p}).
struct DivergencePolicy {
  int min_exp = 4;
  int max_exp = 14;
  int fit_points = 5;
  double diverge_slope = 0.05;
  double converge_slope = 0.005;
  double converge_rel_increment = 1e-8;
  double tail_decay = -0.05;   // increments shrink at least this fast => convergent tail
  double tail_flat = -0.02;    // increments flatter than this => growth is genuine

  std::vector<double> windows() const {
    std::vector<double> w;
    for (int e = min_exp; e <= max_exp; ++e) w.push_back(std::ldexp(1.0, e));
    return w;
  }
};

/// True once the last two windows changed the partial sum by less than `rel`
/// of its value; used to stop window refinement early.
inline bool settled(const std::vector<PartialSum>& trace, double rel = 1e-12) {
  const std::size_t n = trace.size();
  if (n < 3) return false;
  const double last = trace[n - 1].s;
  return std::abs(last - trace[n - 2].s) <= rel * std::abs(last) &&
         std::abs(trace[n - 2].s - trace[n - 3].s) <= rel * std::abs(last) * 1e3;
}

inline MembershipVerdict classify(std::vector<PartialSum> trace, const DivergencePolicy& pol) {
  MembershipVerdict v;
  v.partial_sums = trace;
  const int n = int(trace.size());
  if (n < pol.fit_points) {
    v.diagnostic = "too few truncation points for slope fit";
    return v;
  }
  const double last = trace.back().s;
  if (!std::isfinite(last)) {
    v.status = Status::NonMember;
    v.divergence_exponent = INFINITY;
    v.diagnostic = "non-finite partial sum";
    return v;
  }
  if (last <= 0.0) {
    v.status = Status::Member;
    v.norm_estimate = 0.0;
    v.diagnostic = "identically zero";
    return v;
  }
  std::vector<double> lx, ly;
  for (int i = n - pol.fit_points; i < n; ++i) {
    if (trace[std::size_t(i)].s <= 0.0) continue;
    lx.push_back(std::log(trace[std::size_t(i)].n));
    ly.push_back(std::log(trace[std::size_t(i)].s));
  }
  double slope = lx.size() >= 2 ? ls_slope(lx, ly) : 0.0;
  v.divergence_exponent = slope;
  const double prev = trace[std::size_t(n - 2)].s;
  const double rel_inc = (last - prev) / last;

  // block increments over the last fit_points windows
  std::optional<double> q;
  double last_inc = last - prev;
  bool negligible = true;
  if (n >= pol.fit_points + 1) {
    std::vector<double> bx, by;
    for (int i = n - pol.fit_points; i < n; ++i) {
      double d = trace[std::size_t(i)].s - trace[std::size_t(i - 1)].s;
      if (std::abs(d) > 1e-14 * last) negligible = false;
      if (d > 0) {
        bx.push_back(std::log(trace[std::size_t(i)].n));
        by.push_back(std::log(d));
      }
    }
    if (!negligible && bx.size() >= 3) q = ls_slope(bx, by);
  }
  if (q) v.tail_exponent = *q;

  if (slope < pol.converge_slope && rel_inc < pol.converge_rel_increment) {
    v.status = Status::Member;
    v.norm_estimate = std::sqrt(last);
    v.diagnostic = "stable partial sums";
    return v;
  }
  if (negligible && n >= pol.fit_points + 1) {
    v.status = Status::Member;
    v.norm_estimate = std::sqrt(last);
    v.diagnostic = "tail increments negligible";
    return v;
  }
  const double prev_inc = prev - trace[std::size_t(n - 3)].s;
  if (q && *q < pol.tail_decay && last_inc <= prev_inc) {
    // geometric extrapolation of the dyadic increments
    double ratio = std::pow(2.0, *q);
    double tail = last_inc > 0 ? last_inc * ratio / (1.0 - ratio) : 0.0;
    v.status = Status::Member;
    v.norm_estimate = std::sqrt(last + tail);
    v.diagnostic = "decaying tail increments";
    return v;
  }
  if (slope > pol.diverge_slope && (!q || *q > pol.tail_flat)) {
    v.status = Status::NonMember;
    v.diagnostic = "partial sums grow";
    return v;
  }
  v.diagnostic = "slope fit inconclusive";
  return v;
}

}  // namespace ldspec
