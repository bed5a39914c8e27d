#pragma once

/**
 * @file specfun.hpp
 * @brief Log-space special functions shared by the NDOPPE modules.
 *
 * Everything here works on natural logarithms of nonnegative quantities.
 * Exact zero is encoded as negative infinity; NaN is never produced for
 * in-domain arguments.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>

#include "ndoppe/errors.hpp"

namespace ndoppe {

/// Natural logarithm of a nonnegative quantity; -inf encodes zero.
using LogWeight = double;

inline constexpr LogWeight log_zero = -std::numeric_limits<double>::infinity();

namespace detail {

inline constexpr double stirling_threshold = 15.0;

// lgamma(z) - [(z - 1/2) ln z - z + ln(2 pi)/2], asymptotic series, z >= 15.
// The first omitted term is below 1e-19 at z = 15.
inline double stirling_correction(double z) {
  const double r = 1.0 / z;
  const double r2 = r * r;
  return r * (1.0 / 12.0 +
              r2 * (-1.0 / 360.0 +
                    r2 * (1.0 / 1260.0 +
                          r2 * (-1.0 / 1680.0 +
                                r2 * (1.0 / 1188.0 +
                                      r2 * (-691.0 / 360360.0 + r2 * (1.0 / 156.0)))))));
}

inline double log_gamma_stirling(double z) {
  constexpr double half_log_two_pi = 0.91893853320467274178032973640562;
  return (z - 0.5) * std::log(z) - z + half_log_two_pi + stirling_correction(z);
}

}  // namespace detail

/// ln Gamma(z) for z > 0.
///
/// Stirling series for z >= 15; smaller arguments are shifted upward with
/// the recurrence Gamma(z + 1) = z Gamma(z). Thread-safe, unlike glibc's
/// std::lgamma which writes the global signgam.
inline double log_gamma(double z) {
  if (!(z > 0.0) || std::isinf(z))
    throw DomainError("log_gamma: argument must be positive and finite, got " + std::to_string(z));
  if (z == 1.0 || z == 2.0) return 0.0;
  if (z >= detail::stirling_threshold) return detail::log_gamma_stirling(z);

  double product = 1.0;
  double shifted = z;
  while (shifted < detail::stirling_threshold) {
    product *= shifted;
    shifted += 1.0;
  }
  return detail::log_gamma_stirling(shifted) - std::log(product);
}

/// ln Gamma(z + d) - ln Gamma(z) for z > 0, d >= 0.
///
/// When z is large the two log-gammas are of order z ln z and cancel; the
/// difference is then formed from log1p(d / z) directly so that the result
/// keeps full relative accuracy.
inline double log_gamma_ratio(double z, double d) {
  if (!(z > 0.0) || d < 0.0)
    throw DomainError("log_gamma_ratio: need z > 0 and d >= 0");
  if (d == 0.0) return 0.0;
  if (z < detail::stirling_threshold) return log_gamma(z + d) - log_gamma(z);
  const double zd = z + d;
  return (z - 0.5) * std::log1p(d / z) + d * std::log(zd) - d +
         detail::stirling_correction(zd) - detail::stirling_correction(z);
}

/// ln C(upper, lower) with C(a, 0) = 1 for every a >= -1 and C(a, b) = 0
/// when 0 <= a < b.
///
/// upper = -1 only occurs with lower = 0: it is the empty-composition term
/// of the single-observation UMVUE, which must reduce to the indicator
/// 1{x = t}.
inline LogWeight log_binomial(std::int64_t upper, std::int64_t lower) {
  if (lower < 0) throw DomainError("log_binomial: lower index must be nonnegative");
  if (upper < -1) throw DomainError("log_binomial: upper index must be >= -1");
  if (lower == 0) return 0.0;
  if (upper < lower) return log_zero;

  const std::int64_t small = std::min(lower, upper - lower);
  if (small == 0) return 0.0;
  const auto large = static_cast<double>(upper - small);
  // ln C = ln Gamma(upper + 1) - ln Gamma(large + 1) - ln Gamma(small + 1)
  return log_gamma_ratio(large + 1.0, static_cast<double>(small)) -
         log_gamma(static_cast<double>(small) + 1.0);
}

/// ln sum exp(terms), max-shifted. Empty input or all -inf gives -inf.
inline LogWeight log_sum_exp(std::span<const LogWeight> terms) {
  LogWeight peak = log_zero;
  for (const LogWeight v : terms) peak = std::max(peak, v);
  if (peak == log_zero) return log_zero;
  double acc = 0.0;
  for (const LogWeight v : terms) acc += std::exp(v - peak);
  return peak + std::log(acc);
}

/// Streaming accumulator for log_sum_exp when the terms are produced one by
/// one and do not need to be stored.
class LogSumAccumulator {
 public:
  void add(LogWeight v) {
    if (v == log_zero) return;
    if (v <= peak_) {
      acc_ += std::exp(v - peak_);
    } else {
      acc_ = acc_ * std::exp(peak_ - v) + 1.0;
      peak_ = v;
    }
  }

  [[nodiscard]] LogWeight value() const {
    return peak_ == log_zero ? log_zero : peak_ + std::log(acc_);
  }

 private:
  LogWeight peak_ = log_zero;
  double acc_ = 0.0;
};

/// Neumaier-compensated running sum; long probability series lose several
/// digits with naive accumulation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }

  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// ln B(a, b).
inline double log_beta(double a, double b) {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  return log_gamma(lo) - log_gamma_ratio(hi, lo);
}

namespace detail {

// Continued fraction for I_x(a, b), modified Lentz. Converges quickly for
// x < (a + 1) / (a + b + 2).
inline double inc_beta_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  constexpr int max_iter = 100000;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) <= eps) return h;
  }
  throw NumericError("reg_inc_beta: continued fraction did not converge");
}

inline double inc_beta_lower(double a, double b, double x) {
  const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  return std::exp(log_front) * inc_beta_fraction(a, b, x) / a;
}

}  // namespace detail

/// Regularized incomplete beta function I_x(a, b).
///
/// Uses the continued fraction on whichever of (a, b, x) and (b, a, 1 - x)
/// lies below the mean a / (a + b). For integer a, I_p(a, x + 1) is the CDF
/// of the negative binomial NB(a, p) at x.
inline double reg_inc_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0))
    throw DomainError("reg_inc_beta: need a > 0, b > 0, 0 <= x <= 1");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (x <= a / (a + b)) return std::clamp(detail::inc_beta_lower(a, b, x), 0.0, 1.0);
  return std::clamp(1.0 - detail::inc_beta_lower(b, a, 1.0 - x), 0.0, 1.0);
}

}  // namespace ndoppe
