#pragma once

/**
 * @file estimate.hpp
 * @brief Maximum-likelihood and UMVUE estimation for NDOPPE samples.
 *
 * The UMVUE side rests on the generating polynomial
 *
 *   g(z) = sum_{k=1}^r a_{k-1} (k-1)! z^k.
 *
 * Expanding g(z)^n multinomially groups the per-composition weights
 * c(n, y_1..y_r) = n!/(y_1!..y_r!) prod (a_{k-1}(k-1)!)^{y_k} by their total
 * degree m = sum k y_k, so every sum over compositions collapses to a sum
 * over m in [n, r n] against the coefficients of g^n. With
 *
 *   A_n(t) = sum_m [z^m] g(z)^n C(t + m - 1, t)
 *
 * the sum T of n draws has P(T = t) = h(theta)^n (1 - theta)^t A_n(t) and
 * the conditional law of X_1 given T = t is p(x) A_{n-1}(t - x) / A_n(t),
 * free of theta. That conditional PMF is the UMVUE of f(x); its cumulative
 * sum is the UMVUE of F(x).
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ndoppe/errors.hpp"
#include "ndoppe/model.hpp"
#include "ndoppe/sample.hpp"
#include "ndoppe/specfun.hpp"

namespace ndoppe {

// ---------------------------------------------------------------------------
// Maximum likelihood
// ---------------------------------------------------------------------------

struct RootSearchOptions {
  double lower = 1e-9;
  double upper = 1.0 - 1e-9;
  /// Stop once |mean(theta) - xbar| <= tolerance * max(1, xbar).
  double tolerance = 1e-13;
  int max_iterations = 500;
};

/// Solves the score equation mean(theta) = xbar for the MLE of theta.
///
/// mean(theta) is strictly decreasing on (0, 1), so the root is bracketed
/// once the end points straddle xbar. Iterates regula falsi (Illinois
/// variant) with a bisection fallback; bisection is geometric while the
/// bracket spans more than a factor of four.
inline Theta mle_theta(const Sample& sample, const ModelSpec& model,
                       const RootSearchOptions& opt = {}) {
  const double xbar = sample.mean();
  if (xbar == 0.0)
    throw DegenerateSampleError("all observations are zero; the MLE sits on the boundary theta = 1");

  auto score = [&](double th) { return mean(Theta(th), model) - xbar; };
  double lo = opt.lower;
  double hi = opt.upper;
  double f_lo = score(lo);
  double f_hi = score(hi);
  if (!(f_lo > 0.0 && f_hi < 0.0)) {
    std::ostringstream msg;
    msg << "mle_theta: root not bracketed on [" << lo << ", " << hi << "]: mean - xbar = " << f_lo
        << " and " << f_hi << " (xbar = " << xbar << ")";
    throw NumericError(msg.str());
  }

  const double target = opt.tolerance * std::max(1.0, xbar);
  int side = 0;  // which end was retained last, for the Illinois halving
  for (int it = 0; it < opt.max_iterations; ++it) {
    double mid;
    if (hi / lo > 4.0) {
      mid = std::sqrt(lo * hi);
    } else {
      mid = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
      if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    }
    if (mid <= lo || mid >= hi) return Theta(std::abs(f_lo) < std::abs(f_hi) ? lo : hi);

    const double f_mid = score(mid);
    if (std::abs(f_mid) <= target) return Theta(mid);
    if (f_mid > 0.0) {
      lo = mid;
      f_lo = f_mid;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = mid;
      f_hi = f_mid;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      const double a = std::abs(score(lo));
      const double b = std::abs(score(hi));
      return Theta(a < b ? lo : hi);
    }
  }
  throw NumericError("mle_theta: no convergence within the iteration limit");
}

// ---------------------------------------------------------------------------
// Composition sums as polynomial powers
// ---------------------------------------------------------------------------

/// Log-space coefficients of g(z)^n, stored for degrees [n, r n].
struct LogPolyPower {
  std::int64_t n = 0;
  int order = 1;
  std::vector<LogWeight> coeffs;

  [[nodiscard]] std::int64_t min_degree() const noexcept { return n; }
  [[nodiscard]] std::int64_t max_degree() const noexcept { return order * n; }

  /// ln [z^m] g(z)^n; -inf outside [n, r n].
  [[nodiscard]] LogWeight at(std::int64_t m) const {
    if (m < min_degree() || m > max_degree()) return log_zero;
    return coeffs[static_cast<std::size_t>(m - n)];
  }
};

/// g(z)^0 = 1.
inline LogPolyPower log_poly_identity(const ModelSpec& model) {
  return LogPolyPower{0, model.order(), {0.0}};
}

/// Multiplies a power of g by g once, in log space.
inline LogPolyPower log_poly_next(const LogPolyPower& prev, const ModelSpec& model) {
  const auto& g = model.log_component_coefficients();
  const int r = model.order();
  LogPolyPower next{prev.n + 1, r, {}};
  next.coeffs.assign(static_cast<std::size_t>(next.max_degree() - next.min_degree() + 1), log_zero);
  for (std::int64_t m = next.min_degree(); m <= next.max_degree(); ++m) {
    LogSumAccumulator acc;
    for (int k = 1; k <= r; ++k) {
      const LogWeight gk = g[static_cast<std::size_t>(k - 1)];
      if (gk == log_zero) continue;
      const LogWeight pk = prev.at(m - k);
      if (pk == log_zero) continue;
      acc.add(gk + pk);
    }
    next.coeffs[static_cast<std::size_t>(m - next.min_degree())] = acc.value();
  }
  return next;
}

/// Coefficients of g(z)^n by n successive log-space convolutions, O(r^2 n^2).
/// n = 0 is accepted and yields the constant polynomial 1.
inline LogPolyPower log_poly_power_by_convolution(std::int64_t n, const ModelSpec& model) {
  if (n < 0) throw DomainError("log_poly_power: n must be nonnegative");
  LogPolyPower p = log_poly_identity(model);
  for (std::int64_t i = 0; i < n; ++i) p = log_poly_next(p, model);
  return p;
}

/// For r <= 2, g(z) = b1 z + b2 z^2 and
/// [z^(n+j)] g^n = C(n, j) b1^(n-j) b2^j, which is O(n).
inline LogPolyPower log_poly_power_binomial(std::int64_t n, const ModelSpec& model) {
  if (n < 0) throw DomainError("log_poly_power: n must be nonnegative");
  if (model.order() > 2) throw DomainError("log_poly_power_binomial: order must be at most 2");
  const auto& g = model.log_component_coefficients();
  const int r = model.order();
  LogPolyPower p{n, r, {}};
  p.coeffs.assign(static_cast<std::size_t>(p.max_degree() - p.min_degree() + 1), log_zero);
  if (r == 1) {
    p.coeffs[0] = static_cast<double>(n) * g[0];
    return p;
  }
  for (std::int64_t j = 0; j <= n; ++j) {
    const std::int64_t low = n - j;
    if (low > 0 && g[0] == log_zero) continue;
    const double from_low = low > 0 ? static_cast<double>(low) * g[0] : 0.0;
    p.coeffs[static_cast<std::size_t>(j)] =
        log_binomial(n, j) + from_low + static_cast<double>(j) * g[1];
  }
  return p;
}

/// Coefficients of g(z)^n: binomial expansion for r <= 2, repeated
/// convolution otherwise.
inline LogPolyPower log_poly_power(std::int64_t n, const ModelSpec& model) {
  return model.order() <= 2 ? log_poly_power_binomial(n, model)
                            : log_poly_power_by_convolution(n, model);
}

/// ln A_n(t) = ln sum_m [z^m] g^n C(t + m - 1, t), given the power of g.
inline LogWeight log_a_n_t(std::int64_t t, const LogPolyPower& power) {
  if (t < 0) return log_zero;
  LogSumAccumulator acc;
  for (std::int64_t m = power.min_degree(); m <= power.max_degree(); ++m) {
    const LogWeight c = power.at(m);
    if (c == log_zero) continue;
    acc.add(c + log_binomial(t + m - 1, t));
  }
  return acc.value();
}

inline LogWeight a_n_t(std::int64_t n, std::int64_t t, const ModelSpec& model) {
  if (n < 1) throw DomainError("a_n_t: n must be at least 1");
  if (t < 0) throw DomainError("a_n_t: t must be nonnegative");
  return log_a_n_t(t, log_poly_power(n, model));
}

/// ln P(T = t) for T the sum of power.n independent draws.
inline double sum_statistic_log_pmf(std::int64_t t, const LogPolyPower& power, const Theta& theta,
                                    const ModelSpec& model) {
  if (t < 0) return log_zero;
  return static_cast<double>(power.n) * log_normalizer(theta, model) +
         static_cast<double>(t) * theta.log_complement() + log_a_n_t(t, power);
}

inline double sum_statistic_pmf(std::int64_t t, std::int64_t n, const Theta& theta,
                                const ModelSpec& model) {
  if (n < 1) throw DomainError("sum_statistic_pmf: n must be at least 1");
  return std::exp(sum_statistic_log_pmf(t, log_poly_power(n, model), theta, model));
}

// ---------------------------------------------------------------------------
// UMVUE
// ---------------------------------------------------------------------------

/// UMVUE of f(x) and F(x) for a fixed sample size n, holding g^n and
/// g^(n-1) so that repeated evaluation over t and x costs O(r n) per call.
///
/// n = 1 is accepted; the estimator is then the degenerate indicator
/// 1{x = t}.
class UmvueEstimator {
 public:
  UmvueEstimator(ModelSpec model, std::int64_t n)
      : model_(std::move(model)),
        n_(n),
        power_nm1_(n >= 1 ? log_poly_power(n - 1, model_) : LogPolyPower{}),
        power_n_(n < 1                  ? LogPolyPower{}
                 : model_.order() <= 2 ? log_poly_power(n, model_)
                                       : log_poly_next(power_nm1_, model_)) {
    if (n < 1) throw DomainError("UMVUE needs n >= 1");
  }

  [[nodiscard]] std::int64_t n() const noexcept { return n_; }
  [[nodiscard]] const ModelSpec& model() const noexcept { return model_; }
  [[nodiscard]] const LogPolyPower& power_n() const noexcept { return power_n_; }
  [[nodiscard]] const LogPolyPower& power_n_minus_1() const noexcept { return power_nm1_; }

  [[nodiscard]] LogWeight log_a(std::int64_t t) const { return log_a_n_t(t, power_n_); }

  /// ln f_hat(x | t); -inf for x < 0 or x > t.
  [[nodiscard]] double log_pmf(std::int64_t x, std::int64_t t) const {
    return log_pmf(x, t, log_a(t));
  }

  /// Same, with ln A_n(t) supplied by the caller.
  [[nodiscard]] double log_pmf(std::int64_t x, std::int64_t t, LogWeight log_a_t) const {
    if (x < 0 || x > t) return log_zero;
    return log_weight_poly(x, model_) + log_a_n_t(t - x, power_nm1_) - log_a_t;
  }

  [[nodiscard]] double pmf(std::int64_t x, std::int64_t t) const {
    return std::exp(log_pmf(x, t));
  }

  /// F_hat(x | t) = sum_{w <= min(x, t)} f_hat(w | t).
  [[nodiscard]] double cdf(std::int64_t x, std::int64_t t) const { return cdf(x, t, log_a(t)); }

  [[nodiscard]] double cdf(std::int64_t x, std::int64_t t, LogWeight log_a_t) const {
    if (x < 0) return 0.0;
    if (x >= t) return 1.0;
    CompensatedSum s;
    for (std::int64_t w = 0; w <= x; ++w) s.add(std::exp(log_pmf(w, t, log_a_t)));
    return std::min(s.value(), 1.0);
  }

  /// Variant of the CDF estimator using C(t + m - 1, t - w) in place of
  /// C(t - w + m - 1, t - w). It does not reach 1 at x = t and is kept only
  /// for reporting alongside the cumulative form.
  [[nodiscard]] double cdf_unshifted(std::int64_t x, std::int64_t t) const {
    if (x < 0) return 0.0;
    const LogWeight la = log_a(t);
    LogSumAccumulator acc;
    const std::int64_t top = std::min(x, t);
    for (std::int64_t m = power_nm1_.min_degree(); m <= power_nm1_.max_degree(); ++m) {
      const LogWeight c = power_nm1_.at(m);
      if (c == log_zero) continue;
      for (std::int64_t w = 0; w <= top; ++w)
        acc.add(c + log_weight_poly(w, model_) + log_binomial(t + m - 1, t - w));
    }
    return std::exp(acc.value() - la);
  }

 private:
  ModelSpec model_;
  std::int64_t n_;
  LogPolyPower power_nm1_;
  LogPolyPower power_n_;
};

inline double umvue_pmf(std::int64_t x, SufficientStat stat, const ModelSpec& model) {
  return UmvueEstimator(model, stat.n).pmf(x, stat.t);
}

inline double umvue_cdf(std::int64_t x, SufficientStat stat, const ModelSpec& model) {
  return UmvueEstimator(model, stat.n).cdf(x, stat.t);
}

/// P(X_1 = x | T = t) for a sample of size n. Identical to the UMVUE of the
/// PMF; x > t gives 0.
inline double conditional_pmf(std::int64_t x, std::int64_t t, std::int64_t n,
                              const ModelSpec& model) {
  if (x < 0) throw DomainError("conditional_pmf: x must be nonnegative");
  if (t < 0) throw DomainError("conditional_pmf: t must be nonnegative");
  return UmvueEstimator(model, n).pmf(x, t);
}

// ---------------------------------------------------------------------------
// Likelihood
// ---------------------------------------------------------------------------

/// sum_i ln pmf_values(x_i), evaluating pmf_values once per distinct value.
/// Throws ZeroProbabilityError naming the smallest value with zero probability.
inline double log_likelihood(const Sample& sample,
                             const std::function<double(std::int64_t)>& pmf_values) {
  std::map<std::int64_t, std::int64_t> counts;
  for (const auto x : sample.values()) ++counts[x];
  CompensatedSum s;
  for (const auto& [x, c] : counts) {
    const double p = pmf_values(x);
    if (!(p > 0.0)) throw ZeroProbabilityError(x);
    s.add(static_cast<double>(c) * std::log(p));
  }
  return s.value();
}

}  // namespace ndoppe
