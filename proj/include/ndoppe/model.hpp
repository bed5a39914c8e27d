#pragma once

/**
 * @file model.hpp
 * @brief The natural discrete one-parameter polynomial exponential family.
 *
 * A model of order r with coefficients a_0..a_{r-1} has PMF
 *
 *   f(x) = h(theta) p(x) (1 - theta)^x,                x = 0, 1, ...
 *   p(x) = sum_k a_{k-1} (k-1)! C(x + k - 1, x),
 *   1 / h(theta) = sum_k a_{k-1} (k-1)! / theta^k,
 *
 * which is the mixture over k = 1..r of NB(k, theta) (failures before the
 * k-th success) with weights proportional to a_{k-1} (k-1)! / theta^k.
 * r = 1, a = (1) is the geometric law; r = 2, a = (1, 1) is the natural
 * discrete Lindley (NDL) law.
 */

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ndoppe/errors.hpp"
#include "ndoppe/specfun.hpp"

namespace ndoppe {

/// Success probability of the mixture components, strictly inside (0, 1).
class Theta {
 public:
  explicit Theta(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0))
      throw DomainError("theta must lie in (0, 1), got " + std::to_string(value));
  }

  [[nodiscard]] double value() const noexcept { return value_; }
  [[nodiscard]] double log_value() const { return std::log(value_); }
  /// ln(1 - theta)
  [[nodiscard]] double log_complement() const { return std::log1p(-value_); }

  friend bool operator==(const Theta&, const Theta&) = default;

 private:
  double value_;
};

/// Family order r and the coefficient vector (a_0, ..., a_{r-1}).
class ModelSpec {
 public:
  explicit ModelSpec(std::vector<double> coefficients) : coefficients_(std::move(coefficients)) {
    if (coefficients_.empty()) throw DomainError("model order r must be at least 1");
    bool any_positive = false;
    for (const double a : coefficients_) {
      if (!(a >= 0.0) || std::isinf(a))
        throw DomainError("model coefficients must be finite and nonnegative");
      any_positive = any_positive || a > 0.0;
    }
    if (!any_positive) throw DomainError("at least one model coefficient must be positive");
    if (coefficients_.back() == 0.0)
      throw DomainError("trailing zero coefficient: a_{r-1} must be positive");

    log_component_.reserve(coefficients_.size());
    for (std::size_t i = 0; i < coefficients_.size(); ++i) {
      const double a = coefficients_[i];
      log_component_.push_back(a > 0.0 ? std::log(a) + log_gamma(static_cast<double>(i + 1))
                                       : log_zero);
    }
  }

  ModelSpec(std::initializer_list<double> coefficients)
      : ModelSpec(std::vector<double>(coefficients)) {}

  /// Geometric law, r = 1.
  static ModelSpec geometric() { return ModelSpec{1.0}; }
  /// Natural discrete Lindley law, r = 2, a = (1, 1).
  static ModelSpec ndl() { return ModelSpec{1.0, 1.0}; }

  [[nodiscard]] int order() const noexcept { return static_cast<int>(coefficients_.size()); }
  [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return coefficients_; }

  /// ln(a_{k-1} (k-1)!) for k = 1..r, stored at index k-1. These are the
  /// coefficients of the generating polynomial g(z) = sum_k a_{k-1} (k-1)! z^k.
  [[nodiscard]] const std::vector<LogWeight>& log_component_coefficients() const noexcept {
    return log_component_;
  }

  friend bool operator==(const ModelSpec& l, const ModelSpec& r) {
    return l.coefficients_ == r.coefficients_;
  }

 private:
  std::vector<double> coefficients_;
  std::vector<LogWeight> log_component_;
};

/// Unnormalized log mixture weights ln(a_{k-1} (k-1)! / theta^k), k = 1..r.
inline std::vector<LogWeight> log_mixture_terms(const Theta& theta, const ModelSpec& model) {
  const auto& lc = model.log_component_coefficients();
  std::vector<LogWeight> terms(lc.size());
  const double lt = theta.log_value();
  for (std::size_t i = 0; i < lc.size(); ++i)
    terms[i] = lc[i] == log_zero ? log_zero : lc[i] - static_cast<double>(i + 1) * lt;
  return terms;
}

/// ln h(theta)
inline double log_normalizer(const Theta& theta, const ModelSpec& model) {
  return -log_sum_exp(log_mixture_terms(theta, model));
}

/// h(theta) = 1 / sum_k a_{k-1} (k-1)! / theta^k
inline double normalizer(const Theta& theta, const ModelSpec& model) {
  return std::exp(log_normalizer(theta, model));
}

/// ln p(x), p(x) = sum_k a_{k-1} (k-1)! C(x + k - 1, x).
inline LogWeight log_weight_poly(std::int64_t x, const ModelSpec& model) {
  if (x < 0) throw DomainError("weight_poly: x must be nonnegative");
  LogSumAccumulator acc;
  const auto& lc = model.log_component_coefficients();
  for (std::size_t i = 0; i < lc.size(); ++i) {
    if (lc[i] == log_zero) continue;
    const auto k = static_cast<std::int64_t>(i + 1);
    acc.add(lc[i] + log_binomial(x + k - 1, x));
  }
  return acc.value();
}

/// Mixture weights of NB(k, theta), k = 1..r (index k-1). Sum to one.
inline std::vector<double> mixture_weights(const Theta& theta, const ModelSpec& model) {
  auto terms = log_mixture_terms(theta, model);
  const double lse = log_sum_exp(terms);
  std::vector<double> w(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) w[i] = std::exp(terms[i] - lse);
  return w;
}

inline double log_pmf(std::int64_t x, const Theta& theta, const ModelSpec& model) {
  if (x < 0) return log_zero;
  return log_normalizer(theta, model) + log_weight_poly(x, model) +
         static_cast<double>(x) * theta.log_complement();
}

inline double pmf(std::int64_t x, const Theta& theta, const ModelSpec& model) {
  return std::exp(log_pmf(x, theta, model));
}

/// P(X <= x) = sum_k w_k I_theta(k, x + 1).
inline double cdf(std::int64_t x, const Theta& theta, const ModelSpec& model) {
  if (x < 0) return 0.0;
  const auto w = mixture_weights(theta, model);
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    total += w[i] * reg_inc_beta(static_cast<double>(i + 1), static_cast<double>(x) + 1.0,
                                 theta.value());
  }
  return std::min(total, 1.0);
}

/// E[X] = (1 - theta) / theta * sum_k k w_k.
inline double mean(const Theta& theta, const ModelSpec& model) {
  const auto w = mixture_weights(theta, model);
  double shape = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) shape += static_cast<double>(i + 1) * w[i];
  return (1.0 - theta.value()) / theta.value() * shape;
}

/// Upper bound on sum_{s > t} f(s) for any mixture of NB(m, theta) with
/// m <= max_shape, given the term f(t).
///
/// Each component has f(s+1)/f(s) = (s + m)(1 - theta)/(s + 1), decreasing in
/// s, so the mixture ratio beyond t is at most q = (t + max_shape)(1 - theta)
/// / (t + 1) and the tail is at most f(t) q / (1 - q). Returns +inf while
/// q >= 1 (before the mode).
inline double nb_mixture_tail_bound(double term_at_t, std::int64_t t, std::int64_t max_shape,
                                    const Theta& theta) {
  const double q = static_cast<double>(t + max_shape) * (1.0 - theta.value()) /
                   static_cast<double>(t + 1);
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  return term_at_t * q / (1.0 - q);
}

inline constexpr double default_tail_tolerance = 1e-12;
inline constexpr std::int64_t default_series_cap = 10'000'000;

/// Smallest X* such that the mass beyond X* is below tol. Throws
/// NumericError when the cap is reached first.
inline std::int64_t support_limit(const Theta& theta, const ModelSpec& model,
                                  double tol = default_tail_tolerance,
                                  std::int64_t cap = default_series_cap) {
  for (std::int64_t x = 0; x < cap; ++x) {
    if (nb_mixture_tail_bound(pmf(x, theta, model), x, model.order(), theta) < tol) return x;
  }
  throw NumericError("support_limit: series cap of " + std::to_string(cap) + " terms reached");
}

}  // namespace ndoppe
