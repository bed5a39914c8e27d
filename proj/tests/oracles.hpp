#pragma once

// Reference computations for the tests. Nothing here calls into the
// library's numerics: probabilities come from direct recurrences, exact
// integers from boost::multiprecision, and composition sums from explicit
// enumeration.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using boost::multiprecision::cpp_int;

inline cpp_int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  cpp_int r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

/// NB(k, theta) PMF on x = 0..x_max by the ratio recurrence
/// f(x + 1) = f(x) (x + k)(1 - theta)/(x + 1).
inline std::vector<double> nb_pmf_table(int k, double theta, int x_max) {
  std::vector<double> f(static_cast<std::size_t>(x_max) + 1);
  f[0] = std::pow(theta, k);
  for (int x = 0; x < x_max; ++x) f[x + 1] = f[x] * (x + k) * (1.0 - theta) / (x + 1);
  return f;
}

/// Mixture weights proportional to a_{k-1} (k-1)! / theta^k.
inline std::vector<double> weights(const std::vector<double>& a, double theta) {
  std::vector<double> w(a.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    w[i] = a[i] * factorial(static_cast<int>(i)) / std::pow(theta, static_cast<double>(i + 1));
    s += w[i];
  }
  for (auto& v : w) v /= s;
  return w;
}

/// NDOPPE PMF table through the NB-mixture representation.
inline std::vector<double> pmf_table(const std::vector<double>& a, double theta, int x_max) {
  const auto w = weights(a, theta);
  std::vector<double> f(static_cast<std::size_t>(x_max) + 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto nb = nb_pmf_table(static_cast<int>(i + 1), theta, x_max);
    for (int x = 0; x <= x_max; ++x) f[x] += w[i] * nb[x];
  }
  return f;
}

inline double ndl_pmf(int x, double theta) {
  return theta * theta / (1.0 + theta) * (2.0 + x) * std::pow(1.0 - theta, x);
}

/// NDL CDF, P(X <= x) = 1 - (1 + 2 theta + theta x)(1 - theta)^{x+1} / (1 + theta).
inline double ndl_cdf(int x, double theta) {
  return 1.0 - (1.0 + 2.0 * theta + theta * x) * std::pow(1.0 - theta, x + 1) / (1.0 + theta);
}

inline double geometric_pmf(int x, double theta) { return theta * std::pow(1.0 - theta, x); }
inline double geometric_cdf(int x, double theta) { return 1.0 - std::pow(1.0 - theta, x + 1); }

/// Discrete convolution truncated to [0, x_max].
inline std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t len = std::min(a.size(), b.size());
  std::vector<double> c(len, 0.0);
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = 0; i + j < len; ++j) c[i + j] += a[i] * b[j];
  return c;
}

/// PMF of the sum of n iid draws on [0, x_max].
inline std::vector<double> n_fold(const std::vector<double>& f, int n) {
  std::vector<double> r = f;
  for (int i = 1; i < n; ++i) r = convolve(r, f);
  return r;
}

/// P(X_1 = x | T = t) = f(x) f_{n-1}(t - x) / f_n(t), by convolution.
inline double conditional(const std::vector<double>& f, int n, int x, int t) {
  if (x > t) return 0.0;
  const auto fn = n_fold(f, n);
  if (n == 1) return x == t ? 1.0 : 0.0;
  const auto fn1 = n_fold(f, n - 1);
  return f[x] * fn1[t - x] / fn[t];
}

/// Sum over compositions (y_1..y_r) of n of c(n, y) = n!/prod y_k! prod
/// (a_{k-1}(k-1)!)^{y_k}, grouped by m = sum k y_k. Exact for integer a.
inline std::map<int, cpp_int> composition_sums(int n, const std::vector<int>& a) {
  const int r = static_cast<int>(a.size());
  std::map<int, cpp_int> out;
  std::vector<int> y(r, 0);
  std::function<void(int, int)> rec = [&](int k, int left) {
    if (k == r - 1) {
      y[k] = left;
      cpp_int c = 1;
      for (int i = 1; i <= n; ++i) c *= i;
      int m = 0;
      for (int j = 0; j < r; ++j) {
        for (int i = 2; i <= y[j]; ++i) c /= i;
        cpp_int base = a[j];
        for (int i = 1; i <= j; ++i) base *= i;  // a_{j} * j!
        for (int i = 0; i < y[j]; ++i) c *= base;
        m += (j + 1) * y[j];
      }
      out[m] += c;
      return;
    }
    for (int v = 0; v <= left; ++v) {
      y[k] = v;
      rec(k + 1, left - v);
    }
  };
  rec(0, n);
  return out;
}

/// ln of the NDL closed form A_n(t) = sum_k C(n, k) C(2n - k + t - 1, t).
inline double ndl_log_a(int n, int t) {
  double peak = -INFINITY;
  std::vector<double> terms;
  for (int k = 0; k <= n; ++k) {
    const double v = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                     std::lgamma(2.0 * n - k + t) - std::lgamma(t + 1.0) -
                     std::lgamma(2.0 * n - k);
    terms.push_back(v);
    peak = std::max(peak, v);
  }
  double s = 0.0;
  for (const double v : terms) s += std::exp(v - peak);
  return peak + std::log(s);
}

/// NDL UMVUE of f(w) in closed form,
/// (2 + w) sum_k C(n-1, k) C(2(n-1) - k + t - w - 1, t - w) / A_n(t).
inline double ndl_umvue_pmf(int n, int t, int w) {
  if (w > t) return 0.0;
  auto lbin = [](double up, double lo) -> double {
    if (lo == 0) return 0.0;
    if (up < lo) return -INFINITY;
    return std::lgamma(up + 1.0) - std::lgamma(lo + 1.0) - std::lgamma(up - lo + 1.0);
  };
  double s = 0.0;
  const double la = ndl_log_a(n, t);
  for (int k = 0; k <= n - 1; ++k)
    s += std::exp(lbin(n - 1, k) + lbin(2.0 * (n - 1) - k + t - w - 1, t - w) - la);
  return (2.0 + w) * s;
}

}  // namespace oracle
