#pragma once

/**
 * @file risk.hpp
 * @brief Mean squared error of the PMF/CDF estimators.
 *
 * The UMVUE is unbiased, so its MSE is a variance and can be summed exactly
 * over the distribution of the sufficient statistic T. The plug-in MLE has
 * no closed-form MSE; both estimators are compared by simulation in
 * mc_mse_study.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "ndoppe/errors.hpp"
#include "ndoppe/estimate.hpp"
#include "ndoppe/model.hpp"
#include "ndoppe/sampler.hpp"

namespace ndoppe {

struct SeriesOptions {
  /// Stop once the remaining T-tail mass is provably below this.
  double tail_tolerance = default_tail_tolerance;
  std::int64_t max_terms = default_series_cap;
};

/// First and second moments of f_hat(x) and F_hat(x) under the sampling law.
struct UmvueMoments {
  double pmf_mean = 0.0;
  double pmf_second = 0.0;
  double cdf_mean = 0.0;
  double cdf_second = 0.0;
  /// Last t included in the series.
  std::int64_t last_t = 0;
};

/// Exact moments of the UMVUE at x by summation over t.
///
/// F_hat(x | t) = 1 for every t <= x, so the series starts at t = 0; terms
/// with t < x contribute nothing to the PMF moments.
inline UmvueMoments umvue_moments(std::int64_t x, const UmvueEstimator& est, const Theta& theta,
                                  const SeriesOptions& opt = {}) {
  if (x < 0) throw DomainError("umvue_moments: x must be nonnegative");
  const ModelSpec& model = est.model();
  const double n_log_h = static_cast<double>(est.n()) * log_normalizer(theta, model);
  const double log_q = theta.log_complement();
  const std::int64_t max_shape = static_cast<std::int64_t>(model.order()) * est.n();

  CompensatedSum m1, m2, c1, c2;
  for (std::int64_t t = 0; t < opt.max_terms; ++t) {
    const LogWeight la = est.log_a(t);
    const double ft = std::exp(n_log_h + static_cast<double>(t) * log_q + la);
    if (t >= x) {
      const double fhat = std::exp(est.log_pmf(x, t, la));
      m1.add(fhat * ft);
      m2.add(fhat * fhat * ft);
    }
    const double cfhat = est.cdf(x, t, la);
    c1.add(cfhat * ft);
    c2.add(cfhat * cfhat * ft);
    if (nb_mixture_tail_bound(ft, t, max_shape, theta) < opt.tail_tolerance)
      return {m1.value(), m2.value(), c1.value(), c2.value(), t};
  }
  throw NumericError("umvue_moments: series cap of " + std::to_string(opt.max_terms) +
                     " terms reached before the T-tail fell below " +
                     std::to_string(opt.tail_tolerance));
}

/// MSE (= variance) of the UMVUE of f(x) for samples of size n.
inline double umvue_pmf_mse(std::int64_t x, std::int64_t n, const Theta& theta,
                            const ModelSpec& model, const SeriesOptions& opt = {}) {
  const UmvueEstimator est(model, n);
  const auto mom = umvue_moments(x, est, theta, opt);
  const double f = pmf(x, theta, model);
  return std::max(0.0, mom.pmf_second - f * f);
}

/// MSE (= variance) of the UMVUE of F(x) for samples of size n.
inline double umvue_cdf_mse(std::int64_t x, std::int64_t n, const Theta& theta,
                            const ModelSpec& model, const SeriesOptions& opt = {}) {
  const UmvueEstimator est(model, n);
  const auto mom = umvue_moments(x, est, theta, opt);
  const double F = cdf(x, theta, model);
  return std::max(0.0, mom.cdf_second - F * F);
}

/// UMVUE MSE of (f_hat(x), F_hat(x)) conditional on T > 0, the quantities
/// estimated by mc_mse_study (which redraws all-zero samples). At T = 0 the
/// estimates are f_hat(x | 0) = 1{x = 0} and F_hat(x | 0) = 1.
inline std::pair<double, double> umvue_mse_given_positive_total(std::int64_t x, std::int64_t n,
                                                                const Theta& theta,
                                                                const ModelSpec& model,
                                                                const SeriesOptions& opt = {}) {
  const UmvueEstimator est(model, n);
  const auto mom = umvue_moments(x, est, theta, opt);
  const double f = pmf(x, theta, model);
  const double F = cdf(x, theta, model);
  const double p0 = std::exp(static_cast<double>(n) * log_pmf(0, theta, model));
  const double d_pmf = (x == 0 ? 1.0 : 0.0) - f;
  const double d_cdf = 1.0 - F;
  return {std::max(0.0, (mom.pmf_second - f * f - p0 * d_pmf * d_pmf) / (1.0 - p0)),
          std::max(0.0, (mom.cdf_second - F * F - p0 * d_cdf * d_cdf) / (1.0 - p0))};
}

// ---------------------------------------------------------------------------
// Monte Carlo study
// ---------------------------------------------------------------------------

enum class Estimator { mle, umvue };
enum class Target { pmf, cdf };

inline std::string_view to_string(Estimator e) { return e == Estimator::mle ? "MLE" : "UMVUE"; }
inline std::string_view to_string(Target t) { return t == Target::pmf ? "PMF" : "CDF"; }

struct MseStudyConfig {
  ModelSpec model = ModelSpec::ndl();
  Theta theta{0.01};
  std::int64_t x = 2;
  std::vector<std::int64_t> sample_sizes{25, 50, 100, 200, 400};
  std::int64_t replications = 1000;
  std::uint64_t master_seed = 20190101;
  /// Worker threads; 0 picks the hardware concurrency. Results do not
  /// depend on this value.
  unsigned threads = 0;

  void validate() const {
    if (replications < 1) throw DomainError("replications must be at least 1");
    if (sample_sizes.empty()) throw DomainError("at least one sample size is required");
    for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
      if (sample_sizes[i] < 1) throw DomainError("sample sizes must be positive");
      if (i > 0 && sample_sizes[i] <= sample_sizes[i - 1])
        throw DomainError("sample sizes must be strictly increasing");
    }
    if (x < 0) throw DomainError("evaluation point x must be nonnegative");
  }
};

struct MsePoint {
  std::int64_t n = 0;
  double mse = 0.0;
  /// Standard deviation of the squared deviations over sqrt(N).
  double std_error = 0.0;
  double mean_estimate = 0.0;
  double bias = 0.0;
  /// Standard deviation of the estimates over sqrt(N).
  double bias_std_error = 0.0;
};

struct MseCurve {
  Estimator estimator;
  Target target;
  std::vector<MsePoint> points;
};

struct MseStudyResult {
  /// MLE/PMF, MLE/CDF, UMVUE/PMF, UMVUE/CDF.
  std::vector<MseCurve> curves;
  double true_pmf = 0.0;
  double true_cdf = 0.0;
  /// Replications redrawn because the sample was all zeros.
  std::int64_t redraws = 0;

  [[nodiscard]] const MseCurve& curve(Estimator e, Target t) const {
    for (const auto& c : curves)
      if (c.estimator == e && c.target == t) return c;
    throw DomainError("no such curve");
  }
};

namespace detail {

struct ReplicationOutcome {
  double mle_pmf = 0.0;
  double mle_cdf = 0.0;
  double umvue_pmf = 0.0;
  double umvue_cdf = 0.0;
  int redraws = 0;
};

// Welford accumulation of estimates and of their squared deviations.
class PointAccumulator {
 public:
  explicit PointAccumulator(double truth) : truth_(truth) {}

  void add(double estimate) {
    ++count_;
    const double c = static_cast<double>(count_);
    const double d2 = (estimate - truth_) * (estimate - truth_);
    const double de = estimate - est_mean_;
    est_mean_ += de / c;
    est_m2_ += de * (estimate - est_mean_);
    const double dd = d2 - sq_mean_;
    sq_mean_ += dd / c;
    sq_m2_ += dd * (d2 - sq_mean_);
  }

  [[nodiscard]] MsePoint finish(std::int64_t n) const {
    MsePoint p;
    p.n = n;
    p.mse = sq_mean_;
    p.mean_estimate = est_mean_;
    p.bias = est_mean_ - truth_;
    if (count_ > 1) {
      const double c = static_cast<double>(count_);
      p.std_error = std::sqrt(sq_m2_ / (c - 1.0)) / std::sqrt(c);
      p.bias_std_error = std::sqrt(est_m2_ / (c - 1.0)) / std::sqrt(c);
    }
    return p;
  }

 private:
  double truth_;
  std::int64_t count_ = 0;
  double est_mean_ = 0.0;
  double est_m2_ = 0.0;
  double sq_mean_ = 0.0;
  double sq_m2_ = 0.0;
};

}  // namespace detail

/// Simulated MSE of the plug-in MLE and of the UMVUE of f(x) and F(x).
///
/// Replication i at every sample size draws from SeededStream(master_seed,
/// i); both estimators are evaluated on the same sample. An all-zero sample
/// is redrawn from stream i + j N on attempt j. Replications run on worker
/// threads but are reduced in index order, so results are identical for any
/// thread count.
inline MseStudyResult mc_mse_study(const MseStudyConfig& config) {
  config.validate();
  const auto& model = config.model;
  const Theta theta = config.theta;
  const std::int64_t x = config.x;
  const auto reps = config.replications;
  const auto weights = mixture_weights(theta, model);

  MseStudyResult result;
  result.true_pmf = pmf(x, theta, model);
  result.true_cdf = cdf(x, theta, model);
  result.curves = {{Estimator::mle, Target::pmf, {}},
                   {Estimator::mle, Target::cdf, {}},
                   {Estimator::umvue, Target::pmf, {}},
                   {Estimator::umvue, Target::cdf, {}}};

  unsigned workers = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(std::min<std::int64_t>(reps, 256)));

  for (const std::int64_t n : config.sample_sizes) {
    const UmvueEstimator est(model, n);
    std::vector<detail::ReplicationOutcome> outcomes(static_cast<std::size_t>(reps));

    auto run_range = [&](std::int64_t begin, std::int64_t end) {
      std::vector<std::int64_t> values(static_cast<std::size_t>(n));
      for (std::int64_t i = begin; i < end; ++i) {
        detail::ReplicationOutcome out;
        std::int64_t total = 0;
        for (std::int64_t attempt = 0;; ++attempt) {
          SeededStream stream(config.master_seed, static_cast<std::uint64_t>(i + attempt * reps));
          total = 0;
          for (auto& v : values) {
            v = sample_one(weights, theta, stream);
            total += v;
          }
          if (total > 0) break;
          ++out.redraws;
        }
        const Sample s(values);
        const Theta mle = mle_theta(s, model);
        out.mle_pmf = pmf(x, mle, model);
        out.mle_cdf = cdf(x, mle, model);
        const LogWeight la = est.log_a(total);
        out.umvue_pmf = std::exp(est.log_pmf(x, total, la));
        out.umvue_cdf = est.cdf(x, total, la);
        outcomes[static_cast<std::size_t>(i)] = out;
      }
    };

    if (workers == 1) {
      run_range(0, reps);
    } else {
      const std::int64_t chunk = (reps + workers - 1) / workers;
      std::vector<std::exception_ptr> errors(workers);
      {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
          const std::int64_t b = static_cast<std::int64_t>(w) * chunk;
          const std::int64_t e = std::min(reps, b + chunk);
          if (b >= e) break;
          pool.emplace_back([&, w, b, e] {
            try {
              run_range(b, e);
            } catch (...) {
              errors[w] = std::current_exception();
            }
          });
        }
      }
      for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
    }

    detail::PointAccumulator mp(result.true_pmf), mc(result.true_cdf), up(result.true_pmf),
        uc(result.true_cdf);
    for (const auto& o : outcomes) {
      mp.add(o.mle_pmf);
      mc.add(o.mle_cdf);
      up.add(o.umvue_pmf);
      uc.add(o.umvue_cdf);
      result.redraws += o.redraws;
    }
    result.curves[0].points.push_back(mp.finish(n));
    result.curves[1].points.push_back(mc.finish(n));
    result.curves[2].points.push_back(up.finish(n));
    result.curves[3].points.push_back(uc.finish(n));
  }
  return result;
}

}  // namespace ndoppe
