#pragma once

/**
 * @file cli.hpp
 * @brief Commands behind the ndoppe executable.
 *
 * Each command takes parsed options and writes to caller-supplied streams,
 * so the same code paths are exercised by the tests and by tools/ndoppe.cpp.
 *
 * Output formats (stable):
 *   fit, JSON     {"model": {"r", "coefficients"}, "n", "t", "mean",
 *                  "theta_mle", "nll_mle", "nll_umvue",
 *                  "table": [{"x", "observed", "mle_pmf", "umvue_pmf",
 *                             "mle_cdf", "umvue_cdf",
 *                             "umvue_cdf_unshifted"}, ...]}
 *   fit, CSV      x,observed,mle_pmf,umvue_pmf,mle_cdf,umvue_cdf
 *   mse-study     estimator,target,n,mse,std_error,exact_mse
 *                 (exact_mse is the UMVUE MSE given a nonzero sample total,
 *                 matching the redraw rule of the simulation)
 *   pmf-table     x,pmf,cdf
 *   simulate      one count per line
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ndoppe/dataset.hpp"
#include "ndoppe/errors.hpp"
#include "ndoppe/estimate.hpp"
#include "ndoppe/model.hpp"
#include "ndoppe/risk.hpp"
#include "ndoppe/sampler.hpp"

namespace ndoppe::cli {

/// Usage errors: bad flag values or combinations.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// "1,0.5,2" -> {1, 0.5, 2}
inline std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item(text.substr(pos, comma - pos));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
    if (used != item.size()) throw UsageError("not a number: '" + item + "'");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

inline std::vector<std::int64_t> parse_int_list(std::string_view text) {
  std::vector<std::int64_t> out;
  for (const double v : parse_real_list(text)) {
    if (v != static_cast<double>(static_cast<std::int64_t>(v)))
      throw UsageError("not an integer: " + format_number(v));
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

/// Model from the --r and --coeffs flags. Without --coeffs the NDL default
/// (1, 1) is used, or r ones when only --r is given.
inline ModelSpec make_model(std::optional<int> r, const std::optional<std::string>& coeffs) {
  std::vector<double> a;
  if (coeffs) {
    a = parse_real_list(*coeffs);
    if (r && *r != static_cast<int>(a.size()))
      throw UsageError("--r " + std::to_string(*r) + " does not match " +
                       std::to_string(a.size()) + " coefficients");
  } else if (r) {
    if (*r < 1) throw UsageError("--r must be at least 1");
    a.assign(static_cast<std::size_t>(*r), 1.0);
  } else {
    a = {1.0, 1.0};
  }
  try {
    return ModelSpec(std::move(a));
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitRow {
  std::int64_t x = 0;
  double observed = 0.0;
  double mle_pmf = 0.0;
  double umvue_pmf = 0.0;
  double mle_cdf = 0.0;
  double umvue_cdf = 0.0;
  double umvue_cdf_unshifted = 0.0;
};

struct FitReport {
  ModelSpec model = ModelSpec::ndl();
  std::int64_t n = 0;
  std::int64_t t = 0;
  double mean = 0.0;
  double theta_mle = 0.0;
  double nll_mle = 0.0;
  double nll_umvue = 0.0;
  std::vector<FitRow> table;
};

/// Fits the model to a sample: MLE of theta, plug-in and UMVUE PMF/CDF on
/// [0, x_max], and the negative log-likelihood under both PMF estimates.
/// x_max < 0 means the largest observation.
inline FitReport fit(const Sample& sample, const ModelSpec& model, std::int64_t x_max = -1) {
  FitReport rep;
  rep.model = model;
  rep.n = sample.size();
  rep.t = sample.total();
  rep.mean = sample.mean();

  const Theta theta = mle_theta(sample, model);
  rep.theta_mle = theta.value();
  rep.nll_mle = -log_likelihood(sample, [&](std::int64_t x) { return pmf(x, theta, model); });

  const UmvueEstimator est(model, rep.n);
  const LogWeight la = est.log_a(rep.t);
  rep.nll_umvue = -log_likelihood(
      sample, [&](std::int64_t x) { return std::exp(est.log_pmf(x, rep.t, la)); });

  if (x_max < 0) {
    x_max = 0;
    for (const auto v : sample.values()) x_max = std::max(x_max, v);
  }
  std::map<std::int64_t, std::int64_t> counts;
  for (const auto v : sample.values()) ++counts[v];

  double umvue_cum = 0.0;
  for (std::int64_t x = 0; x <= x_max; ++x) {
    FitRow row;
    row.x = x;
    const auto it = counts.find(x);
    row.observed = it == counts.end() ? 0.0
                                      : static_cast<double>(it->second) / static_cast<double>(rep.n);
    row.mle_pmf = pmf(x, theta, model);
    row.mle_cdf = cdf(x, theta, model);
    row.umvue_pmf = std::exp(est.log_pmf(x, rep.t, la));
    umvue_cum += row.umvue_pmf;
    row.umvue_cdf = x >= rep.t ? 1.0 : std::min(umvue_cum, 1.0);
    row.umvue_cdf_unshifted = est.cdf_unshifted(x, rep.t);
    rep.table.push_back(row);
  }
  return rep;
}

inline nlohmann::ordered_json to_json(const FitReport& rep) {
  nlohmann::ordered_json j;
  j["model"] = {{"r", rep.model.order()}, {"coefficients", rep.model.coefficients()}};
  j["n"] = rep.n;
  j["t"] = rep.t;
  j["mean"] = rep.mean;
  j["theta_mle"] = rep.theta_mle;
  j["nll_mle"] = rep.nll_mle;
  j["nll_umvue"] = rep.nll_umvue;
  auto table = nlohmann::ordered_json::array();
  for (const auto& r : rep.table) {
    table.push_back({{"x", r.x},
                     {"observed", r.observed},
                     {"mle_pmf", r.mle_pmf},
                     {"umvue_pmf", r.umvue_pmf},
                     {"mle_cdf", r.mle_cdf},
                     {"umvue_cdf", r.umvue_cdf},
                     {"umvue_cdf_unshifted", r.umvue_cdf_unshifted}});
  }
  j["table"] = std::move(table);
  return j;
}

inline void write_fit_json(const FitReport& rep, std::ostream& out) {
  out << to_json(rep).dump(2) << '\n';
}

inline void write_fit_csv(const FitReport& rep, std::ostream& out) {
  out << "x,observed,mle_pmf,umvue_pmf,mle_cdf,umvue_cdf\n";
  for (const auto& r : rep.table) {
    out << r.x << ',' << format_number(r.observed) << ',' << format_number(r.mle_pmf) << ','
        << format_number(r.umvue_pmf) << ',' << format_number(r.mle_cdf) << ','
        << format_number(r.umvue_cdf) << '\n';
  }
}

enum class Format { json, csv };

inline Format parse_format(std::string_view s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw UsageError("--format must be json or csv");
}

inline Sample read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset '" + path + "'");
  return parse_dataset(in);
}

inline FitReport cmd_fit(const std::string& dataset_path, const ModelSpec& model,
                         std::int64_t x_max, Format format, std::ostream& out) {
  const FitReport rep = fit(read_dataset_file(dataset_path), model, x_max);
  if (format == Format::json)
    write_fit_json(rep, out);
  else
    write_fit_csv(rep, out);
  return rep;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

/// Writes n draws, one per line, from stream (seed, 0).
inline void cmd_simulate(std::int64_t n, const Theta& theta, const ModelSpec& model,
                         std::uint64_t seed, std::ostream& out) {
  if (n < 1) throw UsageError("--n must be at least 1");
  SeededStream stream(seed, 0);
  const Sample s = sample(n, theta, model, stream);
  for (const auto v : s.values()) out << v << '\n';
  if (!out) throw std::runtime_error("write failed");
}

// ---------------------------------------------------------------------------
// mse-study
// ---------------------------------------------------------------------------

struct MseStudyOutput {
  MseStudyResult study;
  /// Exact UMVUE MSE given T > 0 per sample size (PMF, CDF); empty unless
  /// requested.
  std::vector<std::pair<double, double>> exact;
};

inline MseStudyOutput cmd_mse_study(const MseStudyConfig& config, bool include_exact,
                                    std::ostream& out, std::ostream& log) {
  if (config.replications == 1)
    log << "warning: a single replication gives no standard error; std_error is reported as 0\n";
  MseStudyOutput res;
  res.study = mc_mse_study(config);
  if (res.study.redraws > 0)
    log << "note: " << res.study.redraws << " all-zero samples were redrawn\n";

  if (include_exact) {
    for (const auto n : config.sample_sizes)
      res.exact.push_back(
          umvue_mse_given_positive_total(config.x, n, config.theta, config.model));
  }

  out << "estimator,target,n,mse,std_error,exact_mse\n";
  for (const auto& curve : res.study.curves) {
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      const auto& p = curve.points[i];
      out << to_string(curve.estimator) << ',' << to_string(curve.target) << ',' << p.n << ','
          << format_number(p.mse) << ',' << format_number(p.std_error) << ',';
      if (include_exact && curve.estimator == Estimator::umvue)
        out << format_number(curve.target == Target::pmf ? res.exact[i].first
                                                         : res.exact[i].second);
      out << '\n';
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// pmf-table
// ---------------------------------------------------------------------------

inline void cmd_pmf_table(const Theta& theta, const ModelSpec& model, std::int64_t x_max,
                          std::ostream& out) {
  if (x_max < 0) throw UsageError("--x-max must be nonnegative");
  out << "x,pmf,cdf\n";
  for (std::int64_t x = 0; x <= x_max; ++x)
    out << x << ',' << format_number(pmf(x, theta, model)) << ','
        << format_number(cdf(x, theta, model)) << '\n';
}

}  // namespace ndoppe::cli
