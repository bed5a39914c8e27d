#pragma once

/**
 * @file sampler.hpp
 * @brief Seeded NDOPPE variate generation.
 *
 * A draw first picks the mixture component k by inversion of the
 * cumulative mixture weights, then draws NB(k, theta) as the sum of k
 * geometric variates, each by inversion floor(ln U / ln(1 - theta)).
 *
 * Uniforms come from std::mt19937_64 seeded through std::seed_seq with the
 * (seed, stream_index) words. Both algorithms are fully specified by the
 * C++ standard, and the uniform is formed from the top 53 bits by hand
 * rather than via std::uniform_real_distribution (whose output is
 * implementation-defined), so streams are identical across platforms.
 */

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ndoppe/errors.hpp"
#include "ndoppe/model.hpp"
#include "ndoppe/sample.hpp"

namespace ndoppe {

class SeededStream {
 public:
  SeededStream(std::uint64_t seed, std::uint64_t stream_index)
      : seed_(seed), stream_index_(stream_index), engine_(make_engine(seed, stream_index)) {}

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream_index() const noexcept { return stream_index_; }

  /// Raw 64-bit engine output.
  std::uint64_t next_bits() { return engine_(); }

  /// Uniform on the open interval (0, 1): (j + 1/2) / 2^53.
  double uniform() {
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 0.5) * scale;
  }

 private:
  static std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32), 0x6e646f70u};
    return std::mt19937_64(seq);
  }

  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

/// Component k in [1, r] with W_{k-1} < u <= W_k, W the cumulative mixture
/// weights.
inline int sample_component(double u, const std::vector<double>& weights) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("sample_component: u must lie in (0, 1)");
  double cumulative = 0.0;
  const int r = static_cast<int>(weights.size());
  for (int k = 1; k <= r; ++k) {
    cumulative += weights[static_cast<std::size_t>(k - 1)];
    if (u <= cumulative && weights[static_cast<std::size_t>(k - 1)] > 0.0) return k;
  }
  // Rounding left the total just below u; fall back to the last live component.
  for (int k = r; k >= 1; --k)
    if (weights[static_cast<std::size_t>(k - 1)] > 0.0) return k;
  return r;
}

inline int sample_component(double u, const Theta& theta, const ModelSpec& model) {
  return sample_component(u, mixture_weights(theta, model));
}

/// Geometric draw on {0, 1, ...}: failures before the first success.
inline std::int64_t sample_geometric(const Theta& theta, SeededStream& stream) {
  return static_cast<std::int64_t>(std::floor(std::log(stream.uniform()) / theta.log_complement()));
}

/// NB(k, theta) draw as a sum of k geometric draws.
inline std::int64_t sample_nb(int k, const Theta& theta, SeededStream& stream) {
  if (k < 1) throw DomainError("sample_nb: k must be at least 1");
  std::int64_t total = 0;
  for (int i = 0; i < k; ++i) total += sample_geometric(theta, stream);
  return total;
}

/// A single NDOPPE draw, with the component weights precomputed.
inline std::int64_t sample_one(const std::vector<double>& weights, const Theta& theta,
                               SeededStream& stream) {
  const int k = sample_component(stream.uniform(), weights);
  return sample_nb(k, theta, stream);
}

/// n independent NDOPPE draws.
inline Sample sample(std::int64_t n, const Theta& theta, const ModelSpec& model,
                     SeededStream& stream) {
  if (n < 1) throw DomainError("sample: n must be at least 1");
  const auto weights = mixture_weights(theta, model);
  std::vector<std::int64_t> values;
  values.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) values.push_back(sample_one(weights, theta, stream));
  return Sample(std::move(values));
}

}  // namespace ndoppe
