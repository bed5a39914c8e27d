#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ndoppe/errors.hpp"

namespace ndoppe {

/// Observed nonnegative counts with their size n and sum t (the sufficient
/// statistic).
class Sample {
 public:
  explicit Sample(std::vector<std::int64_t> values) : values_(std::move(values)) {
    if (values_.empty()) throw DomainError("a sample needs at least one observation");
    for (const auto v : values_) {
      if (v < 0) throw DomainError("sample values must be nonnegative");
      total_ += v;
    }
  }

  [[nodiscard]] std::span<const std::int64_t> values() const noexcept { return values_; }
  [[nodiscard]] std::int64_t size() const noexcept {
    return static_cast<std::int64_t>(values_.size());
  }
  [[nodiscard]] std::int64_t total() const noexcept { return total_; }
  [[nodiscard]] double mean() const noexcept {
    return static_cast<double>(total_) / static_cast<double>(values_.size());
  }

  friend bool operator==(const Sample&, const Sample&) = default;

 private:
  std::vector<std::int64_t> values_;
  std::int64_t total_ = 0;
};

/// (n, t) pair on which the UMVUE depends.
struct SufficientStat {
  std::int64_t n;
  std::int64_t t;

  static SufficientStat of(const Sample& s) { return {s.size(), s.total()}; }
};

}  // namespace ndoppe
