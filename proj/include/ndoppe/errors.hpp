#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ndoppe {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed (no bracket, no convergence, cap reached).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sample whose mean is zero; the likelihood is maximized on the boundary.
class DegenerateSampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed dataset input. position is the 1-based token index.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : std::runtime_error("token " + std::to_string(position) + ": " + what),
        position_(position) {}

  [[nodiscard]] std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// An observation was assigned probability zero by the evaluated PMF.
class ZeroProbabilityError : public std::runtime_error {
 public:
  explicit ZeroProbabilityError(std::int64_t x)
      : std::runtime_error("observation x = " + std::to_string(x) + " has zero probability"),
        x_(x) {}

  [[nodiscard]] std::int64_t value() const noexcept { return x_; }

 private:
  std::int64_t x_;
};

}  // namespace ndoppe
