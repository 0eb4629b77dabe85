#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace quotdef {

using Natural = std::uint64_t;

inline constexpr Natural kNaturalMax = std::numeric_limits<Natural>::max();

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An index or argument beyond what a finite table can answer.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// A least-witness search ran past its limit without finding a witness.
class SearchExhausted : public Error {
 public:
  SearchExhausted(const std::string& what, Natural limit, Natural target)
      : Error(what + " (search limit " + std::to_string(limit) + ")"),
        limit_(limit),
        target_(target) {}

  Natural limit() const noexcept { return limit_; }
  /// Argument whose pseudo-inverse could not be resolved.
  Natural target() const noexcept { return target_; }

 private:
  Natural limit_;
  Natural target_;
};

/// Arithmetic overflow of the 64-bit natural-number model.
class OverflowError : public Error {
 public:
  using Error::Error;
};

inline Natural checked_add(Natural a, Natural b) {
  Natural r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw OverflowError("natural overflow in " + std::to_string(a) + " + " + std::to_string(b));
  }
  return r;
}

inline Natural checked_mul(Natural a, Natural b) {
  Natural r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw OverflowError("natural overflow in " + std::to_string(a) + " * " + std::to_string(b));
  }
  return r;
}

}  // namespace quotdef
