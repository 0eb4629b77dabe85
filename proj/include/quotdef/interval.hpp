#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>

namespace quotdef {

/// Closed floating-point enclosure [lo, hi] of a real number.
///
/// Every operation rounds to nearest and then steps one ulp outward, so the
/// exact result of the real operation on any members of the operands lies in
/// the returned interval. Elementary functions are widened by kLibmUlps on
/// each side; glibc documents log/logl errors below that bound.
template <std::floating_point T>
class Interval {
 public:
  static constexpr int kLibmUlps = 2;

  constexpr Interval() = default;
  /// Exact point (T must represent v exactly).
  constexpr explicit Interval(T v) : lo_(v), hi_(v) {}
  constexpr Interval(T lo, T hi) : lo_(lo), hi_(hi) {}

  /// Encloses num/den for integers exactly representable in T.
  static Interval ratio(T num, T den) {
    const T q = num / den;
    return {down(q), up(q)};
  }

  T lo() const { return lo_; }
  T hi() const { return hi_; }

  friend Interval operator+(Interval a, Interval b) { return {down(a.lo_ + b.lo_), up(a.hi_ + b.hi_)}; }
  friend Interval operator-(Interval a, Interval b) { return {down(a.lo_ - b.hi_), up(a.hi_ - b.lo_)}; }

  friend Interval operator*(Interval a, Interval b) {
    const T c[] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
    return {down(std::min({c[0], c[1], c[2], c[3]})), up(std::max({c[0], c[1], c[2], c[3]}))};
  }

  /// Natural log; requires lo > 0.
  friend Interval log(Interval a) {
    T lo = std::log(a.lo_);
    T hi = std::log(a.hi_);
    for (int i = 0; i < kLibmUlps; ++i) {
      lo = down(lo);
      hi = up(hi);
    }
    return {lo, hi};
  }

  bool certainly_le(T v) const { return hi_ <= v; }
  bool certainly_gt(T v) const { return lo_ > v; }
  bool certainly_ge(T v) const { return lo_ >= v; }
  bool certainly_lt(T v) const { return hi_ < v; }

 private:
  static T down(T v) { return std::nextafter(v, -INFINITY); }
  static T up(T v) { return std::nextafter(v, INFINITY); }

  T lo_ = 0;
  T hi_ = 0;
};

}  // namespace quotdef
