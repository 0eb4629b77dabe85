#pragma once

#include <utility>
#include <vector>

#include "quotdef/common.hpp"

namespace quotdef {

/// Finite union of disjoint closed intervals of naturals, kept sorted.
class NaturalSet {
 public:
  using Interval = std::pair<Natural, Natural>;

  NaturalSet() = default;

  static NaturalSet range(Natural lo, Natural hi);
  static NaturalSet point(Natural v) { return range(v, v); }

  bool empty() const noexcept { return parts_.empty(); }
  /// Number of members, saturating at kNaturalMax.
  Natural count() const noexcept;
  bool contains(Natural v) const noexcept;
  Natural min() const { return parts_.front().first; }
  Natural max() const { return parts_.back().second; }
  const std::vector<Interval>& intervals() const noexcept { return parts_; }

  /// Appends [lo, hi]; lo must exceed every current member.
  void append(Natural lo, Natural hi);

  NaturalSet intersect(const NaturalSet& other) const;
  NaturalSet unite(const NaturalSet& other) const;

  /// Calls fn on members in increasing order until it returns true.
  template <typename Fn>
  bool any_of(Fn&& fn) const {
    for (const auto& [lo, hi] : parts_) {
      for (Natural v = lo;; ++v) {
        if (fn(v)) return true;
        if (v == hi) break;
      }
    }
    return false;
  }

  bool operator==(const NaturalSet&) const = default;

 private:
  std::vector<Interval> parts_;
};

}  // namespace quotdef
