#pragma once

#include <cstdint>

#include "quotdef/common.hpp"
#include "quotdef/interval.hpp"
#include "quotdef/prime_table.hpp"
#include "quotdef/report.hpp"

namespace quotdef {

/// Which prime the symbol p_m denotes when checking an estimate.
enum class PrimeIndexing {
  ZeroBased,  ///< p_m is the (m+1)-th prime (p_0 = 2).
  OneBased,   ///< p_m is the m-th prime (p_1 = 2).
};

/// Constants of the two-sided estimate
///   m log m + m loglog m - A m  <=  p_m  <=  m log m + m loglog m - B m
/// held as exact scaled integers (A = lower_num / scale, B = upper_num / scale).
struct RosserBounds {
  std::int64_t lower_num = 10072629;
  std::int64_t upper_num = 9385000;
  std::int64_t scale = 10000000;
  Natural lower_min_m = 2;
  Natural upper_min_m = 7022;
};

inline constexpr RosserBounds kRosserBounds{};

/// Enclosure of m log m + m loglog m - A m; m >= 2.
Interval<double> rosser_lower(Natural m, const RosserBounds& b = kRosserBounds);
/// Enclosure of m log m + m loglog m - B m; m >= upper_min_m.
Interval<double> rosser_upper(Natural m, const RosserBounds& b = kRosserBounds);

/// Same enclosures in extended precision, used to settle near-ties.
Interval<long double> rosser_lower_ext(Natural m, const RosserBounds& b = kRosserBounds);
Interval<long double> rosser_upper_ext(Natural m, const RosserBounds& b = kRosserBounds);

/// p_m under the given indexing; throws OutOfRange beyond the table.
Natural indexed_prime(const PrimeTable& table, Natural m, PrimeIndexing indexing);

struct EstimateRange {
  Natural first;
  Natural last;  ///< inclusive
};

/// Certifies rosser_lower(m) <= p_m over `lower` and p_m <= rosser_upper(m)
/// over `upper`. A pair the interval cannot decide is inconclusive, never a
/// pass. Records the number of violations and the first few of them.
VerificationReport check_estimates(const PrimeTable& table, EstimateRange lower, EstimateRange upper,
                                   PrimeIndexing indexing = PrimeIndexing::ZeroBased,
                                   const RosserBounds& bounds = kRosserBounds);

/// Smallest m whose certified lower estimate gives p_m / m >= n + 1, hence
/// floor(p_m / m) > n under either indexing. A sufficient search limit for
/// the pseudo-inverse of the prime quotient at n.
Natural rosser_search_hint(Natural n, const RosserBounds& bounds = kRosserBounds);

}  // namespace quotdef
