#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "quotdef/common.hpp"

namespace quotdef {

/// Immutable table of all primes up to a sieve limit.
///
/// Indexing follows p_0 = 2, p_1 = 3, ...: index i holds the (i+1)-th prime.
/// Values are stored as 32-bit integers, so the sieve limit is capped at
/// 2^32 - 1.
class PrimeTable {
 public:
  static constexpr Natural kMaxLimit = 0xFFFFFFFFull;

  PrimeTable(Natural limit, std::vector<std::uint32_t> primes);

  Natural limit() const noexcept { return limit_; }
  Natural count() const noexcept { return primes_.size(); }

  /// p_n; throws OutOfRange naming the sieve limit when n >= count().
  Natural nth_prime(Natural n) const;

  /// Unchecked access for hot loops.
  Natural operator[](std::size_t i) const noexcept { return primes_[i]; }

  std::span<const std::uint32_t> primes() const noexcept { return primes_; }

  bool operator==(const PrimeTable&) const = default;

 private:
  Natural limit_;
  std::vector<std::uint32_t> primes_;
};

struct SieveOptions {
  /// Odd numbers covered per segment (one byte each).
  std::size_t segment_size = std::size_t{1} << 17;
  /// Worker threads; segments are split into contiguous blocks per worker.
  unsigned jobs = 1;
};

/// All primes <= limit by a segmented, odd-only sieve of Eratosthenes.
/// Throws DomainError for limit < 2 or limit > PrimeTable::kMaxLimit.
PrimeTable sieve_upto(Natural limit, const SieveOptions& options = {});

/// floor(p_n / n) for 1 <= n < count.
Natural prime_quotient(const PrimeTable& table, Natural n);

/// p_n mod n for 1 <= n < count.
Natural prime_remainder(const PrimeTable& table, Natural n);

/// Binary cache: magic "PQTB", u32 version, u64 limit, u64 count (all
/// little-endian), then the primes as LEB128 varint deltas from 0.
void save_prime_cache(const PrimeTable& table, const std::filesystem::path& path);
PrimeTable load_prime_cache(const std::filesystem::path& path);

}  // namespace quotdef
