#include "quotdef/prime_table.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>

namespace quotdef {

PrimeTable::PrimeTable(Natural limit, std::vector<std::uint32_t> primes)
    : limit_(limit), primes_(std::move(primes)) {}

Natural PrimeTable::nth_prime(Natural n) const {
  if (n >= primes_.size()) {
    throw OutOfRange("prime index " + std::to_string(n) + " beyond table of " +
                     std::to_string(primes_.size()) + " primes (sieve limit " +
                     std::to_string(limit_) + ")");
  }
  return primes_[n];
}

namespace {

Natural isqrt(Natural n) {
  auto r = static_cast<Natural>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint32_t> small_primes(Natural limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint32_t> out;
  for (Natural i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (Natural j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

// Sieves odd numbers in [2*first_seg*S + 1, ...) for segments
// [first_seg, last_seg), appending primes <= limit to out.
void sieve_block(Natural limit, std::span<const std::uint32_t> base, std::size_t seg_size,
                 Natural first_seg, Natural last_seg, std::vector<std::uint32_t>& out) {
  std::vector<std::uint8_t> seg(seg_size);
  // Odd-index of the next multiple to strike for every odd base prime.
  std::vector<Natural> next(base.size());
  const Natural block_lo = first_seg * seg_size;  // odd index: value = 2*i + 1
  for (std::size_t b = 0; b < base.size(); ++b) {
    const Natural p = base[b];
    Natural start = p * p;  // odd square
    const Natural lo_value = 2 * block_lo + 1;
    if (start < lo_value) {
      Natural m = (lo_value + p - 1) / p * p;
      if (m % 2 == 0) m += p;
      start = m;
    }
    next[b] = (start - 1) / 2;
  }
  const Natural max_index = (limit - 1) / 2;  // last odd index <= limit
  for (Natural s = first_seg; s < last_seg; ++s) {
    const Natural lo = s * seg_size;
    const Natural hi = std::min<Natural>(lo + seg_size, max_index + 1);
    if (lo >= hi) break;
    const std::size_t len = hi - lo;
    std::memset(seg.data(), 1, len);
    for (std::size_t b = 0; b < base.size(); ++b) {
      const Natural p = base[b];
      Natural j = next[b];
      for (; j < hi; j += p) seg[j - lo] = 0;
      next[b] = j;
    }
    for (std::size_t i = 0; i < len; ++i) {
      if (seg[i]) out.push_back(static_cast<std::uint32_t>(2 * (lo + i) + 1));
    }
  }
}

}  // namespace

PrimeTable sieve_upto(Natural limit, const SieveOptions& options) {
  if (limit < 2) throw DomainError("sieve limit must be >= 2, got " + std::to_string(limit));
  if (limit > PrimeTable::kMaxLimit) {
    throw DomainError("sieve limit " + std::to_string(limit) + " exceeds 32-bit prime storage");
  }
  const std::size_t seg_size = std::max<std::size_t>(options.segment_size, 64);

  std::vector<std::uint32_t> base = small_primes(isqrt(limit));
  // Odd base primes only; 2 is handled by odd-only storage.
  std::span<const std::uint32_t> odd_base(base);
  if (!odd_base.empty()) odd_base = odd_base.subspan(1);

  const Natural odd_count = (limit - 1) / 2 + 1;  // odd indices 0..(limit-1)/2
  const Natural segments = (odd_count + seg_size - 1) / seg_size;
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(segments)));

  std::vector<std::vector<std::uint32_t>> parts(jobs);
  auto run = [&](unsigned w) {
    const Natural first = segments * w / jobs;
    const Natural last = segments * (w + 1) / jobs;
    sieve_block(limit, odd_base, seg_size, first, last, parts[w]);
  };
  if (jobs == 1) {
    run(0);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < jobs; ++w) workers.emplace_back(run, w);
  }

  std::size_t total = 1;
  for (const auto& p : parts) total += p.size();
  std::vector<std::uint32_t> primes;
  primes.reserve(total);
  primes.push_back(2);
  for (auto& p : parts) {
    // Odd index 0 is the value 1.
    auto it = p.begin();
    if (it != p.end() && *it == 1) ++it;
    primes.insert(primes.end(), it, p.end());
    std::vector<std::uint32_t>().swap(p);
  }
  return PrimeTable(limit, std::move(primes));
}

Natural prime_quotient(const PrimeTable& table, Natural n) {
  if (n == 0) throw DomainError("prime quotient undefined at n = 0");
  return table.nth_prime(n) / n;
}

Natural prime_remainder(const PrimeTable& table, Natural n) {
  if (n == 0) throw DomainError("prime remainder undefined at n = 0");
  return table.nth_prime(n) % n;
}

namespace {

constexpr std::array<char, 4> kMagic{'P', 'Q', 'T', 'B'};
constexpr std::uint32_t kCacheVersion = 1;

template <typename T>
void put_le(std::ostream& os, T v) {
  std::array<char, sizeof(T)> buf;
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(buf.data(), buf.size());
}

template <typename T>
T get_le(std::istream& is) {
  std::array<unsigned char, sizeof(T)> buf{};
  is.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (!is) throw Error("prime cache truncated in header");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void save_prime_cache(const PrimeTable& table, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open prime cache for writing: " + path.string());
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, kCacheVersion);
  put_le<std::uint64_t>(os, table.limit());
  put_le<std::uint64_t>(os, table.count());
  std::vector<char> buf;
  buf.reserve(table.count() + 16);
  std::uint32_t prev = 0;
  for (std::uint32_t p : table.primes()) {
    std::uint32_t delta = p - prev;
    prev = p;
    do {
      std::uint8_t byte = delta & 0x7F;
      delta >>= 7;
      if (delta) byte |= 0x80;
      buf.push_back(static_cast<char>(byte));
    } while (delta);
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os) throw Error("failed writing prime cache: " + path.string());
}

PrimeTable load_prime_cache(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open prime cache: " + path.string());
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw Error("not a prime cache (bad magic): " + path.string());
  if (get_le<std::uint32_t>(is) != kCacheVersion) throw Error("unsupported prime cache version");
  const auto limit = get_le<std::uint64_t>(is);
  const auto count = get_le<std::uint64_t>(is);
  if (limit < 2 || limit > PrimeTable::kMaxLimit) throw Error("prime cache has invalid limit");

  std::vector<char> body((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  std::vector<std::uint32_t> primes;
  primes.reserve(count);
  std::uint64_t prev = 0;
  std::size_t i = 0;
  while (i < body.size()) {
    std::uint64_t delta = 0;
    unsigned shift = 0;
    std::uint8_t byte;
    do {
      if (i >= body.size() || shift > 28) throw Error("prime cache has malformed delta");
      byte = static_cast<std::uint8_t>(body[i++]);
      delta |= static_cast<std::uint64_t>(byte & 0x7F) << shift;
      shift += 7;
    } while (byte & 0x80);
    prev += delta;
    if (prev > limit) throw Error("prime cache entry exceeds its limit");
    primes.push_back(static_cast<std::uint32_t>(prev));
  }
  if (primes.size() != count) throw Error("prime cache count mismatch");
  return PrimeTable(limit, std::move(primes));
}

}  // namespace quotdef
