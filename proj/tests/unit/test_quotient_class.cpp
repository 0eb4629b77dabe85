#include <filesystem>
#include <fstream>
#include <memory>
#include <random>

#include "doctest.h"
#include "quotdef/oracle.hpp"
#include "quotdef/prime_table.hpp"
#include "quotdef/pseudo_inverse.hpp"
#include "quotdef/quotient_class.hpp"

using namespace quotdef;

namespace {

// floor(sqrt(2x/d)) by counting up.
Natural sqrt_like_reference(Natural x, Natural d) {
  Natural y = 0;
  while ((y + 1) * (y + 1) * d <= 2 * x) ++y;
  return y;
}

Natural naive_worst_drop(const FunctionOracle& f, Natural lo, Natural hi) {
  Natural worst = 0;
  for (Natural x = lo; x <= hi; ++x) {
    for (Natural y = x; y <= hi; ++y) {
      if (f(x) > f(y)) worst = std::max(worst, f(x) - f(y));
    }
  }
  return worst;
}

std::shared_ptr<const PrimeTable> small_primes() {
  static auto t = std::make_shared<const PrimeTable>(sieve_upto(10'000'000));
  return t;
}

}  // namespace

TEST_CASE("sqrt-like oracle") {
  const auto f = make_sqrt_like(1);
  CHECK(f(8) == 4);
  CHECK(f(7) == 3);
  CHECK(f.n_start() == 0);
  for (Natural d = 1; d <= 3; ++d) {
    const auto g = make_sqrt_like(d);
    for (Natural x = 0; x < 5000; ++x) REQUIRE(g(x) == sqrt_like_reference(x, d));
  }
  CHECK_THROWS_AS(make_sqrt_like(0), DomainError);
  CHECK(integer_sqrt(0) == 0);
  CHECK(integer_sqrt((Natural{1} << 32) * (Natural{1} << 32) - 1) == 0xFFFFFFFFull);
  for (Natural n = 1; n < 100'000; n += 7) {
    const Natural r = integer_sqrt(n);
    REQUIRE(r * r <= n);
    REQUIRE((r + 1) * (r + 1) > n);
  }
}

TEST_CASE("oracle domain errors") {
  const auto f = make_prime_quotient(small_primes());
  CHECK(f.n_start() == 1);
  CHECK_THROWS_AS(f(0), DomainError);
  CHECK_THROWS_AS(f(*f.max_argument() + 1), OutOfRange);
  const auto t = make_table_oracle({5, 6, 7}, 2);
  CHECK(t(2) == 5);
  CHECK(t(4) == 7);
  CHECK_THROWS_AS(t(1), DomainError);
  CHECK_THROWS_AS(t(5), OutOfRange);
}

TEST_CASE("table oracle from file") {
  const auto path = std::filesystem::temp_directory_path() / "quotdef_table_test.txt";
  std::ofstream(path) << "0\n1\n1\n# comment\n2\n";
  const auto f = load_table_oracle(path);
  CHECK(f(0) == 0);
  CHECK(f(3) == 2);
  CHECK(*f.max_argument() == 3);
  std::ofstream(path) << "1\nx\n";
  CHECK_THROWS_AS(load_table_oracle(path), Error);
  std::filesystem::remove(path);
}

TEST_CASE("pseudo-inverse consistency") {
  const auto check = [](const FunctionOracle& f, Natural n_hi, Natural limit) {
    const PseudoInverse finv(f, limit);
    for (Natural n = 0; n <= n_hi; ++n) {
      const Natural m = finv(n);
      REQUIRE(f(m + 1) > n);
      for (Natural j = f.n_start(); j <= m; ++j) REQUIRE(f(j) <= n);
    }
  };
  check(make_sqrt_like(1), 60, 1 << 20);
  check(make_sqrt_like(3), 40, 1 << 20);
  check(make_prime_quotient(small_primes()), 14, 664'578);
  CHECK(PseudoInverse(make_sqrt_like(1), 1 << 20)(7) == 31);
}

TEST_CASE("pseudo-inverse exhaustion") {
  const PseudoInverse finv(make_prime_quotient(small_primes()), 664'578);
  CHECK_THROWS_AS(finv(15), SearchExhausted);
  const auto flat = make_table_oracle({3, 3, 3, 3});
  CHECK_THROWS_AS(pseudo_inverse(flat, 5, 100), SearchExhausted);
  CHECK(pseudo_inverse(flat, 2, 100) == pseudo_inverse_start(flat));
}

TEST_CASE("prefix-max almost-increasing check equals the naive pairwise check") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Natural> v(200 + rng() % 300);
    Natural level = 0;
    for (auto& x : v) {
      level += rng() % 3;
      x = level - std::min<Natural>(level, rng() % 4);
    }
    const auto f = make_table_oracle(v, 1);
    const Natural naive = naive_worst_drop(f, 1, v.size());
    for (Natural k = 0; k <= 4; ++k) {
      const auto r = check_k_almost_increasing(f, k, v.size());
      REQUIRE(r.details.at("worst_drop") == naive);
      REQUIRE((r.result == Outcome::Pass) == (naive <= k));
      if (r.result == Outcome::Fail) {
        const Natural x = r.witness->at("x");
        const Natural y = r.witness->at("y");
        REQUIRE(x <= y);
        REQUIRE(f(x) - f(y) > k);
      }
    }
  }
  const auto p = make_prime_quotient(small_primes());
  CHECK(check_k_almost_increasing(p, 1, 2000).details.at("worst_drop") == naive_worst_drop(p, 1, 2000));
}

TEST_CASE("linear-difference check") {
  const auto f = make_sqrt_like(2);
  CHECK(check_linear_difference(f, 2, 1, 300, 1 << 24).result == Outcome::Pass);
  CHECK(check_linear_difference(f, 2, 1, 300, 1000).result == Outcome::Inconclusive);
  // f(x) = floor(x / 3): f^{-1}(n+1) - f^{-1}(n) = 3, too slow from n = 3 on.
  std::vector<Natural> v;
  for (Natural x = 0; x < 2000; ++x) v.push_back(x / 3);
  const auto slow = make_table_oracle(v);
  const auto r = check_linear_difference(slow, 1, 1, 100, 1999);
  CHECK(r.result == Outcome::Fail);
  const auto& w = *r.witness;
  CHECK(w.at("n") == 3);
  CHECK(Natural(w.at("finv_n_plus_1")) - Natural(w.at("finv_n")) <= Natural(w.at("n")));
}

TEST_CASE("class membership") {
  SUBCASE("sqrt-like(d) is in C(0,d,1)") {
    for (Natural d = 1; d <= 3; ++d) {
      CHECK(class_check(make_sqrt_like(d), ClassParams(0, d, 1), 10'000, 1000, Natural{1} << 24).result ==
            Outcome::Pass);
    }
  }
  SUBCASE("sqrt-like(1) with n0 = 0 still satisfies both conditions") {
    CHECK(class_check(make_sqrt_like(1), ClassParams(0, 1, 0), 10'000, 1000, Natural{1} << 24).result ==
          Outcome::Pass);
  }
  SUBCASE("a dip deeper than k is rejected") {
    const auto f = make_sqrt_like(1);
    const auto dipped = make_patched(f, {{500, f(500) - 1}}, "dip");
    CHECK(class_check(dipped, ClassParams(0, 1, 1), 10'000, 200, Natural{1} << 24).result == Outcome::Fail);
    CHECK(class_check(dipped, ClassParams(1, 1, 1), 10'000, 200, Natural{1} << 24).result == Outcome::Pass);
  }
  SUBCASE("prime quotient over a small sieve") {
    const auto f = make_prime_quotient(small_primes());
    CHECK(class_check(f, ClassParams(1, 1, 11), *f.max_argument(), 14, *f.max_argument()).result == Outcome::Pass);
    CHECK(class_check(f, ClassParams(0, 1, 11), *f.max_argument(), 14, *f.max_argument()).result == Outcome::Fail);
    CHECK(class_check(f, ClassParams(1, 1, 11), *f.max_argument(), 15, *f.max_argument()).result ==
          Outcome::Inconclusive);
  }
  SUBCASE("range start") {
    const auto r = check_k_almost_increasing(make_sqrt_like(1), 0, 100, 200);
    CHECK(r.ranges.at("x") == nlohmann::json({100, 200}));
  }
}

TEST_CASE("class parameters") {
  const ClassParams p(1, 1, 11);
  CHECK(p.c() == 5);
  CHECK(p.n1() == 128);
  CHECK(p.x0_argument() == 128);
  const ClassParams s(0, 1, 1);
  CHECK(s.n1() == 8);
  CHECK(s.x0_argument() == 7);
  CHECK(*s.x0(PseudoInverse(make_sqrt_like(1), 1 << 20)) == 31);
  CHECK(ClassParams::parse("1,2,3") == ClassParams(1, 2, 3));
  CHECK_THROWS_AS(ClassParams::parse("1,2"), DomainError);
  CHECK_THROWS_AS(ClassParams::parse("1,2,3,4"), DomainError);
  CHECK_THROWS_AS(ClassParams::parse("1,-2,3"), DomainError);
  CHECK_THROWS_AS(ClassParams(1, 0, 1), DomainError);
}
