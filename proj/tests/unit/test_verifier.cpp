#include <memory>

#include "doctest.h"
#include "quotdef/verifier.hpp"

using namespace quotdef;

namespace {

std::shared_ptr<const PrimeTable> primes() {
  static auto t = std::make_shared<const PrimeTable>(sieve_upto(10'000'000));
  return t;
}

const VerificationReport* part(const VerificationReport& r, const std::string& id) {
  if (r.check == id) return &r;
  for (const auto& p : r.parts) {
    if (const auto* hit = part(p, id)) return hit;
  }
  return nullptr;
}

void check_report_invariants(const VerificationReport& r) {
  if (r.result == Outcome::Fail) CHECK(r.witness.has_value());
  for (const auto& p : r.parts) check_report_invariants(p);
}

}  // namespace

TEST_CASE("max quotient") {
  const auto& t = *primes();
  SUBCASE("one-based reproduces the claimed argmax and bound") {
    const auto r = verify_max_quotient(t, PrimeIndexing::OneBased);
    CHECK(r.result == Outcome::Pass);
    CHECK(part(r, "max-quotient.argmax")->details.at("argmax") == 7012);
    CHECK(part(r, "max-quotient.argmax")->details.at("p_argmax") == 70841);
  }
  SUBCASE("zero-based peaks one index earlier") {
    const auto r = verify_max_quotient(t, PrimeIndexing::ZeroBased);
    CHECK(r.result == Outcome::Fail);
    CHECK(part(r, "max-quotient.argmax")->details.at("argmax") == 7011);
    CHECK(part(r, "max-quotient.below-11")->result == Outcome::Pass);
    check_report_invariants(r);
  }
  SUBCASE("argmax below 100 matches a naive scan") {
    for (auto ix : {PrimeIndexing::ZeroBased, PrimeIndexing::OneBased}) {
      Natural best = 1;
      double best_ratio = 0;
      for (Natural k = 1; k <= 100; ++k) {
        const double ratio = static_cast<double>(indexed_prime(t, k, ix)) / static_cast<double>(k);
        if (ratio > best_ratio) {
          best_ratio = ratio;
          best = k;
        }
      }
      MaxQuotientClaim claim{100, best, 11, 1};
      const auto r = verify_max_quotient(t, ix, claim);
      CHECK(part(r, "max-quotient.argmax")->details.at("argmax") == best);
      CHECK(part(r, "max-quotient.argmax")->result == Outcome::Pass);
    }
  }
}

TEST_CASE("proposition 1 item 1") {
  const auto f = make_prime_quotient(primes());
  CHECK(verify_prop1_item1(f, 7022, 100'000).result == Outcome::Pass);
  const auto r = verify_prop1_item1(f, 20'000, *f.max_argument());
  CHECK(r.result == Outcome::Pass);
  const auto dipped = make_patched(f, {{5000, f(5000) - 2}}, "dip");
  const auto bad = verify_prop1_item1(dipped, 7022, 100'000);
  CHECK(bad.result == Outcome::Fail);
  REQUIRE(bad.witness);
  CHECK(bad.witness->at("part") == "prop1-item1.pairs");
  const Natural x = bad.witness->at("witness").at("x");
  const Natural y = bad.witness->at("witness").at("y");
  CHECK(x < y);
  CHECK(dipped(x) > dipped(y) + 1);
  const auto tail_dip = make_patched(f, {{50'000, 8}}, "tail-dip");
  CHECK(verify_prop1_item1(tail_dip, 7022, 100'000).result == Outcome::Fail);
}

TEST_CASE("proposition 1 item 2") {
  const auto f = make_prime_quotient(primes());
  const auto r = verify_prop1_item2(f, 14);
  CHECK(r.result == Outcome::Pass);
  CHECK(r.details.at("largest_n_checked") == 13);
  const auto open = verify_prop1_item2(f, std::nullopt);
  CHECK(open.result == Outcome::Pass);
  CHECK(open.details.at("largest_resolved_argument") == 14);
  const auto beyond = verify_prop1_item2(f, 40);
  CHECK(beyond.result == Outcome::Inconclusive);
  check_report_invariants(beyond);
}

TEST_CASE("lemma suite on sqrt-like oracles") {
  for (Natural d = 1; d <= 3; ++d) {
    const auto f = make_sqrt_like(d);
    const ClassParams p(0, d, 1);
    CHECK(verify_lemma1(f, p, 1000, Natural{1} << 24).result == Outcome::Pass);
    CHECK(verify_lemma2(f, p, 0, 10'000, 1).result == Outcome::Pass);
    const Natural x0 = *p.x0(PseudoInverse(f, Natural{1} << 24));
    CHECK(verify_lemma3_ingredients(f, p, x0 + 1, 10'000, Natural{1} << 24).result == Outcome::Pass);
    const auto m = verify_lemma_mutants(f, p, 200, 5000, Natural{1} << 24, 1);
    CHECK(m.result == Outcome::Pass);
    CHECK(m.parts.size() == 8);
  }
}

TEST_CASE("lemma suite on the prime quotient") {
  const auto f = make_prime_quotient(primes());
  const ClassParams p(1, 1, 11);
  const Natural last = *f.max_argument();
  CHECK(verify_lemma1(f, p, 14, last).result == Outcome::Pass);
  CHECK(verify_lemma2(f, p, 1, last - 40, 1).result == Outcome::Pass);
  const auto l3 = verify_lemma3_ingredients(f, p, 7022, last - 1, last);
  CHECK(l3.result == Outcome::Pass);
  CHECK(part(l3, "lemma3.threshold")->notes.size() == 1);
  CHECK_FALSE(l3.notes.empty());
  const auto m = verify_lemma_mutants(f, p, 14, 20'000, last, 1);
  CHECK(m.result == Outcome::Pass);
  CHECK(m.parts.size() == 7);
}

TEST_CASE("lemma 1 (iii) equality case") {
  // 2x = (n-1)(n-2) at x = 1, n = 3 with d = n0 = 1.
  std::vector<Natural> v{0, 3};
  for (Natural x = 2; x < 4000; ++x) v.push_back(std::max<Natural>(3, integer_sqrt(2 * x)));
  const auto f = make_table_oracle(v, 0);
  const auto r = verify_lemma1(f, ClassParams(0, 1, 1), 40, 4000);
  const auto* iii = part(r, "lemma1.iii");
  REQUIRE(iii);
  CHECK(iii->result == Outcome::Fail);
  CHECK(iii->witness->at("x") == 1);
}

TEST_CASE("defined relations") {
  const Evaluator ev(make_sqrt_like(1));
  const ClassParams p(0, 1, 1);
  CHECK(verify_f_tilde(ev, p, 100, 1).result == Outcome::Pass);
  CHECK(verify_c_n_squared(ev, p, 30, 1).result == Outcome::Pass);
  CHECK(verify_multiplication(ev, p, 6, 1).result == Outcome::Pass);
  CHECK(lint_relation(define_multiplication(p, 31)).result == Outcome::Pass);
}

TEST_CASE("relation mutants are rejected and their witnesses reproduce") {
  const Evaluator ev(make_sqrt_like(1));
  const ClassParams p(0, 1, 1);
  const auto rel = define_f_tilde(p, 31);
  RelationSample s;
  for (Natural x = 32; x < 60; ++x) s.inputs.push_back({{"x", x}});
  s.expected = [&](const Assignment& a) { return ev.oracle()(a.get("x")); };
  s.sweep_bound = [](const Assignment& a) { return 2 * (a.get("x") + 1); };
  s.literal_sweeps = 4;
  CHECK(verify_defined_relation(rel, ev, s).result == Outcome::Pass);
  const auto mutants = relation_mutants(rel);
  CHECK(mutants.size() >= 2);
  for (const auto& [name, m] : mutants) {
    const auto r = verify_defined_relation(m, ev, s);
    CHECK_MESSAGE(r.result == Outcome::Fail, name);
    REQUIRE(r.witness);
    CHECK_MESSAGE(reproduce_relation_witness(m, ev, *r.witness), name);
    CHECK_FALSE(reproduce_relation_witness(rel, ev, *r.witness));
  }
  CHECK(verify_relation_mutants(rel, ev, s).result == Outcome::Pass);
}

TEST_CASE("lint rejects stray variables") {
  auto rel = define_f_tilde(ClassParams(0, 1, 1), 31);
  rel.formula = Formula::conj(rel.formula, Formula::eq(Term::var("stray"), Term::one()));
  CHECK(lint_relation(rel).result == Outcome::Fail);
}

TEST_CASE("reports are deterministic") {
  const Evaluator ev(make_sqrt_like(1));
  const ClassParams p(0, 1, 1);
  const auto a = to_json(verify_lemma2(make_sqrt_like(1), p, 0, 20'000, 9));
  const auto b = to_json(verify_lemma2(make_sqrt_like(1), p, 0, 20'000, 9));
  CHECK(a.dump() == b.dump());
  CHECK(a.at("runtime_ms").is_null());
  CHECK(to_json(verify_f_tilde(ev, p, 30, 4)).dump() == to_json(verify_f_tilde(ev, p, 30, 4)).dump());
  CHECK(a.at("seed") == 9);
}
