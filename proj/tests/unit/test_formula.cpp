#include <functional>
#include <random>

#include "doctest.h"
#include "quotdef/eval.hpp"
#include "quotdef/formula.hpp"
#include "quotdef/natural_set.hpp"
#include "quotdef/oracle.hpp"
#include "quotdef/text.hpp"
#include "support/formula_gen.hpp"

using namespace quotdef;
using namespace quotdef::testing;

TEST_CASE("term and formula construction") {
  const auto x = Term::var("x");
  CHECK(print(numeral(3)) == "((1 + 1) + 1)");
  CHECK(print(plus_numeral(x, 0)) == "x");
  CHECK(print(times(x, 3)) == "((x + x) + x)");
  CHECK(numeral(5).size() == 9);
  CHECK_THROWS_AS(numeral(0), DomainError);
  CHECK_THROWS_AS(times(x, 0), DomainError);
  const auto phi = Formula::exists("u", SearchTo{x}, Formula::eq(Term::sum(Term::var("y"), Term::var("u")), x));
  CHECK(phi.free_vars() == VarSet{"x", "y"});
  CHECK(bound_vars(phi) == VarSet{"u"});
  CHECK(print(less_equal(Term::var("y"), x, "u")) == "exists u <= x . ((y + u) = x)");
  CHECK(print(less_than(Term::var("y"), x, "u")) == "exists u <= x . (((y + u) + 1) = x)");
  CHECK(Term::f(x).vars_under_f() == VarSet{"x"});
  CHECK(Term::sum(x, Term::f(Term::var("y"))).vars_under_f() == VarSet{"y"});
}

TEST_CASE("parser") {
  SUBCASE("congruence disjunct") {
    const auto phi = parse_formula("(y + F(x)) = (F((x+1)) + ((x+1)+(x+1)))");
    const auto x1 = Term::sum(Term::var("x"), Term::one());
    CHECK(phi == Formula::eq(Term::sum(Term::var("y"), Term::f(Term::var("x"))),
                             Term::sum(Term::f(x1), Term::sum(x1, x1))));
  }
  SUBCASE("unbounded quantifier") {
    const auto phi = parse_formula("exists u . ((y + u) = x)");
    CHECK(phi.kind() == Formula::Kind::Exists);
    CHECK(std::holds_alternative<Unbounded>(phi.hint()));
  }
  SUBCASE("whitespace is insignificant") {
    CHECK(parse_formula(" exists\tu<=x.\n( ( y+u )=x )") == parse_formula("exists u <= x . ((y + u) = x)"));
  }
  SUBCASE("errors carry a location") {
    try {
      parse_formula("(x = y) & (y = x)");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.kind() == ParseError::Kind::Syntax);
      CHECK(e.line() == 1);
      CHECK(e.column() == 9);
      CHECK(e.found() == "'&'");
    }
    try {
      parse_formula("(x =\n Y)");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() == 2);
    }
    CHECK_THROWS_AS(parse_formula("exists exists . (x = x)"), ParseError);
    CHECK_THROWS_AS(parse_formula("(x = G(y))"), ParseError);
    CHECK_THROWS_AS(parse_term("(x + y"), ParseError);
    CHECK_THROWS_AS(parse_formula("(x = y) junk"), ParseError);
  }
  SUBCASE("unknown identifier") {
    try {
      parse_formula("(x = Foo)");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.kind() == ParseError::Kind::UnknownIdentifier);
    }
  }
}

TEST_CASE("print and parse round trip on 1000 random formulas") {
  Generator g{std::mt19937_64(11), false};
  for (int i = 0; i < 1000; ++i) {
    const Formula phi = g.formula(4);
    const std::string text = print(phi);
    const Formula back = parse_formula(text);
    REQUIRE(back == phi);
    REQUIRE(print(back) == text);
    const Term t = g.term(4, 2);
    REQUIRE(parse_term(print(t)) == t);
  }
}

TEST_CASE("term evaluation") {
  const Evaluator sq(make_sqrt_like(1));
  CHECK(sq.term(Term::sum(Term::one(), Term::one()), {}) == 2);
  CHECK(sq.term(Term::f(Term::var("x")), {{"x", 8}}) == 32);
  const auto table = make_table_oracle({0, 3, 2, 1, 2}, 0);
  const Evaluator tb(table);
  CHECK(tb.term(Term::f(Term::var("x")), {{"x", 4}}) == 8);
  CHECK_THROWS_AS(tb.term(Term::f(Term::var("x")), {{"x", 5}}), EvalError);
  CHECK_THROWS_AS(sq.term(Term::var("q"), {}), Error);
  const Evaluator from_one(make_table_oracle({1, 1}, 1));
  CHECK_THROWS_AS(from_one.term(Term::f(Term::var("x")), {{"x", 0}}), EvalError);
}

TEST_CASE("formula evaluation basics") {
  const Evaluator ev(make_sqrt_like(1));
  const auto x = Term::var("x");
  for (Natural v = 0; v < 20; ++v) {
    CHECK(ev.formula(parse_formula("((x + 1) = (1 + x))"), {{"x", v}}));
  }
  CHECK_THROWS_AS(ev.formula(parse_formula("exists u . ((y + u) = x)"), {{"x", 3}, {"y", 1}}), EvalError);
  try {
    ev.formula(Formula::exists("a", SearchTo{numeral(2)}, parse_formula("exists b . (a = b)")), {});
    FAIL("expected a refusal");
  } catch (const EvalError& e) {
    CHECK(e.path() == std::vector<std::string>{"a", "b"});
  }
  std::vector<WitnessRecord> w;
  CHECK(ev.formula(parse_formula("exists u <= x . ((y + u) = x)"), {{"x", 9}, {"y", 4}}, w));
  REQUIRE(w.size() == 1);
  CHECK(w[0].var == "u");
  CHECK(w[0].value == 5);
  CHECK_FALSE(ev.formula(parse_formula("exists u <= x . ((y + u) = x)"), {{"x", 3}, {"y", 4}}));
}

TEST_CASE("hinted evaluation equals exhaustive search on 200 random instances") {
  Generator g{std::mt19937_64(23), true};
  const auto f = make_sqrt_like(1);
  const Reference ref{f};
  const Evaluator fast(f);
  const Evaluator plain(f, EvalOptions{.accelerate = false});
  int true_count = 0;
  for (int i = 0; i < 200; ++i) {
    const Formula phi = g.formula(5);
    for (int j = 0; j < 4; ++j) {
      const Assignment a = random_assignment(g.rng, phi.free_vars(), 12);
      const bool expected = ref.formula(phi, a.values());
      REQUIRE(fast.formula(phi, a) == expected);
      REQUIRE(plain.formula(phi, a) == expected);
      true_count += expected;
    }
  }
  CHECK(true_count > 20);
  CHECK(true_count < 780);
}

TEST_CASE("solutions agree with pointwise evaluation") {
  Generator g{std::mt19937_64(5), true};
  const Evaluator ev(make_sqrt_like(1));
  for (int i = 0; i < 150; ++i) {
    const Formula phi = g.formula(4);
    if (phi.free_vars().empty()) continue;
    const std::string v = phi.free_vars().front();
    const Assignment a = random_assignment(g.rng, phi.free_vars(), 10);
    const NaturalSet s = ev.solutions(phi, a, v, 0, 40);
    for (Natural x = 0; x <= 40; ++x) {
      Assignment b = a;
      b.set(v, x);
      REQUIRE(s.contains(x) == ev.formula(phi, b));
    }
  }
}

TEST_CASE("substitution lemma") {
  Generator g{std::mt19937_64(31), true};
  const Evaluator ev(make_sqrt_like(1));
  for (int i = 0; i < 300; ++i) {
    const Formula phi = g.formula(4);
    const Term t = g.term(2, 1);
    const std::string x = kNames[g.pick(kNames.size())];
    const Formula sub = substitute(phi, x, t);
    VarSet vars = phi.free_vars();
    vars.insert(vars.end(), t.vars().begin(), t.vars().end());
    std::sort(vars.begin(), vars.end());
    const Assignment a = random_assignment(g.rng, vars, 8);
    Assignment b = a;
    b.set(x, ev.term(t, a));
    REQUIRE(ev.formula(sub, a) == ev.formula(phi, b));
  }
  const auto phi = parse_formula("exists y <= x . ((y + y) = x)");
  const auto sub = substitute(phi, "x", Term::var("y"));
  CHECK(sub.free_vars() == VarSet{"y"});
  CHECK(bound_vars(sub) != VarSet{"y"});
}

TEST_CASE("finverse bracket hint agrees with plain bounded search") {
  const auto f = make_sqrt_like(1);
  const Evaluator ev(f);
  // exists x . F(x) = n * x  (i.e. f(x) = n), n >= 1
  for (Natural n = 1; n <= 60; ++n) {
    const auto body = Formula::eq(Term::f(Term::var("x")), times(Term::var("x"), n));
    const auto bracketed = Formula::exists("x", FInverseBracket{numeral(n), -1, 0}, body);
    const auto searched = Formula::exists("x", SearchTo{numeral(4 * n * n)}, body);
    std::vector<WitnessRecord> wb;
    std::vector<WitnessRecord> ws;
    REQUIRE(ev.formula(bracketed, {}, wb) == ev.formula(searched, {}, ws));
    REQUIRE(wb.size() == 1);
    CHECK(f(wb[0].value) == n);
  }
  const auto [lo, hi] = ev.bracket(40, -1, 0);
  for (Natural x = 0; x < 4000; ++x) {
    CHECK((f(x) == 40) == (static_cast<std::int64_t>(x) > lo && x <= hi));
  }
  CHECK(ev.bracket(0, -1, 0).first == -1);
}

TEST_CASE("pinned quantifier") {
  const Evaluator ev(make_sqrt_like(1), EvalOptions{.pinned_limit = 100});
  CHECK(ev.formula(Formula::exists("q", Pinned{}, parse_formula("((q + x) = y)")), {{"x", 3}, {"y", 10}}));
  CHECK_FALSE(ev.formula(Formula::exists("q", Pinned{}, parse_formula("((q + x) = y)")), {{"x", 11}, {"y", 10}}));
  CHECK_THROWS_AS(ev.formula(Formula::exists("q", Pinned{}, parse_formula("((q + 1) = (1 + q))")), {}), EvalError);
}

TEST_CASE("lint") {
  CHECK(lint(parse_formula("exists u <= x . ((y + u) = x)")).empty());
  const VarSet allowed{"x"};
  CHECK(lint(parse_formula("exists u <= x . ((y + u) = x)"), &allowed).size() == 1);
  CHECK(is_identifier("x0"));
  CHECK_FALSE(is_identifier("0x"));
  CHECK_FALSE(is_identifier("exists"));
  CHECK_FALSE(is_identifier("X"));
  CHECK_FALSE(lint(Formula::eq(Term::var("Bad"), Term::one())).empty());
}

TEST_CASE("size metrics") {
  const auto m = measure(parse_formula("exists u <= x . ((y + F(u)) = x)"));
  CHECK(m.quantifiers == 1);
  CHECK(m.equations == 1);
  CHECK(m.f_applications == 1);
}

TEST_CASE("assignment parsing") {
  const auto a = Assignment::parse("x=1, y=20");
  CHECK(a.get("x") == 1);
  CHECK(a.get("y") == 20);
  CHECK_THROWS_AS(a.get("z"), Error);
  CHECK_THROWS_AS(Assignment::parse("x=1,x=2"), Error);
  CHECK_THROWS_AS(Assignment::parse("x=-1"), Error);
  CHECK_THROWS_AS(Assignment::parse("x"), Error);
}

TEST_CASE("natural sets") {
  auto s = NaturalSet::range(3, 7);
  CHECK(s.count() == 5);
  CHECK(s.contains(3));
  CHECK_FALSE(s.contains(8));
  CHECK(s.intersect(NaturalSet::range(6, 10)) == NaturalSet::range(6, 7));
  CHECK(s.intersect(NaturalSet::point(9)).empty());
  const auto u = s.unite(NaturalSet::range(8, 9));
  CHECK(u == NaturalSet::range(3, 9));
  CHECK(u.intervals().size() == 1);
  const auto gap = s.unite(NaturalSet::point(20));
  CHECK(gap.intervals().size() == 2);
  CHECK(gap.min() == 3);
  CHECK(gap.max() == 20);
  CHECK(NaturalSet::range(0, kNaturalMax).count() == kNaturalMax);
  NaturalSet a;
  a.append(1, 2);
  a.append(3, 5);
  CHECK(a == NaturalSet::range(1, 5));
  CHECK_THROWS_AS(a.append(0, 0), DomainError);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    NaturalSet x, y;
    std::vector<bool> bx(64), by(64);
    for (Natural v = 0; v < 64; ++v) {
      bx[v] = rng() % 2;
      by[v] = rng() % 3 == 0;
      if (bx[v]) x = x.unite(NaturalSet::point(v));
      if (by[v]) y = y.unite(NaturalSet::point(v));
    }
    const auto both = x.intersect(y);
    const auto either = x.unite(y);
    for (Natural v = 0; v < 64; ++v) {
      REQUIRE(both.contains(v) == (bx[v] && by[v]));
      REQUIRE(either.contains(v) == (bx[v] || by[v]));
    }
  }
}

TEST_CASE("deep numerals") {
  const Natural k = 500'000;
  const Term big = numeral(k);
  CHECK(big.depth() == k);
  CHECK(big.constant() == k);
  CHECK(Term::sum(big, Term::var("x")).constant() == std::nullopt);
  const Evaluator ev(make_sqrt_like(1));
  CHECK(ev.term(plus_numeral(Term::var("x"), k), {{"x", 3}}) == k + 3);
  const auto phi = Formula::eq(Term::var("y"), plus_numeral(Term::var("x"), k));
  CHECK(ev.formula(phi, {{"x", 1}, {"y", k + 1}}));
  CHECK(ev.solutions(phi, {{"x", 1}}, "y", 0, 2 * k) == NaturalSet::point(k + 1));
  const std::string text = print(phi);
  const Formula back = parse_formula(text);
  CHECK(back == phi);
  CHECK(print(back) == text);
}
