// Acceptance run: one PASS/FAIL line per criterion against a 1e9 prime sieve
// and the sqrt-like class members. Full reports go to acceptance_report.json.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "quotdef/definability.hpp"
#include "quotdef/text.hpp"
#include "quotdef/verifier.hpp"
#include "support/formula_gen.hpp"

using namespace quotdef;
using nlohmann::json;

namespace {

constexpr Natural kSieveLimit = 1'000'000'000;

struct Criterion {
  int id = 0;
  std::string name;
  bool pass = true;
  std::vector<std::string> facts;
  json reports = json::array();
  double ms = 0;

  void require(bool ok, const std::string& fact) {
    pass = pass && ok;
    facts.push_back((ok ? "" : "NOT ") + fact);
  }
  void add(const VerificationReport& r) { reports.push_back(to_json(r, true)); }
};

std::string fmt_ms(double ms) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(ms < 10 ? 2 : 0) << ms << " ms";
  return o.str();
}

std::string result_text(const VerificationReport& r) { return std::string(to_string(r.result)); }

const VerificationReport* part(const VerificationReport& r, const std::string& id) {
  if (r.check == id) return &r;
  for (const auto& p : r.parts) {
    if (const auto* hit = part(p, id)) return hit;
  }
  return nullptr;
}

std::vector<Criterion> criteria;
json info = json::array();

template <typename F>
void run(int id, const std::string& name, F&& body) {
  Criterion c;
  c.id = id;
  c.name = name;
  const Stopwatch clock;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("completed without error: ") + e.what());
  }
  c.ms = clock.elapsed_ms();
  std::cout << "criterion " << std::setw(2) << id << " " << (c.pass ? "PASS" : "FAIL") << "  " << name << " ["
            << fmt_ms(c.ms) << "]";
  for (std::size_t i = 0; i < c.facts.size(); ++i) std::cout << (i ? "; " : ": ") << c.facts[i];
  std::cout << std::endl;
  criteria.push_back(std::move(c));
}

void note(const std::string& line) {
  std::cout << "info          " << line << std::endl;
  info.push_back(line);
}

}  // namespace

int main() {
  SieveOptions so;
  so.jobs = std::max(1u, std::thread::hardware_concurrency());
  const Stopwatch sieve_clock;
  std::shared_ptr<const PrimeTable> table;
  if (const char* cache = std::getenv("QUOTDEF_PRIME_CACHE"); cache && std::ifstream(cache)) {
    table = std::make_shared<const PrimeTable>(load_prime_cache(cache));
  }
  if (!table || table->limit() != kSieveLimit) table = std::make_shared<const PrimeTable>(sieve_upto(kSieveLimit, so));
  note("sieve to " + std::to_string(kSieveLimit) + ": " + std::to_string(table->count()) + " primes in " +
       fmt_ms(sieve_clock.elapsed_ms()) + "; p_k with p_0 = 2 unless stated");
  const FunctionOracle prime = make_prime_quotient(table);
  const Natural last = *prime.max_argument();
  const ClassParams prime_params(1, 1, 11);
  const ClassParams sqrt_params(0, 1, 1);
  const Evaluator sqrt_ev(make_sqrt_like(1));

  Natural resolvable = 0;  // largest n with f^{-1}(n) inside the sieve
  {
    const PseudoInverse finv(prime, last);
    try {
      for (Natural n = 1;; ++n) {
        finv(n);
        resolvable = n;
      }
    } catch (const SearchExhausted&) {
    }
  }

  run(1, "max-quotient: argmax_{k <= 7022} p_k/k = 7012 and p_7012/7012 < 10.102824", [&](Criterion& c) {
    const Stopwatch clock;
    const auto r = verify_max_quotient(*table, PrimeIndexing::ZeroBased);
    const double ms = clock.elapsed_ms();
    c.add(r);
    const auto& d = part(r, "max-quotient.argmax")->details;
    c.require(part(r, "max-quotient.argmax")->passed(),
              "argmax = 7012 (found " + d.at("argmax").dump() + ", ratio " + d.at("ratio").get<std::string>() + ")");
    c.require(part(r, "max-quotient.bound")->passed(), "max ratio < 10102824/10^6");
    c.require(ms < 1000, "runtime " + fmt_ms(ms) + " < 1 s");
    const auto one = verify_max_quotient(*table, PrimeIndexing::OneBased);
    const auto& d1 = part(one, "max-quotient.argmax")->details;
    note("criterion 1 with p_1 = 2: " + result_text(one) + ", argmax " + d1.at("argmax").dump() + ", ratio " +
         d1.at("ratio").get<std::string>());
    note("max ratio < 11 (used for f^-1(11) >= 7022): " + result_text(*part(r, "max-quotient.below-11")));
  });

  run(2, "proposition 1 item 1: f(m) - f(n) >= -1 for all 1 <= n < m <= 2e5", [&](Criterion& c) {
    const Stopwatch clock;
    const auto r = verify_prop1_item1(prime, 200'000, last);
    const double ms = clock.elapsed_ms();
    c.add(r);
    const auto* pairs = part(r, "prop1-item1.pairs");
    c.require(pairs->passed(), "pairs: " + result_text(*pairs) + ", worst drop " + pairs->details.at("worst_drop").dump());
    const auto* tail = part(r, "prop1-item1.tail");
    c.require(tail->passed(), "tail [7022, " + std::to_string(last) + "]: " + result_text(*tail));
    c.require(ms < 10'000, "runtime " + fmt_ms(ms) + " < 10 s");
  });

  run(3, "proposition 1 item 2: f^-1(n+1) - f^-1(n) > n from n = 11 to the sieve's reach", [&](Criterion& c) {
    const Stopwatch clock;
    const auto r = verify_prop1_item2(prime, std::nullopt);
    const double ms = clock.elapsed_ms();
    c.add(r);
    const Natural reach = r.details.at("largest_resolved_argument");
    c.require(r.passed(), "difference and display parts " + result_text(r) + " for n in [11, " +
                              r.details.at("largest_n_checked").dump() + "]");
    c.require(reach >= 18, "largest resolvable f^-1 argument " + std::to_string(reach) + " >= 18");
    c.require(ms < 600'000, "runtime " + fmt_ms(ms) + " < 10 min");
  });

  run(4, "two-sided estimate: lower on [2, 5e7], upper on [7022, 5e7], zero violations", [&](Criterion& c) {
    const auto r = check_estimates(*table, {2, 50'000'000}, {7022, 50'000'000});
    c.add(r);
    for (const auto& p : r.parts) {
      const std::string side = p.check.find("lower") != std::string::npos ? "lower" : "upper";
      std::string fact = side + ": " + p.details.at("violations").dump() + " violations, " +
                         p.details.at("undecided").dump() + " undecided";
      if (p.details.contains("last_violation_m")) fact += ", last at m = " + p.details.at("last_violation_m").dump();
      c.require(p.passed() && p.details.at("undecided") == 0, fact);
    }
    const auto one = check_estimates(*table, {2, 100}, {7022, 50'000'000}, PrimeIndexing::OneBased);
    note("criterion 4 upper with p_1 = 2: " + one.parts.at(1).details.at("violations").dump() + " violations" +
         (one.parts.at(1).details.contains("last_violation_m")
              ? ", last at m = " + one.parts.at(1).details.at("last_violation_m").dump()
              : std::string()));
  });

  run(5, "class membership: prime in C(1,1,11); sqrt-like(d) in C(0,d,1), d = 1..3, n_max 1e4", [&](Criterion& c) {
    const auto r = class_check(prime, prime_params, last, resolvable, last);
    c.add(r);
    c.require(r.passed(), "prime: " + result_text(r) + " (x <= " + std::to_string(last) + ", n <= " +
                              std::to_string(resolvable) + ")");
    for (Natural d = 1; d <= 3; ++d) {
      const auto s = class_check(make_sqrt_like(d), ClassParams(0, d, 1), 10'000'000, 10'000, Natural{1} << 32);
      c.add(s);
      c.require(s.passed(), "sqrt-like(" + std::to_string(d) + "): " + result_text(s));
    }
  });

  run(6, "lemma suite: lemma 1 (i)(ii)(iii) and lemma 2 on both families, every mutant caught", [&](Criterion& c) {
    for (Natural d = 1; d <= 3; ++d) {
      const auto f = make_sqrt_like(d);
      const ClassParams p(0, d, 1);
      const std::string tag = "sqrt-like(" + std::to_string(d) + ")";
      const auto l1 = verify_lemma1(f, p, 1000, Natural{1} << 32);
      const auto l2 = verify_lemma2(f, p, 0, 1'000'000, 1);
      const auto m = verify_lemma_mutants(f, p, 1000, 100'000, Natural{1} << 32, 1);
      c.add(l1);
      c.add(l2);
      c.add(m);
      c.require(l1.passed() && l2.passed(), tag + " lemma1 " + result_text(l1) + ", lemma2 " + result_text(l2));
      c.require(m.passed(), tag + " mutants caught " + m.details.at("caught").dump() + "/" +
                                std::to_string(m.parts.size()));
    }
    const auto l1 = verify_lemma1(prime, prime_params, resolvable, last);
    const auto l2 = verify_lemma2(prime, prime_params, 1, last - 64, 1);
    const auto m = verify_lemma_mutants(prime, prime_params, resolvable, 1'000'000, last, 1);
    c.add(l1);
    c.add(l2);
    c.add(m);
    c.require(l1.passed() && l2.passed(), "prime lemma1 " + result_text(l1) + ", lemma2 " + result_text(l2));
    c.require(m.passed(),
              "prime mutants caught " + m.details.at("caught").dump() + "/" + std::to_string(m.parts.size()));
  });

  run(7, "lemma 3: f-tilde agrees with f on (31, 531]; prime ingredients on [7022, 1e6]", [&](Criterion& c) {
    const auto x0 = resolve_x0(sqrt_params, sqrt_ev.pseudo_inverse());
    c.require(x0 == 31, "x0 = " + (x0 ? std::to_string(*x0) : std::string("unresolved")));
    const auto ft = verify_f_tilde(sqrt_ev, sqrt_params, 500, 1);
    c.add(ft);
    c.require(ft.passed(), "f-tilde on 500 x with unique y: " + result_text(ft));
    const auto ing = verify_lemma3_ingredients(prime, prime_params, 7022, 1'000'000, last);
    c.add(ing);
    for (const char* id : {"lemma3.fact1", "lemma3.congruence", "lemma3.restricted-congruence", "lemma3.step-bound"}) {
      c.require(part(ing, id)->passed(), std::string(id) + " " + result_text(*part(ing, id)));
    }
    bool stated = false;
    for (const auto& n : ing.notes) stated = stated || n.find("out of computational reach") != std::string::npos;
    c.require(stated, "report states x0 = f^-1(128) is out of computational reach");
  });

  run(8, "fundamental lemma: Q(n, y) <=> y = 5n^2 for n in [8, 208], unique below x + n", [&](Criterion& c) {
    const auto r = verify_c_n_squared(sqrt_ev, sqrt_params, 208, 1);
    c.add(r);
    c.require(sqrt_params.c() == 5 && sqrt_params.n1() == 8, "c = 5, n1 = 8");
    c.require(r.passed(), result_text(r) + " over " + r.details.at("tuples").dump() + " n, " +
                              r.details.at("literal_sweeps").dump() + " literal and " +
                              r.details.at("solver_sweeps").dump() + " solver uniqueness sweeps");
  });

  run(9, "multiplication: M(a, b, z) <=> z = ab on a, b in [0, 50]", [&](Criterion& c) {
    const auto r = verify_multiplication(sqrt_ev, sqrt_params, 50, 1);
    c.add(r);
    c.require(r.passed(), result_text(r) + " over " + r.details.at("tuples").dump() + " (a, b)");
    const auto lint = lint_relation(define_multiplication(sqrt_params, 31));
    c.add(lint);
    c.require(lint.passed(), "vocabulary lint " + result_text(lint));
  });

  run(10, "formula infrastructure: 1000 round trips; 200 hinted evaluations equal exhaustive search", [&](Criterion& c) {
    testing::Generator g{std::mt19937_64(2024), false};
    int round_trips = 0;
    for (int i = 0; i < 1000; ++i) {
      const Formula phi = g.formula(4);
      const std::string text = print(phi);
      const Formula back = parse_formula(text);
      round_trips += back == phi && print(back) == text;
    }
    c.require(round_trips == 1000, std::to_string(round_trips) + "/1000 round trips");
    testing::Generator h{std::mt19937_64(4048), true};
    const auto f = make_sqrt_like(1);
    const testing::Reference ref{f};
    const Evaluator ev(f);
    int agree = 0;
    for (int i = 0; i < 200; ++i) {
      const Formula phi = h.formula(5);
      const Assignment a = testing::random_assignment(h.rng, phi.free_vars(), 12);
      agree += ev.formula(phi, a) == ref.formula(phi, a.values());
    }
    c.require(agree == 200, std::to_string(agree) + "/200 hinted evaluations agree");
  });

  json out{{"sieve_limit", kSieveLimit}, {"info", info}, {"criteria", json::array()}};
  int failed = 0;
  for (const auto& c : criteria) {
    out["criteria"].push_back(
        {{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"facts", c.facts}, {"runtime_ms", c.ms}, {"reports", c.reports}});
    failed += !c.pass;
  }
  std::ofstream("acceptance_report.json") << out.dump(2) << "\n";
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
