#include "quotdef/verifier.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>

#include "quotdef/text.hpp"

namespace quotdef {

using nlohmann::json;

namespace {

using Wide = __int128;

VerificationReport make_report(std::string check, std::string anchor, std::string oracle) {
  VerificationReport r;
  r.check = std::move(check);
  r.anchor = std::move(anchor);
  r.oracle = std::move(oracle);
  return r;
}

std::string ratio_text(Natural num, Natural den) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.7f", static_cast<double>(num) / static_cast<double>(den));
  return std::to_string(num) + "/" + std::to_string(den) + " = " + buf;
}

json params_json(const ClassParams& p) { return json{{"k", p.k()}, {"d", p.d()}, {"n0", p.n0()}}; }

VerificationReport* find_part(VerificationReport& r, const std::string& check) {
  if (r.check == check) return &r;
  for (auto& p : r.parts) {
    if (auto* hit = find_part(p, check)) return hit;
  }
  return nullptr;
}

json assignment_json(const Assignment& a) {
  json j = json::object();
  for (const auto& [k, v] : a.values()) j[k] = v;
  return j;
}

Assignment assignment_from_json(const json& j) {
  Assignment a;
  for (const auto& [k, v] : j.items()) a.set(k, v.get<Natural>());
  return a;
}

}  // namespace

// ---------------------------------------------------------------- prime quotient

VerificationReport verify_prop1_item1(const FunctionOracle& f, Natural pair_bound, Natural tail_bound, Natural split) {
  std::vector<VerificationReport> parts;

  VerificationReport pairs = check_k_almost_increasing(f, 1, pair_bound);
  pairs.check = "prop1-item1.pairs";
  pairs.anchor = "f(m) - f(n) >= -1 for all n_start <= n < m <= pair_bound";
  parts.push_back(std::move(pairs));

  VerificationReport tail = make_report("prop1-item1.tail",
                                        "min_{split <= m <= tail_bound} f(m) >= max_{n <= split} f(n) - 1", f.id());
  {
    ReportTimer timer(tail);
    if (tail_bound < split) throw DomainError("tail_bound must be >= split");
    f(tail_bound);  // range check
    tail.ranges = {{"n", {f.n_start(), split}}, {"m", {split, tail_bound}}};
    Natural head_max = 0;
    Natural head_at = f.n_start();
    for (Natural n = f.n_start(); n <= split; ++n) {
      if (f.raw(n) > head_max) {
        head_max = f.raw(n);
        head_at = n;
      }
    }
    Natural tail_min = kNaturalMax;
    Natural tail_at = split;
    for (Natural m = split; m <= tail_bound; ++m) {
      if (f.raw(m) < tail_min) {
        tail_min = f.raw(m);
        tail_at = m;
      }
    }
    tail.details = {{"head_max", head_max}, {"head_argmax", head_at}, {"tail_min", tail_min}, {"tail_argmin", tail_at}};
    if (tail_min + 1 < head_max) {
      tail.fail({{"n", head_at}, {"m", tail_at}, {"f_n", head_max}, {"f_m", tail_min}});
    }
  }
  parts.push_back(std::move(tail));

  auto r = combine("prop1-item1", "f(m) - f(n) >= -1 for m > n >= 1", f.id(), std::move(parts));
  r.ranges = {{"pairs", {f.n_start(), pair_bound}}, {"tail", {split, tail_bound}}};
  r.params = {{"split", split}};
  r.notes.push_back("pairs with split <= n < m beyond pair_bound rest on the two-sided prime estimate; "
                    "checked empirically only as far as the ranges above");
  return r;
}

VerificationReport verify_max_quotient(const PrimeTable& table, PrimeIndexing indexing, const MaxQuotientClaim& claim) {
  const std::string oracle = "primes[limit=" + std::to_string(table.limit()) + "]";
  const bool zero = indexing == PrimeIndexing::ZeroBased;
  auto p = [&](Natural k) { return indexed_prime(table, k, indexing); };

  Natural best = 1;
  for (Natural k = 2; k <= claim.k_max; ++k) {
    if (static_cast<Wide>(p(k)) * best > static_cast<Wide>(p(best)) * k) best = k;
  }
  const Natural pb = p(best);

  std::vector<VerificationReport> parts;
  auto argmax = make_report("max-quotient.argmax", "argmax_{1 <= k <= k_max} p_k / k = claimed k", oracle);
  argmax.details = {{"argmax", best}, {"p_argmax", pb}, {"ratio", ratio_text(pb, best)}};
  if (best != claim.argmax) {
    const Natural pc = p(claim.argmax);
    argmax.fail({{"argmax", best},
                 {"p_argmax", pb},
                 {"claimed", claim.argmax},
                 {"p_claimed", pc},
                 {"ratio_argmax", ratio_text(pb, best)},
                 {"ratio_claimed", ratio_text(pc, claim.argmax)}});
  }
  parts.push_back(std::move(argmax));

  auto bound = make_report("max-quotient.bound", "max_{k <= k_max} p_k / k < bound", oracle);
  bound.details = {{"bound", ratio_text(claim.bound_num, claim.bound_den)}};
  if (!(static_cast<Wide>(pb) * claim.bound_den < static_cast<Wide>(claim.bound_num) * best)) {
    bound.fail({{"k", best}, {"p_k", pb}, {"ratio", ratio_text(pb, best)}});
  }
  parts.push_back(std::move(bound));

  auto below = make_report("max-quotient.below-11", "max_{k <= k_max} p_k / k < 11", oracle);
  if (!(static_cast<Wide>(pb) < static_cast<Wide>(11) * best)) {
    below.fail({{"k", best}, {"p_k", pb}, {"ratio", ratio_text(pb, best)}});
  }
  parts.push_back(std::move(below));

  auto r = combine("max-quotient", "argmax_{k <= k_max} p_k / k and its value", oracle, std::move(parts));
  r.params = {{"indexing", zero ? "p_0 = 2" : "p_1 = 2"},
              {"claimed_argmax", claim.argmax},
              {"claimed_bound", ratio_text(claim.bound_num, claim.bound_den)}};
  r.ranges = {{"k", {1, claim.k_max}}};
  r.details = {{"argmax", best}, {"p_argmax", pb}, {"ratio", ratio_text(pb, best)}};
  return r;
}

VerificationReport verify_prop1_item2(const FunctionOracle& f, std::optional<Natural> n_max, Natural n_first) {
  if (!n_max && !f.max_argument()) throw DomainError("an unbounded oracle needs an explicit n_max");
  const Natural last = f.max_argument().value_or(kNaturalMax);
  PseudoInverse finv(f, last);

  auto diff = make_report("prop1-item2.difference", "f^-1(n+1) - f^-1(n) > n", f.id());
  auto at_sum = make_report("prop1-item2.display3", "p_k / k < n + 2 at k = f^-1(n) + n", f.id());
  auto span = make_report("prop1-item2.display3-range", "p_k / k < n + 2 for f^-1(n) < k <= 2 f^-1(n)", f.id());
  auto floor = make_report("prop1-item2.threshold", "f^-1(n) >= 7022 for n >= 11", f.id());
  const Stopwatch clock;

  json rows = json::array();
  json hints = json::object();
  std::optional<Natural> unresolved;
  Natural n = n_first;
  Natural checked = 0;
  Natural span_checked = 0;
  bool span_truncated = false;
  for (; !n_max || n < *n_max; ++n) {
    Natural m;
    Natural m1;
    try {
      m = finv(n);
      m1 = finv(n + 1);
    } catch (const SearchExhausted& e) {
      unresolved = e.target();
      break;
    }
    hints[std::to_string(n + 1)] = rosser_search_hint(n + 1);
    rows.push_back({{"n", n}, {"finv_n", m}, {"finv_n_plus_1", m1}, {"delta", m1 - m}});
    if (!(m1 - m > n)) diff.fail({{"n", n}, {"finv_n", m}, {"finv_n_plus_1", m1}});
    if (n >= 11 && m < kEstimateThreshold) floor.fail({{"n", n}, {"finv_n", m}});

    // p_k / k < n + 2  <=>  floor(p_k / k) <= n + 1  <=>  f(k) <= n + 1
    const Natural k = m + n;
    if (k <= last) {
      if (f(k) > n + 1) at_sum.fail({{"n", n}, {"k", k}, {"f_k", f(k)}});
    } else {
      at_sum.notes.push_back("k = " + std::to_string(k) + " beyond the oracle for n = " + std::to_string(n));
    }
    const Natural hi = std::min<Natural>(2 * m, last);
    if (hi < 2 * m) span_truncated = true;
    for (Natural j = m + 1; j <= hi; ++j) {
      if (f.raw(j) > n + 1) {
        span.fail({{"n", n}, {"k", j}, {"f_k", f.raw(j)}});
        break;
      }
    }
    span_checked += hi - m;
    ++checked;
  }
  if (span_truncated) span.notes.push_back("some spans m < k <= 2m were cut at the oracle's last argument");
  span.details = {{"k_checked", span_checked}};

  if (unresolved && n_max) {
    diff.inconclusive("f^-1(" + std::to_string(*unresolved) + ") beyond search limit " + std::to_string(last) +
                      " before reaching n_max");
  }
  diff.details = {{"rows", rows}, {"checked", checked}};
  if (checked > 0) diff.details["largest_n_checked"] = n - 1;
  diff.details["largest_resolved_argument"] = checked > 0 ? json(n) : json(nullptr);
  if (unresolved) diff.details["unresolved_argument"] = *unresolved;
  diff.limits = {{"search_limit", last}, {"estimate_hints", hints}};

  auto r = combine("prop1-item2", "f^-1(n+1) - f^-1(n) > n for n >= 11", f.id(),
                   {std::move(diff), std::move(at_sum), std::move(span), std::move(floor)});
  r.ranges = {{"n", {n_first, checked > 0 ? n - 1 : n_first}}};
  r.details = r.parts.front().details;
  r.limits = r.parts.front().limits;
  r.runtime_ms = clock.elapsed_ms();
  if (unresolved && !n_max) {
    r.notes.push_back("sweep ends where f^-1(" + std::to_string(*unresolved) +
                      ") leaves the sieve; larger n are not reproducible here and rest on the estimates");
  }
  return r;
}

// ---------------------------------------------------------------- class lemmas

VerificationReport verify_lemma1(const FunctionOracle& f, const ClassParams& params, Natural n_max,
                                 Natural search_limit) {
  PseudoInverse finv(f, search_limit);
  const Natural d = params.d();
  const Natural n0 = params.n0();

  auto one = make_report("lemma1.i", "f^-1(n+d) - f^-1(n) > n for n >= n0", f.id());
  {
    ReportTimer timer(one);
    Natural checked = 0;
    try {
      for (Natural n = n0; n + d <= n_max; ++n) {
        const Natural a = finv(n);
        const Natural b = finv(n + d);
        if (!(b - a > n)) one.fail({{"n", n}, {"finv_n", a}, {"finv_n_plus_d", b}});
        ++checked;
      }
    } catch (const SearchExhausted& e) {
      one.details["unresolved_n"] = e.target();
      one.inconclusive("f^-1(" + std::to_string(e.target()) + ") beyond search limit");
    }
    one.ranges = {{"n", {n0, n_max >= d ? n_max - d : 0}}};
    one.details["checked"] = checked;
  }

  auto two = make_report("lemma1.ii", "{x : f(x) = n} nonempty for n >= n0 + 1", f.id());
  {
    ReportTimer timer(two);
    Natural checked = 0;
    try {
      for (Natural n = n0 + 1; n <= n_max; ++n) {
        const Natural lo = finv(n - 1);
        const Natural hi = finv(n);
        bool found = false;
        for (Natural x = std::max(lo + 1, f.n_start()); x <= hi && !found; ++x) found = f(x) == n;
        if (!found) two.fail({{"n", n}, {"low", lo}, {"high", hi}});
        ++checked;
      }
    } catch (const SearchExhausted& e) {
      two.details["unresolved_n"] = e.target();
      two.inconclusive("f^-1(" + std::to_string(e.target()) + ") beyond search limit");
    }
    two.ranges = {{"n", {n0 + 1, n_max}}};
    two.details["checked"] = checked;
  }

  auto three = make_report("lemma1.iii", "f(x) = n >= n0 + 1 implies 2d x > (n-1)(n-2) - n0(n0-1)", f.id());
  {
    ReportTimer timer(three);
    try {
      const Natural x_hi = finv(n_max);
      const Wide base = static_cast<Wide>(n0) * (static_cast<Wide>(n0) - 1);
      Natural checked = 0;
      Wide min_slack = -1;
      Natural min_slack_x = 0;
      for (Natural x = f.n_start(); x <= x_hi; ++x) {
        const Natural v = f(x);
        if (v < n0 + 1) continue;
        const Wide lhs = static_cast<Wide>(2 * d) * x;
        const Wide rhs = (static_cast<Wide>(v) - 1) * (static_cast<Wide>(v) - 2) - base;
        if (min_slack < 0 || lhs - rhs < min_slack) {
          min_slack = lhs - rhs;
          min_slack_x = x;
        }
        if (!(lhs > rhs)) three.fail({{"x", x}, {"f_x", v}, {"two_d_x", static_cast<long long>(lhs)},
                                      {"bound", static_cast<long long>(rhs)}});
        ++checked;
      }
      three.ranges = {{"x", {f.n_start(), x_hi}}};
      three.details = {{"checked", checked}, {"min_slack_x", min_slack_x}};
      if (checked) three.details["min_slack"] = static_cast<long long>(min_slack);
    } catch (const SearchExhausted& e) {
      three.details["unresolved_n"] = e.target();
      three.inconclusive("f^-1(" + std::to_string(e.target()) + ") beyond search limit");
    }
  }

  auto r = combine("lemma1", "pseudo-inverse growth, surjectivity and quadratic lower bound", f.id(),
                   {std::move(one), std::move(two), std::move(three)});
  r.params = params_json(params);
  r.ranges = {{"n", {n0, n_max}}};
  r.limits = {{"search_limit", search_limit}};
  return r;
}

VerificationReport verify_lemma2(const FunctionOracle& f, const ClassParams& params, Natural x_lo, Natural x_hi,
                                 std::uint64_t seed, Natural full_sweep_below, unsigned samples) {
  auto r = make_report("lemma2", "f(x) = n >= n0, 1 <= c <= n implies -k <= f(x+c) - f(x) <= k+d", f.id());
  ReportTimer timer(r);
  r.params = params_json(params);
  r.seed = seed;
  const Natural lo = std::max(x_lo, f.n_start());
  r.ranges = {{"x", {lo, x_hi}}};
  r.limits = {{"full_sweep_below", full_sweep_below}, {"samples", samples}};
  const Wide k = params.k();
  const Wide kd = params.k() + params.d();

  std::mt19937_64 rng(seed);
  Natural pairs = 0;
  Natural skipped = 0;
  Natural xs = 0;
  auto check = [&](Natural x, Natural fx, Natural c) {
    if (!f.in_range(x + c)) {
      ++skipped;
      return;
    }
    const Natural fc = f(x + c);
    const Wide diff = static_cast<Wide>(fc) - fx;
    if (diff < -k || diff > kd) r.fail({{"x", x}, {"c", c}, {"f_x", fx}, {"f_x_plus_c", fc}});
    ++pairs;
  };
  for (Natural x = lo; x <= x_hi; ++x) {
    const Natural n = f(x);
    if (n < params.n0() || n == 0) continue;
    ++xs;
    if (x < full_sweep_below) {
      for (Natural c = 1; c <= n; ++c) check(x, n, c);
    } else {
      check(x, n, 1);
      check(x, n, n);
      for (unsigned s = 0; s < samples; ++s) check(x, n, 1 + rng() % n);
    }
  }
  r.details = {{"x_checked", xs}, {"pairs_checked", pairs}, {"pairs_beyond_oracle", skipped}};
  return r;
}

VerificationReport verify_lemma3_ingredients(const FunctionOracle& f, const ClassParams& params, Natural x_lo,
                                             Natural x_hi, Natural search_limit) {
  PseudoInverse finv(f, search_limit);
  const std::optional<Natural> x0 = params.x0(finv);
  const Natural lo = std::max(x_lo, f.n_start());
  const Wide kd = params.k() + params.d();
  const Natural floor7 = params.x0_argument() - params.k();

  auto fact1 = make_report("lemma3.fact1", "f(x) < x", f.id());
  auto cong = make_report("lemma3.congruence", "f(x) = (x+1) f(x+1) - x f(x) (mod x+1)", f.id());
  auto restricted =
      make_report("lemma3.restricted-congruence", "|(x+1) f(x+1) - x f(x) - f(x)| = h (x+1) with h <= k+d", f.id());
  auto step = make_report("lemma3.step-bound", "|f(x+1) - f(x)| <= k+d", f.id());
  auto above = make_report("lemma3.threshold", "f(x) > 2 + 4d + n0^2 for x > x0", f.id());
  const Stopwatch clock;

  Natural checked = 0;
  Natural above_checked = 0;
  Natural x = lo;
  for (; x <= x_hi; ++x) {
    if (!f.in_range(x + 1)) break;
    const Natural v = f(x);
    if (v < params.n0()) continue;
    const Natural v1 = f(x + 1);
    const json at = {{"x", x}, {"f_x", v}, {"f_x_plus_1", v1}};
    if (!(v < x)) fact1.fail(at);
    const Wide D = static_cast<Wide>(x + 1) * v1 - static_cast<Wide>(x) * v;
    const Wide gap = D - v;
    if (gap % static_cast<Wide>(x + 1) != 0 || D != v + static_cast<Wide>(x + 1) * (static_cast<Wide>(v1) - v)) {
      cong.fail(at);
    }
    const Wide h = (gap < 0 ? -gap : gap) / static_cast<Wide>(x + 1);
    if (h > kd) restricted.fail(at);
    const Wide dv = static_cast<Wide>(v1) - v;
    if ((dv < 0 ? -dv : dv) > kd) step.fail(at);
    if (x0 && x > *x0) {
      if (!(v > floor7)) above.fail(at);
      ++above_checked;
    }
    ++checked;
  }
  const Natural x_end = x > lo ? x - 1 : lo;

  above.details = {{"x0_argument", params.x0_argument()}, {"checked", above_checked}};
  if (x0) {
    above.details["x0"] = *x0;
  } else {
    above.details["x0"] = nullptr;
    above.details["vacuous"] = true;
    above.notes.push_back("x0 = f^-1(" + std::to_string(params.x0_argument()) +
                          ") is out of computational reach: no argument up to " + std::to_string(search_limit) +
                          " exceeds it, so the checked range lies entirely below x0");
  }

  auto r = combine("lemma3-ingredients", "ingredients of the existential definition of f above x0", f.id(),
                   {std::move(fact1), std::move(cong), std::move(restricted), std::move(step), std::move(above)});
  r.params = params_json(params);
  r.ranges = {{"x", {lo, x_end}}};
  r.limits = {{"search_limit", search_limit}};
  r.details = {{"checked", checked}, {"x0", x0 ? json(*x0) : json(nullptr)}, {"x0_argument", params.x0_argument()}};
  if (x_end < x_hi) r.notes.push_back("range cut at the oracle's last argument");
  if (!x0) r.notes.push_back(r.parts.back().notes.front());
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

namespace {

struct Mutant {
  std::string name;
  std::map<Natural, Natural> patch;
  std::string caught_by;
};

VerificationReport run_mutant(const FunctionOracle& f, const ClassParams& params, const Mutant& m, Natural n_max,
                              Natural x_hi, Natural search_limit, std::uint64_t seed) {
  const FunctionOracle g = make_patched(f, m.patch, f.id() + "+" + m.name);
  VerificationReport outcome;
  const std::string family = m.caught_by.substr(0, m.caught_by.find('.'));
  if (family == "lemma1") outcome = verify_lemma1(g, params, n_max, search_limit);
  if (family == "lemma2") outcome = verify_lemma2(g, params, g.n_start(), x_hi, seed);
  if (family == "lemma3") outcome = verify_lemma3_ingredients(g, params, g.n_start(), x_hi, search_limit);
  const VerificationReport* part = find_part(outcome, m.caught_by);

  auto r = make_report("mutant." + m.name, "fault-injected oracle rejected by " + m.caught_by, g.id());
  json patched = json::object();
  for (const auto& [x, v] : m.patch) {
    if (patched.size() < 8) patched[std::to_string(x)] = {{"original", f.raw(x)}, {"patched", v}};
  }
  r.details = {{"patched", patched}, {"patched_count", m.patch.size()}, {"caught_by", m.caught_by}};
  if (!part || part->result != Outcome::Fail) {
    r.fail({{"mutant", m.name}, {"check", m.caught_by},
            {"result", part ? std::string(to_string(part->result)) : std::string("missing")}});
  } else {
    r.details["witness"] = part->witness.value_or(nullptr);
  }
  return r;
}

}  // namespace

VerificationReport verify_lemma_mutants(const FunctionOracle& f, const ClassParams& params, Natural n_max,
                                        Natural x_hi, Natural search_limit, std::uint64_t seed) {
  PseudoInverse finv(f, search_limit);
  const Natural d = params.d();
  const Natural n0 = params.n0();
  std::vector<Mutant> mutants;

  {  // early jump: f^{-1}(n+d) collapses onto f^{-1}(n)
    const Natural n = n0 + 2;
    const Natural m = finv(n);
    mutants.push_back({"early-jump", {{m + 2, n + d + 1}}, "lemma1.i"});
  }
  {  // value n skipped entirely
    const Natural n = n0 + 2;
    std::map<Natural, Natural> patch;
    for (Natural x = std::max(finv(n - 1) + 1, f.n_start()); x <= finv(n); ++x) {
      if (f(x) == n) patch[x] = n + 1;
    }
    mutants.push_back({"skipped-value", std::move(patch), "lemma1.ii"});
  }
  {  // equality case of the quadratic bound: 2d x = (n-1)(n-2) - n0(n0-1)
    for (Natural n = n0 + 3;; ++n) {
      const Wide rhs = static_cast<Wide>(n - 1) * (n - 2) - static_cast<Wide>(n0) * (static_cast<Wide>(n0) - 1);
      const Natural x = static_cast<Natural>(rhs / static_cast<Wide>(2 * d));
      if (x >= f.n_start() && x <= finv(n_max)) {
        mutants.push_back({"premature-value", {{x, n}}, "lemma1.iii"});
        break;
      }
      if (x > finv(n_max)) break;
    }
  }
  Natural spike_x = f.n_start();
  while (f(spike_x) < std::max<Natural>(n0, 1)) ++spike_x;
  ++spike_x;
  const Natural spike = f(spike_x) + params.k() + d + 1;
  mutants.push_back({"spike", {{spike_x + 1, spike}}, "lemma2"});
  mutants.push_back({"spike-step", {{spike_x + 1, spike}}, "lemma3.step-bound"});
  mutants.push_back({"spike-congruence", {{spike_x + 1, spike}}, "lemma3.restricted-congruence"});
  {
    const Natural x = std::max(spike_x, n0);
    mutants.push_back({"value-above-argument", {{x, x + 1}}, "lemma3.fact1"});
  }
  if (const auto x0 = params.x0(finv); x0 && *x0 + 3 <= x_hi) {
    mutants.push_back({"dip-above-x0", {{*x0 + 3, params.x0_argument() - params.k()}}, "lemma3.threshold"});
  }

  std::vector<VerificationReport> parts;
  for (const auto& m : mutants) parts.push_back(run_mutant(f, params, m, n_max, x_hi, search_limit, seed));
  auto r = combine("lemma-mutants", "every fault-injected oracle is rejected by its check", f.id(), std::move(parts));
  r.params = params_json(params);
  r.seed = seed;
  r.ranges = {{"n", {n0, n_max}}, {"x", {f.n_start(), x_hi}}};
  Natural caught = 0;
  for (const auto& p : r.parts) caught += p.passed() ? 1 : 0;
  r.details = {{"mutants", r.parts.size()}, {"caught", caught}};
  return r;
}

// ---------------------------------------------------------------- defined relations

VerificationReport verify_defined_relation(const DefinedRelation& rel, const Evaluator& ev,
                                           const RelationSample& sample) {
  auto r = make_report("relation." + rel.name, rel.provenance, ev.oracle().id());
  ReportTimer timer(r);
  r.params = params_json(rel.params);
  if (rel.x0) r.params["x0"] = *rel.x0;
  r.seed = sample.seed;
  const std::string& out = rel.output();
  std::mt19937_64 rng(sample.seed);

  Natural evaluations = 0;
  Natural literal = 0;
  Natural solved = 0;
  Natural errors = 0;
  std::optional<std::string> exhausted;

  auto truth = [&](Assignment a, Natural y, bool expected) {
    a.set(out, y);
    ++evaluations;
    try {
      const bool got = evaluate(rel, ev, a);
      if (got != expected) {
        r.fail({{"assignment", assignment_json(a)}, {"expected", expected}, {"observed", got}});
      }
      return got;
    } catch (const EvalError& e) {
      ++errors;
      if (e.search_exhausted()) {
        exhausted = e.what();
      } else {
        r.fail({{"assignment", assignment_json(a)}, {"error", e.what()}});
      }
    } catch (const DomainError& e) {
      ++errors;
      r.fail({{"assignment", assignment_json(a)}, {"error", e.what()}});
    }
    return !expected;
  };

  for (std::size_t i = 0; i < sample.inputs.size(); ++i) {
    const Assignment& a = sample.inputs[i];
    const Natural y = sample.expected(a);
    truth(a, y, true);
    truth(a, y + 1, false);
    if (y > 0) truth(a, y - 1, false);
    Natural wrong = rng() % (2 * y + 16);
    if (wrong == y) wrong = y + 2 + rng() % 7;
    truth(a, wrong, false);

    const Natural bound = sample.sweep_bound ? sample.sweep_bound(a) : 0;
    if (bound == 0) continue;
    if (i < sample.literal_sweeps) {
      for (Natural v = 0; v < bound; ++v) {
        if (v != y && v != y + 1 && v + 1 != y) truth(a, v, false);
      }
      ++literal;
    } else {
      try {
        const NaturalSet sols = ev.solutions(rel.formula, a, out, 0, bound - 1);
        if (!(sols == NaturalSet::point(y))) {
          Natural extra = y;
          for (const auto& [s, e] : sols.intervals()) {
            if (s != y) {
              extra = s;
              break;
            }
            if (e != y) {
              extra = y + 1;
              break;
            }
          }
          Assignment wa = a;
          wa.set(out, extra);
          r.fail({{"assignment", assignment_json(wa)}, {"expected", extra == y}, {"observed", extra != y}});
        }
      } catch (const EvalError& e) {
        ++errors;
        if (e.search_exhausted()) {
          exhausted = e.what();
        } else {
          r.fail({{"assignment", assignment_json(a)}, {"error", e.what()}});
        }
      }
      ++solved;
    }
  }
  if (exhausted) r.inconclusive(*exhausted);
  r.details = {{"tuples", sample.inputs.size()},
               {"evaluations", evaluations},
               {"literal_sweeps", literal},
               {"solver_sweeps", solved},
               {"errors", errors}};
  return r;
}

bool reproduce_relation_witness(const DefinedRelation& rel, const Evaluator& ev, const json& witness) {
  const Assignment a = assignment_from_json(witness.at("assignment"));
  if (witness.contains("error")) {
    try {
      evaluate(rel, ev, a);
      return false;
    } catch (const Error&) {
      return true;
    }
  }
  return evaluate(rel, ev, a) == witness.at("observed").get<bool>();
}

VerificationReport verify_f_tilde(const Evaluator& ev, const ClassParams& params, Natural count, std::uint64_t seed) {
  const auto x0 = resolve_x0(params, ev.pseudo_inverse());
  const DefinedRelation rel = define_f_tilde(params, x0);
  if (!x0) {
    auto r = make_report("relation.ftilde", rel.provenance, ev.oracle().id());
    r.params = params_json(params);
    r.inconclusive("x0 = f^-1(" + std::to_string(params.x0_argument()) + ") out of computational reach");
    return r;
  }
  RelationSample s;
  for (Natural x = *x0 + 1; x <= *x0 + count; ++x) s.inputs.push_back(Assignment{{"x", x}});
  const FunctionOracle& f = ev.oracle();
  s.expected = [&f](const Assignment& a) { return f(a.get("x")); };
  s.sweep_bound = [](const Assignment& a) { return 2 * (a.get("x") + 1); };
  s.literal_sweeps = s.inputs.size();
  s.seed = seed;
  auto r = verify_defined_relation(rel, ev, s);
  r.ranges = {{"x", {*x0 + 1, *x0 + count}}, {"y_sweep", "0 <= y < 2(x+1)"}};
  return r;
}

VerificationReport verify_c_n_squared(const Evaluator& ev, const ClassParams& params, Natural n_hi,
                                      std::uint64_t seed) {
  const auto x0 = resolve_x0(params, ev.pseudo_inverse());
  const DefinedRelation rel = define_c_n_squared(params, x0);
  if (!x0) {
    auto r = make_report("relation.csquare", rel.provenance, ev.oracle().id());
    r.params = params_json(params);
    r.inconclusive("x0 = f^-1(" + std::to_string(params.x0_argument()) + ") out of computational reach");
    return r;
  }
  RelationSample s;
  for (Natural n = params.n1(); n <= n_hi; ++n) s.inputs.push_back(Assignment{{"n", n}});
  const Natural c = params.c();
  const Natural k = params.k();
  const PseudoInverse& finv = ev.pseudo_inverse();
  s.expected = [c](const Assignment& a) { return c * a.get("n") * a.get("n"); };
  // Every witness x satisfies x <= f^{-1}(cn + k), so y < x + n stays below this.
  s.sweep_bound = [&finv, c, k](const Assignment& a) {
    const Natural n = a.get("n");
    return 2 * (finv(c * n + k) + n);
  };
  s.literal_sweeps = 9;
  s.seed = seed;
  auto r = verify_defined_relation(rel, ev, s);
  r.ranges = {{"n", {params.n1(), n_hi}}, {"y_sweep", "0 <= y < 2(f^-1(cn + k) + n)"}};
  r.notes.push_back("uniqueness: the first " + std::to_string(s.literal_sweeps) +
                    " n evaluate every y directly; the rest use the exact candidate solver");
  return r;
}

VerificationReport verify_multiplication(const Evaluator& ev, const ClassParams& params, Natural max,
                                         std::uint64_t seed) {
  const auto x0 = resolve_x0(params, ev.pseudo_inverse());
  const DefinedRelation rel = define_multiplication(params, x0);
  if (!x0) {
    auto r = make_report("relation.mult", rel.provenance, ev.oracle().id());
    r.params = params_json(params);
    r.inconclusive("x0 = f^-1(" + std::to_string(params.x0_argument()) + ") out of computational reach");
    return r;
  }
  RelationSample s;
  for (Natural a = 0; a <= max; ++a) {
    for (Natural b = 0; b <= max; ++b) s.inputs.push_back(Assignment{{"a", a}, {"b", b}});
  }
  s.expected = [](const Assignment& a) { return a.get("a") * a.get("b"); };
  s.sweep_bound = [](const Assignment& a) -> Natural {
    return a.get("a") <= 4 && a.get("b") <= 4 ? a.get("a") * a.get("b") + 16 : 0;
  };
  s.literal_sweeps = s.inputs.size();
  s.seed = seed;
  auto r = verify_defined_relation(rel, ev, s);
  r.ranges = {{"a", {0, max}}, {"b", {0, max}}, {"z_sweep", "0 <= z < ab + 16 for a, b <= 4"}};
  return r;
}

std::vector<std::pair<std::string, DefinedRelation>> relation_mutants(const DefinedRelation& rel) {
  const std::string& out = rel.output();
  std::vector<std::pair<std::string, WitnessHint>> prefix;
  const Formula* body = &rel.formula;
  while (body->kind() == Formula::Kind::Exists) {
    prefix.emplace_back(body->var(), body->hint());
    body = &body->body();
  }
  auto wrap = [&](Formula phi) {
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) phi = Formula::exists(it->first, it->second, phi);
    return phi;
  };

  std::vector<std::pair<std::string, DefinedRelation>> out_list;
  std::vector<Formula> parts;
  std::vector<const Formula*> stack{body};
  while (!stack.empty()) {
    const Formula* p = stack.back();
    stack.pop_back();
    if (p->kind() == Formula::Kind::And) {
      stack.push_back(&p->second());
      stack.push_back(&p->first());
    } else {
      parts.push_back(*p);
    }
  }
  if (parts.size() >= 2) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (!contains(parts[i].free_vars(), out)) continue;
      std::vector<Formula> rest;
      for (std::size_t j = 0; j < parts.size(); ++j) {
        if (j != i) rest.push_back(parts[j]);
      }
      DefinedRelation m = rel;
      m.formula = wrap(Formula::conj(rest));
      out_list.emplace_back("drop-conjunct-" + std::to_string(i), std::move(m));
    }
  }
  DefinedRelation shifted = rel;
  shifted.formula = substitute(rel.formula, out, Term::sum(Term::var(out), Term::one()));
  out_list.emplace_back("shift-output", std::move(shifted));
  return out_list;
}

VerificationReport verify_relation_mutants(const DefinedRelation& rel, const Evaluator& ev,
                                           const RelationSample& sample) {
  std::vector<VerificationReport> parts;
  for (const auto& [name, m] : relation_mutants(rel)) {
    auto outcome = verify_defined_relation(m, ev, sample);
    auto r = make_report("mutant." + rel.name + "." + name, "corrupted formula rejected", ev.oracle().id());
    r.details = {{"formula_size", measure(m.formula).nodes}};
    if (outcome.result != Outcome::Fail) {
      r.fail({{"mutant", name}, {"result", std::string(to_string(outcome.result))}});
    } else {
      r.details["witness"] = *outcome.witness;
    }
    parts.push_back(std::move(r));
  }
  auto r = combine("relation-mutants." + rel.name, "every corrupted formula is rejected", ev.oracle().id(),
                   std::move(parts));
  r.seed = sample.seed;
  return r;
}

VerificationReport lint_relation(const DefinedRelation& rel) {
  auto r = make_report("lint." + rel.name, "formula over {+, 1, F} with free variables = declared roles", "none");
  VarSet allowed;
  for (const auto& v : rel.vars) allowed.push_back(v.name);
  std::sort(allowed.begin(), allowed.end());
  const auto problems = lint(rel.formula, &allowed);
  if (!problems.empty()) r.fail({{"problems", problems}});
  if (rel.formula.free_vars() != allowed) {
    r.fail({{"free", rel.formula.free_vars()}, {"declared", allowed}});
  }
  const SizeMetrics m = measure(rel.formula);
  r.details = {{"nodes", m.nodes},
               {"equations", m.equations},
               {"quantifiers", m.quantifiers},
               {"f_applications", m.f_applications},
               {"max_depth", m.max_depth}};
  return r;
}

}  // namespace quotdef
