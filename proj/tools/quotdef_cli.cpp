// quotdef: command-line front end for the prime-quotient definability toolkit.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "quotdef/definability.hpp"
#include "quotdef/eval.hpp"
#include "quotdef/oracle.hpp"
#include "quotdef/prime_estimates.hpp"
#include "quotdef/prime_table.hpp"
#include "quotdef/quotient_class.hpp"
#include "quotdef/text.hpp"
#include "quotdef/verifier.hpp"

namespace {

using namespace quotdef;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string profile = "desk";
  std::optional<Natural> sieve_limit;
  std::string cache;
  std::string oracle;
  std::string params;
  std::string range;
  std::optional<Natural> n_max;
  std::uint64_t seed = 1;
  std::string out;
  unsigned jobs = 1;
  bool timing = false;

  Natural effective_sieve_limit() const {
    if (sieve_limit) return *sieve_limit;
    if (profile == "test") return 10'000'000;
    if (profile == "desk") return 100'000'000;
    if (profile == "large") return 1'000'000'000;
    throw UsageError("unknown profile '" + profile + "' (test, desk or large)");
  }

  json to_json() const {
    json j{{"profile", profile}, {"sieve_limit", effective_sieve_limit()}, {"seed", seed}, {"jobs", jobs}};
    if (!cache.empty()) j["cache"] = cache;
    if (!oracle.empty()) j["oracle"] = oracle;
    if (!params.empty()) j["params"] = params;
    if (!range.empty()) j["range"] = range;
    if (n_max) j["nmax"] = *n_max;
    if (!out.empty()) j["out"] = out;
    return j;
  }
};

Natural parse_natural(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw UsageError(what + " must be a natural number, got '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::out_of_range&) {
    throw UsageError(what + " out of range: " + s);
  }
}

std::pair<Natural, Natural> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) throw UsageError("range must be A..B, got '" + s + "'");
  const Natural a = parse_natural(s.substr(0, dots), "range start");
  const Natural b = parse_natural(s.substr(dots + 2), "range end");
  if (a > b) throw UsageError("empty range '" + s + "'");
  return {a, b};
}

ClassParams parse_params(const std::string& s) {
  try {
    return ClassParams::parse(s);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

std::shared_ptr<const PrimeTable> prime_table(const RunConfig& cfg) {
  const Natural limit = cfg.effective_sieve_limit();
  if (!cfg.cache.empty() && std::filesystem::exists(cfg.cache)) {
    auto t = std::make_shared<const PrimeTable>(load_prime_cache(cfg.cache));
    if (t->limit() == limit) return t;
  }
  SieveOptions opts;
  opts.jobs = cfg.jobs;
  auto t = std::make_shared<const PrimeTable>(sieve_upto(limit, opts));
  if (!cfg.cache.empty()) save_prime_cache(*t, cfg.cache);
  return t;
}

FunctionOracle make_oracle(const RunConfig& cfg, const std::string& selector) {
  if (selector == "prime") return make_prime_quotient(prime_table(cfg));
  if (selector.rfind("sqrt-like:", 0) == 0) {
    const Natural d = parse_natural(selector.substr(10), "sqrt-like d");
    if (d == 0) throw UsageError("sqrt-like d must be >= 1");
    return make_sqrt_like(d);
  }
  if (selector.rfind("table:", 0) == 0) return load_table_oracle(selector.substr(6));
  throw UsageError("unknown oracle '" + selector + "' (prime, sqrt-like:d or table:path)");
}

Natural search_limit_for(const FunctionOracle& f) {
  return f.max_argument().value_or(Natural{1} << 32);
}

/// Largest n >= from with f^{-1}(n) resolvable, or nullopt if none is.
std::optional<Natural> largest_resolvable(const FunctionOracle& f, Natural from) {
  PseudoInverse finv(f, search_limit_for(f));
  std::optional<Natural> best;
  for (Natural n = from;; ++n) {
    try {
      finv(n);
      best = n;
    } catch (const SearchExhausted&) {
      return best;
    }
  }
}

void emit(const RunConfig& cfg, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw Error("cannot write " + cfg.out);
    out << text;
  }
}

int finish(const RunConfig& cfg, const VerificationReport& r) {
  json j = to_json(r, cfg.timing);
  j["config"] = cfg.to_json();
  emit(cfg, j);
  switch (r.result) {
    case Outcome::Pass: return kExitPass;
    case Outcome::Fail: return kExitFail;
    case Outcome::Inconclusive: return kExitInconclusive;
  }
  return kExitFail;
}

// ---------------------------------------------------------------- subcommands

int run_sieve(RunConfig& cfg, Natural limit) {
  if (limit < 2) throw UsageError("--limit must be >= 2");
  if (limit > PrimeTable::kMaxLimit) throw UsageError("--limit must be <= " + std::to_string(PrimeTable::kMaxLimit));
  cfg.sieve_limit = limit;
  const Stopwatch clock;
  const auto t = prime_table(cfg);
  json j{{"limit", t->limit()}, {"count", t->count()}, {"last_prime", (*t)[t->count() - 1]}};
  if (!cfg.cache.empty()) j["cache"] = cfg.cache;
  j["runtime_ms"] = cfg.timing ? json(clock.elapsed_ms()) : json(nullptr);
  emit(cfg, j);
  return kExitPass;
}

int run_check_class(RunConfig& cfg) {
  if (cfg.oracle.empty()) throw UsageError("--oracle is required");
  if (cfg.params.empty()) throw UsageError("--params is required");
  const ClassParams p = parse_params(cfg.params);
  const FunctionOracle f = make_oracle(cfg, cfg.oracle);
  Natural lo = f.n_start();
  Natural hi = f.max_argument().value_or(1'000'000);
  if (!cfg.range.empty()) std::tie(lo, hi) = parse_range(cfg.range);
  Natural n_max;
  if (cfg.n_max) {
    n_max = *cfg.n_max;
  } else if (f.max_argument()) {
    const auto best = largest_resolvable(f, p.n0());
    if (!best) throw UsageError("f^-1(n0) is not resolvable within the oracle; pass --nmax");
    n_max = *best;
  } else {
    n_max = 10'000;
  }
  if (n_max < p.n0()) throw UsageError("--nmax must be >= n0");
  const Stopwatch clock;
  auto r = class_check(f, p, lo, hi, n_max, search_limit_for(f));
  r.runtime_ms = clock.elapsed_ms();
  return finish(cfg, r);
}

struct VerifyOptions {
  std::string check;
  std::string indexing = "zero";
  std::optional<Natural> pair_bound;
  std::optional<Natural> tail_bound;
  std::optional<Natural> count;
};

PrimeIndexing parse_indexing(const std::string& s) {
  if (s == "zero") return PrimeIndexing::ZeroBased;
  if (s == "one") return PrimeIndexing::OneBased;
  throw UsageError("--indexing must be zero or one");
}

int run_verify(RunConfig& cfg, const VerifyOptions& v) {
  const std::string& id = v.check;
  const Stopwatch clock;
  auto done = [&](VerificationReport r) {
    if (!r.runtime_ms) r.runtime_ms = clock.elapsed_ms();
    return finish(cfg, r);
  };
  auto prime_oracle = [&] {
    if (!cfg.oracle.empty() && cfg.oracle != "prime") return make_oracle(cfg, cfg.oracle);
    cfg.oracle = "prime";
    return make_oracle(cfg, "prime");
  };
  auto class_oracle = [&](const char* fallback) {
    if (cfg.oracle.empty()) cfg.oracle = fallback;
    return make_oracle(cfg, cfg.oracle);
  };
  auto class_params = [&](const FunctionOracle& f) {
    if (cfg.params.empty()) {
      if (f.kind() == OracleKind::PrimeQuotient) {
        cfg.params = "1,1,11";
      } else if (f.kind() == OracleKind::SqrtLike) {
        cfg.params = "0," + f.id().substr(f.id().find(':') + 1) + ",1";
      } else {
        throw UsageError("--params is required for this oracle");
      }
    }
    return parse_params(cfg.params);
  };

  if (id == "max-quotient") {
    cfg.oracle = "prime";
    const auto t = prime_table(cfg);
    return done(verify_max_quotient(*t, parse_indexing(v.indexing)));
  }
  if (id == "estimates") {
    cfg.oracle = "prime";
    const auto t = prime_table(cfg);
    const Natural last = std::min<Natural>(t->count() - 1 - (v.indexing == "one" ? 0 : 1), 50'000'000);
    Natural lo = 2;
    Natural hi = last;
    if (!cfg.range.empty()) std::tie(lo, hi) = parse_range(cfg.range);
    return done(check_estimates(*t, {lo, hi}, {std::max<Natural>(lo, kEstimateThreshold), hi},
                                parse_indexing(v.indexing)));
  }
  if (id == "prop1-item1") {
    const FunctionOracle f = prime_oracle();
    const Natural last = f.max_argument().value_or(2'000'000);
    return done(verify_prop1_item1(f, v.pair_bound.value_or(std::min<Natural>(200'000, last)),
                                   v.tail_bound.value_or(std::min<Natural>(1'000'000, last))));
  }
  if (id == "prop1-item2") {
    const FunctionOracle f = prime_oracle();
    return done(verify_prop1_item2(f, cfg.n_max));
  }
  if (id == "class") {
    const FunctionOracle f = class_oracle("prime");
    const ClassParams p = class_params(f);
    Natural lo = f.n_start();
    Natural hi = f.max_argument().value_or(1'000'000);
    if (!cfg.range.empty()) std::tie(lo, hi) = parse_range(cfg.range);
    Natural n_max = cfg.n_max.value_or(10'000);
    if (!cfg.n_max && f.max_argument()) n_max = largest_resolvable(f, p.n0()).value_or(p.n0());
    return done(class_check(f, p, lo, hi, n_max, search_limit_for(f)));
  }
  if (id == "lemma1" || id == "lemma2" || id == "lemma3" || id == "lemma-mutants") {
    const FunctionOracle f = class_oracle("sqrt-like:1");
    const ClassParams p = class_params(f);
    const bool finite = f.max_argument().has_value();
    Natural n_max = cfg.n_max.value_or(1000);
    if (!cfg.n_max && finite) n_max = largest_resolvable(f, p.n0()).value_or(p.n0());
    Natural lo = f.n_start();
    Natural hi = finite ? std::min<Natural>(*f.max_argument(), 1'000'000) : 10'000;
    if (!cfg.range.empty()) std::tie(lo, hi) = parse_range(cfg.range);
    if (id == "lemma1") return done(verify_lemma1(f, p, n_max, search_limit_for(f)));
    if (id == "lemma2") return done(verify_lemma2(f, p, lo, hi, cfg.seed));
    if (id == "lemma3") return done(verify_lemma3_ingredients(f, p, lo, hi, search_limit_for(f)));
    return done(verify_lemma_mutants(f, p, std::min<Natural>(n_max, finite ? n_max : 200), std::min<Natural>(hi, 20'000),
                                     search_limit_for(f), cfg.seed));
  }
  if (id == "ftilde" || id == "csquare" || id == "mult") {
    const FunctionOracle f = class_oracle("sqrt-like:1");
    const ClassParams p = class_params(f);
    const Evaluator ev(f, EvalOptions{.pseudo_inverse_limit = search_limit_for(f)});
    if (id == "ftilde") return done(verify_f_tilde(ev, p, v.count.value_or(500), cfg.seed));
    if (id == "csquare") return done(verify_c_n_squared(ev, p, cfg.n_max.value_or(p.n1() + 200), cfg.seed));
    return done(verify_multiplication(ev, p, v.count.value_or(50), cfg.seed));
  }
  throw UsageError("unknown check id '" + id +
                   "' (max-quotient, estimates, prop1-item1, prop1-item2, class, lemma1, lemma2, lemma3, "
                   "lemma-mutants, ftilde, csquare, mult)");
}

int run_emit(RunConfig& cfg, const std::string& which, bool envelope, std::optional<Natural> x0_given) {
  if (cfg.params.empty()) throw UsageError("--params is required");
  const ClassParams p = parse_params(cfg.params);
  std::optional<Natural> x0 = x0_given;
  if (!x0 && !cfg.oracle.empty()) {
    const FunctionOracle f = make_oracle(cfg, cfg.oracle);
    x0 = resolve_x0(p, PseudoInverse(f, search_limit_for(f)));
  }
  DefinedRelation rel = [&] {
    if (which == "ftilde") return define_f_tilde(p, x0);
    if (which == "csquare") return define_c_n_squared(p, x0);
    if (which == "mult") return define_multiplication(p, x0);
    throw UsageError("unknown relation '" + which + "' (ftilde, csquare or mult)");
  }();
  if (envelope) {
    json j = to_envelope(rel);
    j["config"] = cfg.to_json();
    emit(cfg, j);
  } else {
    const std::string text = print(rel.formula) + "\n";
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream(cfg.out, std::ios::binary) << text;
    }
  }
  return kExitPass;
}

int run_eval(RunConfig& cfg, const std::string& path, const std::string& assign, bool as_json) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read formula file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  Formula phi = parse_formula("(1 = 1)");
  json domain = json::array();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const json env = json::parse(text);
    phi = formula_from_envelope(env);
    if (env.contains("domain")) domain = env.at("domain");
  } else {
    phi = parse_formula(text);
  }
  Assignment a;
  try {
    a = assign.empty() ? Assignment{} : Assignment::parse(assign);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (cfg.oracle.empty()) throw UsageError("--oracle is required");
  const FunctionOracle f = make_oracle(cfg, cfg.oracle);

  for (const auto& c : domain) {
    const std::string var = c.at("variable").get<std::string>();
    if (c.at("threshold").is_null()) {
      std::cerr << "error: domain threshold unreachable (" << c.at("constraint").get<std::string>() << ")\n";
      return kExitInconclusive;
    }
    if (a.has(var) && a.get(var) < c.at("threshold").get<Natural>()) {
      std::cerr << "error: " << var << " = " << a.get(var) << " outside declared domain "
                << c.at("constraint").get<std::string>() << "\n";
      return kExitInconclusive;
    }
  }

  const Evaluator ev(f, EvalOptions{.pseudo_inverse_limit = search_limit_for(f)});
  std::vector<WitnessRecord> witnesses;
  bool value;
  try {
    value = ev.formula(phi, a, witnesses);
  } catch (const EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInconclusive;
  }
  if (as_json) {
    json w = json::array();
    for (const auto& r : witnesses) w.push_back({{"var", r.var}, {"value", r.value}});
    json j{{"value", value}, {"witnesses", w}, {"oracle", f.id()}, {"assignment", json::object()}};
    for (const auto& [k, x] : a.values()) j["assignment"][k] = x;
    emit(cfg, j);
  } else {
    std::ostringstream o;
    o << (value ? "true" : "false") << "\n";
    for (const auto& r : witnesses) o << "witness " << r.var << " = " << r.value << "\n";
    if (cfg.out.empty()) {
      std::cout << o.str();
    } else {
      std::ofstream(cfg.out, std::ios::binary) << o.str();
    }
  }
  return value ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prime-quotient definability toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;
  if (const char* p = std::getenv("QUOTDEF_PROFILE")) cfg.profile = p;
  if (const char* s = std::getenv("QUOTDEF_SIEVE_LIMIT")) {
    try {
      cfg.sieve_limit = parse_natural(s, "QUOTDEF_SIEVE_LIMIT");
    } catch (const UsageError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  if (const char* c = std::getenv("QUOTDEF_PRIME_CACHE")) cfg.cache = c;

  std::optional<Natural> n_max_opt;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--profile", cfg.profile, "test (1e7 sieve), desk (1e8) or large (1e9)");
    sub->add_option("--sieve-limit", cfg.sieve_limit, "prime sieve limit, overrides the profile");
    sub->add_option("--cache", cfg.cache, "prime table cache file (read if present, written otherwise)");
    sub->add_option("--seed", cfg.seed, "seed of randomised sampling");
    sub->add_option("--out", cfg.out, "write output to this file");
    sub->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--timing", cfg.timing, "record runtime_ms in reports");
  };

  Natural sieve_limit = 0;
  auto* sieve = app.add_subcommand("sieve", "sieve primes and print count and largest prime");
  sieve->add_option("--limit", sieve_limit, "sieve upper bound")->required();
  common(sieve);

  auto* check = app.add_subcommand("check-class", "check membership in C(k,d,n0) over finite ranges");
  check->add_option("--oracle", cfg.oracle, "prime | sqrt-like:d | table:path");
  check->add_option("--params", cfg.params, "k,d,n0");
  check->add_option("--range", cfg.range, "A..B range of the almost-increasing check");
  check->add_option("--nmax", n_max_opt, "upper end of the linear-difference check");
  common(check);

  VerifyOptions vopts;
  auto* verify = app.add_subcommand("verify", "run one verification check");
  verify->add_option("check", vopts.check, "check id")->required();
  verify->add_option("--oracle", cfg.oracle, "prime | sqrt-like:d | table:path");
  verify->add_option("--params", cfg.params, "k,d,n0");
  verify->add_option("--range", cfg.range, "A..B");
  verify->add_option("--nmax", n_max_opt, "upper end of n sweeps");
  verify->add_option("--indexing", vopts.indexing, "zero (p_0 = 2) or one (p_1 = 2)");
  verify->add_option("--pair-bound", vopts.pair_bound, "exhaustive pair range of prop1-item1");
  verify->add_option("--tail-bound", vopts.tail_bound, "tail range of prop1-item1");
  verify->add_option("--count", vopts.count, "sample size of relation checks");
  common(verify);

  std::string relation;
  bool envelope = false;
  std::optional<Natural> x0_given;
  auto* emit_cmd = app.add_subcommand("emit-formula", "print a defining formula");
  emit_cmd->add_option("relation", relation, "ftilde | csquare | mult")->required();
  emit_cmd->add_option("--params", cfg.params, "k,d,n0");
  emit_cmd->add_option("--oracle", cfg.oracle, "oracle used to resolve x0");
  emit_cmd->add_option("--x0", x0_given, "explicit x0");
  emit_cmd->add_flag("--envelope", envelope, "print the JSON envelope instead of the formula text");
  common(emit_cmd);

  std::string formula_path;
  std::string assign;
  bool eval_json = false;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a formula under an assignment");
  eval_cmd->add_option("--formula", formula_path, "formula text or JSON envelope file")->required();
  eval_cmd->add_option("--assign", assign, "x=1,y=2");
  eval_cmd->add_option("--oracle", cfg.oracle, "prime | sqrt-like:d | table:path");
  eval_cmd->add_flag("--json", eval_json, "print JSON");
  common(eval_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  cfg.n_max = n_max_opt;

  try {
    if (*sieve) return run_sieve(cfg, sieve_limit);
    if (*check) return run_check_class(cfg);
    if (*verify) return run_verify(cfg, vopts);
    if (*emit_cmd) return run_emit(cfg, relation, envelope, x0_given);
    if (*eval_cmd) return run_eval(cfg, formula_path, assign, eval_json);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
