#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "quotdef/common.hpp"
#include "quotdef/formula.hpp"
#include "quotdef/natural_set.hpp"
#include "quotdef/oracle.hpp"
#include "quotdef/pseudo_inverse.hpp"

namespace quotdef {

struct EvalOptions {
  /// Scan limit of the pseudo-inverse used by FInverseBracket hints.
  Natural pseudo_inverse_limit = Natural{1} << 32;
  /// Largest candidate set a Pinned quantifier may enumerate.
  Natural pinned_limit = Natural{1} << 20;
  /// Largest inner witness domain enumerated while solving for an outer variable.
  Natural enumeration_budget = Natural{1} << 12;
  /// Narrow SearchTo scans with the exact solver. Off gives the plain scan.
  bool accelerate = true;
};

/// Evaluation failure: a refused quantifier, an F application outside the
/// oracle's domain, or overflow. path() lists the enclosing quantified
/// variables, outermost first.
class EvalError : public Error {
 public:
  explicit EvalError(const std::string& what, bool exhausted = false)
      : Error(what), message_(what), exhausted_(exhausted) {}

  const std::vector<std::string>& path() const noexcept { return path_; }
  /// A pseudo-inverse needed for a witness bracket ran out of search range.
  bool search_exhausted() const noexcept { return exhausted_; }
  void push_outer(const std::string& var);
  const char* what() const noexcept override { return full_.empty() ? message_.c_str() : full_.c_str(); }

 private:
  std::string message_;
  std::string full_;
  std::vector<std::string> path_;
  bool exhausted_;
};

struct WitnessRecord {
  std::string var;
  Natural value;
};

/// Interprets formulas over (N, +, 1, F) with F(t) = t * f(t).
class Evaluator {
 public:
  explicit Evaluator(FunctionOracle f, EvalOptions options = {});

  Natural term(const Term& t, const Assignment& a) const;
  bool formula(const Formula& phi, const Assignment& a) const;
  /// As formula(); on success `witnesses` receives the witnesses used, in
  /// the order their quantifiers were satisfied (outer before inner).
  bool formula(const Formula& phi, const Assignment& a, std::vector<WitnessRecord>& witnesses) const;

  /// Exactly the v in [lo, hi] for which phi holds with the other variables
  /// fixed by `a`. Throws EvalError when more than `max_points` candidates
  /// survive the solver.
  NaturalSet solutions(const Formula& phi, const Assignment& a, const std::string& v, Natural lo, Natural hi,
                       Natural max_points = Natural{1} << 20) const;

  /// Scan range (low, high] for an FInverseBracket with the given target;
  /// low is -1 when the lower target is negative.
  std::pair<std::int64_t, Natural> bracket(Natural target, std::int64_t low_offset, std::int64_t high_offset) const;

  const FunctionOracle& oracle() const noexcept { return f_; }
  const PseudoInverse& pseudo_inverse() const noexcept { return *finv_; }
  const EvalOptions& options() const noexcept { return options_; }

 private:
  struct Env;

  Natural eval_term(const Term& t, const Env& env) const;
  bool eval(const Formula& phi, Env& env, std::vector<WitnessRecord>* trace) const;
  bool eval_exists(const Formula& phi, Env& env, std::vector<WitnessRecord>* trace) const;
  NaturalSet candidates(const Formula& phi, Env& env, const std::string& v, Natural lo, Natural hi) const;
  NaturalSet project(const Formula& phi, Env& env, const std::string& v, Natural lo, Natural hi) const;

  FunctionOracle f_;
  EvalOptions options_;
  std::shared_ptr<PseudoInverse> finv_;

  // Candidate sets of quantified subformulas, keyed by node, solved
  // variable (empty for a pinned witness), bounds and the other free values.
  struct Memo {
    using Key = std::tuple<const void*, std::string, Natural, Natural, std::vector<Natural>>;
    std::mutex mutex;
    std::map<Key, std::pair<Formula, NaturalSet>> sets;
  };
  Memo::Key memo_key(const Formula& phi, const Env& env, const std::string& v, Natural lo, Natural hi) const;
  std::optional<NaturalSet> memo_find(const Memo::Key& key) const;
  void memo_store(Memo::Key key, const Formula& phi, const NaturalSet& set) const;
  NaturalSet pinned_candidates(const Formula& phi, Env& env) const;
  std::shared_ptr<Memo> memo_ = std::make_shared<Memo>();
};

}  // namespace quotdef
