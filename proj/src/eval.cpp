#include "quotdef/eval.hpp"

#include <algorithm>
#include <string_view>

namespace quotdef {

void EvalError::push_outer(const std::string& var) {
  path_.insert(path_.begin(), var);
  full_ = message_ + " (under exists";
  for (const auto& v : path_) full_ += " " + v;
  full_ += ")";
}

struct Evaluator::Env {
  std::vector<std::pair<std::string_view, Natural>> binds;

  Natural lookup(std::string_view name) const {
    for (auto it = binds.rbegin(); it != binds.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    throw EvalError("unassigned variable '" + std::string(name) + "'");
  }
};

namespace {

using Wide = __int128;

// Pushes one binding for the lifetime of the scope; the value can be changed.
class Scope {
 public:
  Scope(std::vector<std::pair<std::string_view, Natural>>& binds, std::string_view name) : binds_(binds) {
    binds_.emplace_back(name, 0);
    index_ = binds_.size() - 1;
  }
  ~Scope() { binds_.pop_back(); }
  Scope(const Scope&) = delete;
  Scope& operator=(const Scope&) = delete;
  void set(Natural v) { binds_[index_].second = v; }

 private:
  std::vector<std::pair<std::string_view, Natural>>& binds_;
  std::size_t index_;
};

Wide floor_div(Wide a, Wide b) {
  Wide q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

Wide ceil_div(Wide a, Wide b) {
  Wide q = a / b;
  if (a % b != 0 && a > 0) ++q;
  return q;
}

NaturalSet clamp(Wide low, Wide high, Natural lo, Natural hi) {
  if (high < static_cast<Wide>(lo) || low > static_cast<Wide>(hi) || low > high) return {};
  return NaturalSet::range(static_cast<Natural>(std::max(low, static_cast<Wide>(lo))),
                           static_cast<Natural>(std::min(high, static_cast<Wide>(hi))));
}

// cv * v + cw * w + c, or not linear.
struct Linear {
  Wide cv = 0;
  Wide cw = 0;
  Wide c = 0;
  bool ok = true;

  Linear& operator+=(const Linear& o) {
    cv += o.cv;
    cw += o.cw;
    c += o.c;
    ok = ok && o.ok;
    return *this;
  }

  Linear& operator-=(const Linear& o) {
    cv -= o.cv;
    cw -= o.cw;
    c -= o.c;
    ok = ok && o.ok;
    return *this;
  }
};

void flatten(const Formula& phi, Formula::Kind kind, std::vector<const Formula*>& out) {
  if (phi.kind() == kind) {
    flatten(phi.first(), kind, out);
    flatten(phi.second(), kind, out);
  } else {
    out.push_back(&phi);
  }
}

}  // namespace

Evaluator::Evaluator(FunctionOracle f, EvalOptions options)
    : f_(std::move(f)),
      options_(options),
      finv_(std::make_shared<PseudoInverse>(f_, options.pseudo_inverse_limit)) {}

// ---------------------------------------------------------------- concrete

Natural Evaluator::eval_term(const Term& t, const Env& env) const {
  if (const auto c = t.constant()) return *c;
  switch (t.kind()) {
    case Term::Kind::Var: return env.lookup(t.name());
    case Term::Kind::One: return 1;
    case Term::Kind::Sum: {
      std::vector<const Term*> rights;
      const Term* leaf = &t;
      for (; leaf->kind() == Term::Kind::Sum && !leaf->constant(); leaf = &leaf->left()) {
        rights.push_back(&leaf->right());
      }
      Natural acc = eval_term(*leaf, env);
      try {
        for (auto it = rights.rbegin(); it != rights.rend(); ++it) acc = checked_add(acc, eval_term(**it, env));
      } catch (const OverflowError& e) {
        throw EvalError(e.what());
      }
      return acc;
    }
    case Term::Kind::FApp: {
      const Natural x = eval_term(t.arg(), env);
      if (!f_.in_range(x)) {
        throw EvalError("F applied at " + std::to_string(x) + ", outside the domain of " + f_.id());
      }
      try {
        return checked_mul(x, f_(x));
      } catch (const OverflowError& e) {
        throw EvalError(e.what());
      }
    }
  }
  throw EvalError("corrupt term");
}

bool Evaluator::eval(const Formula& phi, Env& env, std::vector<WitnessRecord>* trace) const {
  switch (phi.kind()) {
    case Formula::Kind::Eq: return eval_term(phi.lhs(), env) == eval_term(phi.rhs(), env);
    case Formula::Kind::And: {
      const std::size_t mark = trace ? trace->size() : 0;
      if (eval(phi.first(), env, trace) && eval(phi.second(), env, trace)) return true;
      if (trace) trace->resize(mark);
      return false;
    }
    case Formula::Kind::Or: return eval(phi.first(), env, trace) || eval(phi.second(), env, trace);
    case Formula::Kind::Exists:
      try {
        return eval_exists(phi, env, trace);
      } catch (EvalError& e) {
        e.push_outer(phi.var());
        throw;
      }
  }
  throw EvalError("corrupt formula");
}

bool Evaluator::eval_exists(const Formula& phi, Env& env, std::vector<WitnessRecord>* trace) const {
  const std::string& w = phi.var();
  const Formula& body = phi.body();

  auto try_value = [&](Scope& scope, Natural x) {
    scope.set(x);
    const std::size_t mark = trace ? trace->size() : 0;
    if (trace) trace->push_back({w, x});
    if (eval(body, env, trace)) return true;
    if (trace) trace->resize(mark);
    return false;
  };
  auto scan = [&](const NaturalSet& domain) {
    if (domain.empty()) return false;
    Scope scope(env.binds, w);
    return domain.any_of([&](Natural x) { return try_value(scope, x); });
  };
  auto narrowed = [&](Natural lo, Natural hi) {
    return options_.accelerate ? candidates(body, env, w, lo, hi) : NaturalSet::range(lo, hi);
  };

  const WitnessHint& hint = phi.hint();
  if (auto s = std::get_if<SearchTo>(&hint)) {
    const Natural bound = eval_term(s->bound, env);
    return scan(narrowed(0, bound));
  }
  if (auto b = std::get_if<FInverseBracket>(&hint)) {
    const auto [low, high] = bracket(eval_term(b->target, env), b->low_offset, b->high_offset);
    if (static_cast<Wide>(high) <= low) return false;
    return scan(narrowed(static_cast<Natural>(low + 1), high));
  }
  if (std::holds_alternative<Pinned>(hint)) {
    return scan(pinned_candidates(phi, env));
  }
  throw EvalError("quantifier over '" + w + "' has no witness bound; evaluation refused");
}

Evaluator::Memo::Key Evaluator::memo_key(const Formula& phi, const Env& env, const std::string& v, Natural lo,
                                         Natural hi) const {
  Memo::Key key{phi.identity(), v, lo, hi, {}};
  for (const auto& name : phi.free_vars()) {
    if (name != v) std::get<4>(key).push_back(env.lookup(name));
  }
  return key;
}

std::optional<NaturalSet> Evaluator::memo_find(const Memo::Key& key) const {
  std::lock_guard lock(memo_->mutex);
  if (auto it = memo_->sets.find(key); it != memo_->sets.end()) return it->second.second;
  return std::nullopt;
}

void Evaluator::memo_store(Memo::Key key, const Formula& phi, const NaturalSet& set) const {
  constexpr std::size_t kMemoEntries = std::size_t{1} << 16;
  std::lock_guard lock(memo_->mutex);
  if (memo_->sets.size() >= kMemoEntries) memo_->sets.clear();
  memo_->sets.emplace(std::move(key), std::make_pair(phi, set));
}

NaturalSet Evaluator::pinned_candidates(const Formula& phi, Env& env) const {
  auto key = memo_key(phi, env, "", 0, kNaturalMax);
  if (auto hit = memo_find(key)) return *hit;
  const std::string& w = phi.var();
  NaturalSet cands = candidates(phi.body(), env, w, 0, kNaturalMax);
  if (cands.count() > options_.pinned_limit) {
    throw EvalError("witness for '" + w + "' is not pinned by its body (" +
                    (cands.count() == kNaturalMax ? std::string("unbounded") : std::to_string(cands.count())) +
                    " candidates)");
  }
  memo_store(std::move(key), phi, cands);
  return cands;
}

std::pair<std::int64_t, Natural> Evaluator::bracket(Natural target, std::int64_t low_offset,
                                                    std::int64_t high_offset) const {
  const Wide low_target = static_cast<Wide>(target) + low_offset;
  const Wide high_target = static_cast<Wide>(target) + high_offset;
  if (high_target < 0) return {0, 0};
  try {
    std::int64_t low;
    if (low_target < 0) {
      low = f_.n_start() == 0 ? -1 : static_cast<std::int64_t>(f_.n_start() - 1);
    } else {
      low = static_cast<std::int64_t>((*finv_)(static_cast<Natural>(low_target)));
    }
    const Natural high = (*finv_)(static_cast<Natural>(high_target));
    return {low, high};
  } catch (const SearchExhausted& e) {
    throw EvalError(std::string("witness bracket unresolved: ") + e.what(), true);
  } catch (const OutOfRange& e) {
    throw EvalError(std::string("witness bracket unresolved: ") + e.what(), true);
  }
}

// ---------------------------------------------------------------- solving
//
// candidates() returns a superset of the v in [lo, hi] satisfying phi, exact
// whenever every atom mentioning v is linear in v and every quantifier above
// such an atom can be projected or enumerated. Callers re-check members
// concretely, so a coarse answer only costs time.

NaturalSet Evaluator::candidates(const Formula& phi, Env& env, const std::string& v, Natural lo, Natural hi) const {
  if (lo > hi) return {};
  const NaturalSet full = NaturalSet::range(lo, hi);
  if (!contains(phi.free_vars(), v)) return eval(phi, env, nullptr) ? full : NaturalSet{};

  switch (phi.kind()) {
    case Formula::Kind::Eq: {
      auto linearize = [&](auto&& self, const Term& t) -> Linear {
        if (!contains(t.vars(), v)) return Linear{0, 0, static_cast<Wide>(eval_term(t, env)), true};
        switch (t.kind()) {
          case Term::Kind::Var: return Linear{1, 0, 0, true};
          case Term::Kind::Sum: {
            Linear acc;
            const Term* leaf = &t;
            for (; leaf->kind() == Term::Kind::Sum && contains(leaf->vars(), v); leaf = &leaf->left()) {
              acc += self(self, leaf->right());
            }
            acc += self(self, *leaf);
            return acc;
          }
          default: return Linear{0, 0, 0, false};
        }
      };
      Linear l = linearize(linearize, phi.lhs());
      l -= linearize(linearize, phi.rhs());
      if (!l.ok) return full;
      if (l.cv == 0) return l.c == 0 ? full : NaturalSet{};
      if (l.c % l.cv != 0) return {};
      const Wide x = -l.c / l.cv;
      return clamp(x, x, lo, hi);
    }
    case Formula::Kind::And: {
      std::vector<const Formula*> parts;
      flatten(phi, Formula::Kind::And, parts);
      std::stable_partition(parts.begin(), parts.end(),
                            [](const Formula* p) { return p->kind() != Formula::Kind::Exists; });
      NaturalSet s = full;
      for (const Formula* p : parts) {
        if (s.empty()) break;
        s = s.intersect(candidates(*p, env, v, s.min(), s.max()));
      }
      return s;
    }
    case Formula::Kind::Or: {
      std::vector<const Formula*> parts;
      flatten(phi, Formula::Kind::Or, parts);
      NaturalSet s;
      for (const Formula* p : parts) {
        s = s.unite(candidates(*p, env, v, lo, hi));
        if (s == full) break;
      }
      return s;
    }
    case Formula::Kind::Exists: return project(phi, env, v, lo, hi);
  }
  return full;
}

NaturalSet Evaluator::project(const Formula& phi, Env& env, const std::string& v, Natural lo, Natural hi) const {
  const NaturalSet full = NaturalSet::range(lo, hi);
  const std::string& w = phi.var();
  const Formula& body = phi.body();

  // Witness domain [wlo, whi] in the enclosing scope, when v does not enter it.
  Natural wlo = 0;
  Natural whi = 0;
  const WitnessHint& hint = phi.hint();
  if (auto s = std::get_if<SearchTo>(&hint)) {
    if (contains(s->bound.vars(), v)) return full;
    whi = eval_term(s->bound, env);
  } else if (auto b = std::get_if<FInverseBracket>(&hint)) {
    if (contains(b->target.vars(), v)) return full;
    const auto [low, high] = bracket(eval_term(b->target, env), b->low_offset, b->high_offset);
    if (static_cast<Wide>(high) <= low) return {};
    wlo = static_cast<Natural>(low + 1);
    whi = high;
  } else {
    return full;
  }

  if (body.kind() == Formula::Kind::Eq) {
    auto linearize = [&](auto&& self, const Term& t) -> Linear {
      const bool has_v = contains(t.vars(), v);
      const bool has_w = contains(t.vars(), w);
      if (!has_v && !has_w) return Linear{0, 0, static_cast<Wide>(eval_term(t, env)), true};
      switch (t.kind()) {
        case Term::Kind::Var: return t.name() == w ? Linear{0, 1, 0, true} : Linear{1, 0, 0, true};
        case Term::Kind::Sum: {
          Linear acc;
          const Term* leaf = &t;
          for (; leaf->kind() == Term::Kind::Sum && (contains(leaf->vars(), v) || contains(leaf->vars(), w));
               leaf = &leaf->left()) {
            acc += self(self, leaf->right());
          }
          acc += self(self, *leaf);
          return acc;
        }
        default: return Linear{0, 0, 0, false};
      }
    };
    Linear l = linearize(linearize, body.lhs());
    l -= linearize(linearize, body.rhs());
    if (l.ok && (l.cw == 1 || l.cw == -1)) {
      // w = L v + C must land in [wlo, whi].
      const Wide L = -l.cw * l.cv;
      const Wide C = -l.cw * l.c;
      const Wide a = wlo;
      const Wide b = whi;
      if (L == 0) return (C >= a && C <= b) ? full : NaturalSet{};
      if (L > 0) return clamp(ceil_div(a - C, L), floor_div(b - C, L), lo, hi);
      return clamp(ceil_div(C - b, -L), floor_div(C - a, -L), lo, hi);
    }
    if (l.ok && l.cw == 0) {
      // w does not occur; the quantifier is vacuous over a nonempty domain.
      Scope scope(env.binds, w);
      scope.set(wlo);
      return candidates(body, env, v, lo, hi);
    }
  }

  if (whi - wlo >= options_.enumeration_budget) return full;
  // Cached over all of N so that narrower requests reuse the enumeration.
  auto key = memo_key(phi, env, v, 0, kNaturalMax);
  if (auto hit = memo_find(key)) return hit->intersect(full);
  const NaturalSet everything = NaturalSet::range(0, kNaturalMax);
  NaturalSet s;
  {
    Scope scope(env.binds, w);
    for (Natural x = wlo;; ++x) {
      scope.set(x);
      s = s.unite(candidates(body, env, v, 0, kNaturalMax));
      if (s == everything || x == whi) break;
    }
  }
  memo_store(std::move(key), phi, s);
  return s.intersect(full);
}

// ---------------------------------------------------------------- public

namespace {

void load(const Assignment& a, std::vector<std::pair<std::string_view, Natural>>& binds) {
  for (const auto& [name, value] : a.values()) binds.emplace_back(name, value);
}

}  // namespace

Natural Evaluator::term(const Term& t, const Assignment& a) const {
  Env env;
  load(a, env.binds);
  return eval_term(t, env);
}

bool Evaluator::formula(const Formula& phi, const Assignment& a) const {
  Env env;
  load(a, env.binds);
  return eval(phi, env, nullptr);
}

bool Evaluator::formula(const Formula& phi, const Assignment& a, std::vector<WitnessRecord>& witnesses) const {
  Env env;
  load(a, env.binds);
  witnesses.clear();
  return eval(phi, env, &witnesses);
}

NaturalSet Evaluator::solutions(const Formula& phi, const Assignment& a, const std::string& v, Natural lo,
                                Natural hi, Natural max_points) const {
  Env env;
  load(a, env.binds);
  const NaturalSet cands = candidates(phi, env, v, lo, hi);
  if (cands.count() > max_points) {
    throw EvalError("solution set for '" + v + "' not narrowed below " + std::to_string(max_points) + " candidates");
  }
  NaturalSet out;
  Scope scope(env.binds, v);
  cands.any_of([&](Natural x) {
    scope.set(x);
    if (eval(phi, env, nullptr)) out.append(x, x);
    return false;
  });
  return out;
}

}  // namespace quotdef
