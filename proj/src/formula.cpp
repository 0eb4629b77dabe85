#include "quotdef/formula.hpp"

#include <algorithm>
#include <functional>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace quotdef {

namespace {

using VarSetPtr = std::shared_ptr<const VarSet>;

const VarSetPtr& empty_vars() {
  static const VarSetPtr empty = std::make_shared<const VarSet>();
  return empty;
}

VarSetPtr unite(const VarSetPtr& a, const VarSetPtr& b) {
  if (b->empty() || a == b) return a;
  if (a->empty()) return b;
  VarSet out;
  out.reserve(a->size() + b->size());
  std::set_union(a->begin(), a->end(), b->begin(), b->end(), std::back_inserter(out));
  if (out.size() == a->size()) return a;
  if (out.size() == b->size()) return b;
  return std::make_shared<const VarSet>(std::move(out));
}

VarSetPtr without(const VarSetPtr& a, const std::string& name) {
  auto it = std::lower_bound(a->begin(), a->end(), name);
  if (it == a->end() || *it != name) return a;
  VarSet out(*a);
  out.erase(out.begin() + (it - a->begin()));
  return std::make_shared<const VarSet>(std::move(out));
}

}  // namespace

bool contains(const VarSet& vars, std::string_view name) {
  return std::binary_search(vars.begin(), vars.end(), name, std::less<>());
}

bool is_identifier(std::string_view s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s) {
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
  }
  return s != "exists";
}

// ---------------------------------------------------------------- Term

struct Term::Node {
  Kind kind;
  std::string name;
  Term a;
  Term b;
  VarSetPtr vars;
  VarSetPtr vars_f;
  std::uint64_t size;
  std::uint64_t depth;
  std::uint64_t f_count;
  std::optional<Natural> constant;

  // Numerals are left spines hundreds of thousands of nodes long; release
  // uniquely owned children iteratively instead of by nested destructors.
  ~Node() {
    std::vector<std::shared_ptr<const Node>> pending;
    auto take = [&pending](Term& t) {
      if (t.node_ && t.node_.use_count() == 1) pending.push_back(std::move(t.node_));
    };
    take(a);
    take(b);
    while (!pending.empty()) {
      auto n = std::move(pending.back());
      pending.pop_back();
      auto& m = const_cast<Node&>(*n);
      take(m.a);
      take(m.b);
    }
  }
};

Term Term::var(std::string name) {
  auto vars = std::make_shared<const VarSet>(VarSet{name});
  return Term(std::make_shared<Node>(Node{Kind::Var, std::move(name), {}, {}, vars, empty_vars(), 1, 1, 0, {}}));
}

Term Term::one() {
  static const Term one(std::make_shared<Node>(Node{Kind::One, {}, {}, {}, empty_vars(), empty_vars(), 1, 1, 0, 1}));
  return one;
}

Term Term::sum(Term left, Term right) {
  auto vars = unite(left.node_->vars, right.node_->vars);
  auto vars_f = unite(left.node_->vars_f, right.node_->vars_f);
  const auto size = 1 + left.size() + right.size();
  const auto depth = 1 + std::max(left.depth(), right.depth());
  const auto f_count = left.f_count() + right.f_count();
  std::optional<Natural> constant;
  if (left.constant() && right.constant() && *left.constant() <= kNaturalMax - *right.constant()) {
    constant = *left.constant() + *right.constant();
  }
  return Term(std::make_shared<Node>(Node{Kind::Sum, {}, std::move(left), std::move(right), std::move(vars),
                                          std::move(vars_f), size, depth, f_count, constant}));
}

Term Term::f(Term arg) {
  auto vars = arg.node_->vars;
  const auto size = 1 + arg.size();
  const auto depth = 1 + arg.depth();
  const auto f_count = 1 + arg.f_count();
  return Term(std::make_shared<Node>(Node{Kind::FApp, {}, std::move(arg), {}, vars, vars, size, depth, f_count, {}}));
}

Term::Kind Term::kind() const noexcept { return node_->kind; }
const std::string& Term::name() const noexcept { return node_->name; }
const Term& Term::left() const { return node_->a; }
const Term& Term::right() const { return node_->b; }
const Term& Term::arg() const { return node_->a; }
const VarSet& Term::vars() const noexcept { return *node_->vars; }
const VarSet& Term::vars_under_f() const noexcept { return *node_->vars_f; }
std::uint64_t Term::size() const noexcept { return node_->size; }
std::uint64_t Term::depth() const noexcept { return node_->depth; }
std::uint64_t Term::f_count() const noexcept { return node_->f_count; }
std::optional<Natural> Term::constant() const noexcept { return node_->constant; }

bool operator==(const Term& a, const Term& b) {
  std::vector<std::pair<const Term::Node*, const Term::Node*>> pending{{a.node_.get(), b.node_.get()}};
  while (!pending.empty()) {
    const auto [x, y] = pending.back();
    pending.pop_back();
    if (x == y) continue;
    if (!x || !y) return false;
    if (x->kind != y->kind || x->size != y->size || x->constant != y->constant) return false;
    switch (x->kind) {
      case Term::Kind::Var:
        if (x->name != y->name) return false;
        break;
      case Term::Kind::One: break;
      case Term::Kind::Sum:
        pending.emplace_back(x->b.node_.get(), y->b.node_.get());
        pending.emplace_back(x->a.node_.get(), y->a.node_.get());
        break;
      case Term::Kind::FApp: pending.emplace_back(x->a.node_.get(), y->a.node_.get()); break;
    }
  }
  return true;
}

Term numeral(Natural k) {
  if (k == 0) throw DomainError("0 is not a term over {+, 1, F}");
  return plus_numeral(Term::one(), k - 1);
}

Term plus_numeral(Term t, Natural k) {
  for (Natural i = 0; i < k; ++i) t = Term::sum(std::move(t), Term::one());
  return t;
}

Term times(Term t, Natural k) {
  if (k == 0) throw DomainError("0 * t is not a term over {+, 1, F}");
  Term out = t;
  for (Natural i = 1; i < k; ++i) out = Term::sum(std::move(out), t);
  return out;
}

// ---------------------------------------------------------------- Formula

struct Formula::Node {
  Kind kind;
  Term l;
  Term r;
  Formula a;
  Formula b;
  std::string var;
  WitnessHint hint;
  VarSetPtr free;
  std::uint64_t size;
};

namespace {

VarSetPtr hint_vars(const WitnessHint& h) {
  if (auto s = std::get_if<SearchTo>(&h)) return std::make_shared<const VarSet>(s->bound.vars());
  if (auto b = std::get_if<FInverseBracket>(&h)) return std::make_shared<const VarSet>(b->target.vars());
  return empty_vars();
}

std::uint64_t hint_size(const WitnessHint& h) {
  if (auto s = std::get_if<SearchTo>(&h)) return s->bound.size();
  if (auto b = std::get_if<FInverseBracket>(&h)) return b->target.size();
  return 0;
}

}  // namespace

Formula Formula::eq(Term lhs, Term rhs) {
  VarSet u;
  std::set_union(lhs.vars().begin(), lhs.vars().end(), rhs.vars().begin(), rhs.vars().end(), std::back_inserter(u));
  const auto size = 1 + lhs.size() + rhs.size();
  return Formula(std::make_shared<const Node>(Node{Kind::Eq, std::move(lhs), std::move(rhs), {}, {}, {},
                                                   Unbounded{}, std::make_shared<const VarSet>(std::move(u)), size}));
}

Formula Formula::conj(Formula a, Formula b) {
  auto free = unite(a.node_->free, b.node_->free);
  const auto size = 1 + a.size() + b.size();
  return Formula(std::make_shared<const Node>(
      Node{Kind::And, {}, {}, std::move(a), std::move(b), {}, Unbounded{}, std::move(free), size}));
}

Formula Formula::disj(Formula a, Formula b) {
  auto free = unite(a.node_->free, b.node_->free);
  const auto size = 1 + a.size() + b.size();
  return Formula(std::make_shared<const Node>(
      Node{Kind::Or, {}, {}, std::move(a), std::move(b), {}, Unbounded{}, std::move(free), size}));
}

Formula Formula::exists(std::string var, WitnessHint hint, Formula body) {
  auto free = unite(without(body.node_->free, var), hint_vars(hint));
  const auto size = 1 + body.size() + hint_size(hint);
  return Formula(std::make_shared<const Node>(
      Node{Kind::Exists, {}, {}, std::move(body), {}, std::move(var), std::move(hint), std::move(free), size}));
}

Formula Formula::conj(const std::vector<Formula>& parts) {
  if (parts.empty()) throw DomainError("empty conjunction");
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = conj(out, parts[i]);
  return out;
}

Formula Formula::disj(const std::vector<Formula>& parts) {
  if (parts.empty()) throw DomainError("empty disjunction");
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = disj(out, parts[i]);
  return out;
}

Formula::Kind Formula::kind() const noexcept { return node_->kind; }
const Term& Formula::lhs() const { return node_->l; }
const Term& Formula::rhs() const { return node_->r; }

const Formula& Formula::first() const { return node_->a; }
const Formula& Formula::second() const { return node_->b; }
const Formula& Formula::body() const { return node_->a; }

const std::string& Formula::var() const { return node_->var; }
const WitnessHint& Formula::hint() const { return node_->hint; }
const VarSet& Formula::free_vars() const noexcept { return *node_->free; }
std::uint64_t Formula::size() const noexcept { return node_->size; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case Formula::Kind::Eq: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case Formula::Kind::And:
    case Formula::Kind::Or: return a.first() == b.first() && a.second() == b.second();
    case Formula::Kind::Exists: return a.var() == b.var() && a.hint() == b.hint() && a.body() == b.body();
  }
  return false;
}

Formula less_equal(Term a, Term b, const std::string& witness) {
  Term bound = b;
  return Formula::exists(witness, SearchTo{std::move(bound)},
                         Formula::eq(Term::sum(std::move(a), Term::var(witness)), std::move(b)));
}

Formula less_than(Term a, Term b, const std::string& witness) {
  Term bound = b;
  return Formula::exists(
      witness, SearchTo{std::move(bound)},
      Formula::eq(Term::sum(Term::sum(std::move(a), Term::var(witness)), Term::one()), std::move(b)));
}

// ---------------------------------------------------------------- substitution

Term substitute(const Term& s, const std::string& name, const Term& t) {
  if (!contains(s.vars(), name)) return s;
  switch (s.kind()) {
    case Term::Kind::Var: return t;
    case Term::Kind::One: return s;
    case Term::Kind::Sum: return Term::sum(substitute(s.left(), name, t), substitute(s.right(), name, t));
    case Term::Kind::FApp: return Term::f(substitute(s.arg(), name, t));
  }
  return s;
}

namespace {

WitnessHint substitute_hint(const WitnessHint& h, const std::string& name, const Term& t) {
  if (auto s = std::get_if<SearchTo>(&h)) return SearchTo{substitute(s->bound, name, t)};
  if (auto b = std::get_if<FInverseBracket>(&h)) {
    return FInverseBracket{substitute(b->target, name, t), b->low_offset, b->high_offset};
  }
  return h;
}

std::string fresh_name(const std::string& base, const std::function<bool(const std::string&)>& taken) {
  for (int i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!taken(candidate)) return candidate;
  }
}

}  // namespace

Formula substitute(const Formula& phi, const std::string& name, const Term& t) {
  if (!contains(phi.free_vars(), name)) return phi;
  switch (phi.kind()) {
    case Formula::Kind::Eq: return Formula::eq(substitute(phi.lhs(), name, t), substitute(phi.rhs(), name, t));
    case Formula::Kind::And:
      return Formula::conj(substitute(phi.first(), name, t), substitute(phi.second(), name, t));
    case Formula::Kind::Or:
      return Formula::disj(substitute(phi.first(), name, t), substitute(phi.second(), name, t));
    case Formula::Kind::Exists: {
      auto hint = substitute_hint(phi.hint(), name, t);
      if (phi.var() == name) return Formula::exists(phi.var(), std::move(hint), phi.body());
      std::string var = phi.var();
      Formula body = phi.body();
      if (contains(t.vars(), var) && contains(body.free_vars(), name)) {
        const auto renamed = fresh_name(var, [&](const std::string& c) {
          return c == name || contains(t.vars(), c) || contains(body.free_vars(), c);
        });
        body = substitute(body, var, Term::var(renamed));
        var = renamed;
      }
      return Formula::exists(std::move(var), std::move(hint), substitute(body, name, t));
    }
  }
  return phi;
}

// ---------------------------------------------------------------- traversal

namespace {

void collect_bound(const Formula& phi, VarSet& out) {
  switch (phi.kind()) {
    case Formula::Kind::Eq: return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_bound(phi.first(), out);
      collect_bound(phi.second(), out);
      return;
    case Formula::Kind::Exists:
      out.push_back(phi.var());
      collect_bound(phi.body(), out);
      return;
  }
}

void collect_quantifiers(const Formula& phi, std::vector<std::pair<std::string, WitnessHint>>& out) {
  switch (phi.kind()) {
    case Formula::Kind::Eq: return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_quantifiers(phi.first(), out);
      collect_quantifiers(phi.second(), out);
      return;
    case Formula::Kind::Exists:
      out.emplace_back(phi.var(), phi.hint());
      collect_quantifiers(phi.body(), out);
      return;
  }
}

Formula rehint(const Formula& phi, const std::vector<WitnessHint>& hints, std::size_t& next) {
  switch (phi.kind()) {
    case Formula::Kind::Eq: return phi;
    case Formula::Kind::And: {
      auto a = rehint(phi.first(), hints, next);
      return Formula::conj(a, rehint(phi.second(), hints, next));
    }
    case Formula::Kind::Or: {
      auto a = rehint(phi.first(), hints, next);
      return Formula::disj(a, rehint(phi.second(), hints, next));
    }
    case Formula::Kind::Exists: {
      if (next >= hints.size()) throw DomainError("fewer hints than quantifiers");
      const auto& h = hints[next++];
      return Formula::exists(phi.var(), h, rehint(phi.body(), hints, next));
    }
  }
  return phi;
}

void measure_into(const Formula& phi, SizeMetrics& m, std::uint64_t depth) {
  m.max_depth = std::max(m.max_depth, depth);
  switch (phi.kind()) {
    case Formula::Kind::Eq:
      ++m.equations;
      m.f_applications += phi.lhs().f_count() + phi.rhs().f_count();
      m.max_depth = std::max(m.max_depth, depth + std::max(phi.lhs().depth(), phi.rhs().depth()));
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      measure_into(phi.first(), m, depth + 1);
      measure_into(phi.second(), m, depth + 1);
      return;
    case Formula::Kind::Exists:
      ++m.quantifiers;
      if (auto b = std::get_if<FInverseBracket>(&phi.hint())) m.f_applications += b->target.f_count();
      if (auto s = std::get_if<SearchTo>(&phi.hint())) m.f_applications += s->bound.f_count();
      measure_into(phi.body(), m, depth + 1);
      return;
  }
}

void lint_term(const Term& t, std::vector<std::string>& out) {
  for (const auto& v : t.vars()) {
    if (!is_identifier(v)) out.push_back("malformed variable name '" + v + "'");
  }
}

void lint_formula(const Formula& phi, std::vector<std::string>& out) {
  switch (phi.kind()) {
    case Formula::Kind::Eq:
      lint_term(phi.lhs(), out);
      lint_term(phi.rhs(), out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      lint_formula(phi.first(), out);
      lint_formula(phi.second(), out);
      return;
    case Formula::Kind::Exists:
      if (!is_identifier(phi.var())) out.push_back("malformed bound variable '" + phi.var() + "'");
      if (auto s = std::get_if<SearchTo>(&phi.hint())) lint_term(s->bound, out);
      if (auto b = std::get_if<FInverseBracket>(&phi.hint())) lint_term(b->target, out);
      lint_formula(phi.body(), out);
      return;
  }
  out.push_back("formula node of unknown kind");
}

}  // namespace

VarSet bound_vars(const Formula& phi) {
  VarSet out;
  collect_bound(phi, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::pair<std::string, WitnessHint>> quantifiers(const Formula& phi) {
  std::vector<std::pair<std::string, WitnessHint>> out;
  collect_quantifiers(phi, out);
  return out;
}

Formula with_hints(const Formula& phi, const std::vector<WitnessHint>& hints) {
  std::size_t next = 0;
  auto out = rehint(phi, hints, next);
  if (next != hints.size()) throw DomainError("more hints than quantifiers");
  return out;
}

SizeMetrics measure(const Formula& phi) {
  SizeMetrics m;
  m.nodes = phi.size();
  measure_into(phi, m, 1);
  return m;
}

std::vector<std::string> lint(const Formula& phi, const VarSet* allowed) {
  std::vector<std::string> out;
  lint_formula(phi, out);
  if (allowed) {
    for (const auto& v : phi.free_vars()) {
      if (!contains(*allowed, v)) out.push_back("free variable '" + v + "' has no declared role");
    }
  }
  return out;
}

// ---------------------------------------------------------------- Assignment

Natural Assignment::get(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw Error("variable '" + name + "' is not assigned");
  return it->second;
}

Assignment Assignment::parse(const std::string& text) {
  Assignment out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto trim = [](const std::string& s) {
      const auto b = s.find_first_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, s.find_last_not_of(" \t") - b + 1);
    };
    if (trim(item).empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw DomainError("assignment item '" + item + "' lacks '='");
    const auto name = trim(item.substr(0, eq));
    const auto value = trim(item.substr(eq + 1));
    if (out.has(name)) throw DomainError("variable '" + name + "' assigned twice");
    if (!is_identifier(name)) throw DomainError("'" + name + "' is not a variable name");
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
      throw DomainError("value of '" + name + "' is not a natural number");
    }
    try {
      out.set(name, std::stoull(value));
    } catch (const std::out_of_range&) {
      throw DomainError("value of '" + name + "' exceeds 64 bits");
    }
  }
  return out;
}

}  // namespace quotdef
