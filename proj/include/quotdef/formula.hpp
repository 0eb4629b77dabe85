#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "quotdef/common.hpp"

namespace quotdef {

/// Sorted, duplicate-free list of variable names.
using VarSet = std::vector<std::string>;

bool contains(const VarSet& vars, std::string_view name);

/// Term over the vocabulary {+, 1, F}: a variable, the constant 1, a sum, or
/// an application of F (interpreted as t -> t * f(t)). Immutable; subterms
/// are shared.
class Term {
 public:
  enum class Kind : std::uint8_t { Var, One, Sum, FApp };

  static Term var(std::string name);
  static Term one();
  static Term sum(Term left, Term right);
  static Term f(Term arg);

  Kind kind() const noexcept;
  /// Variable name; empty for other kinds.
  const std::string& name() const noexcept;
  const Term& left() const;   ///< Sum only.
  const Term& right() const;  ///< Sum only.
  const Term& arg() const;    ///< FApp only.

  /// Every variable occurring in the term.
  const VarSet& vars() const noexcept;
  /// Variables occurring somewhere below an F.
  const VarSet& vars_under_f() const noexcept;

  /// Node count.
  std::uint64_t size() const noexcept;
  /// Height of the tree; a leaf has depth 1.
  std::uint64_t depth() const noexcept;
  /// Number of F applications.
  std::uint64_t f_count() const noexcept;
  /// Value of a closed, F-free term (a numeral or a sum of numerals);
  /// empty otherwise or when the value exceeds 64 bits.
  std::optional<Natural> constant() const noexcept;

  friend bool operator==(const Term& a, const Term& b);

 private:
  friend class Formula;
  struct Node;
  Term() = default;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// k = 1 + 1 + ... + 1 as a left-leaning sum; k >= 1.
Term numeral(Natural k);
/// t + 1 + ... + 1 (k ones, left-leaning); t itself when k = 0.
Term plus_numeral(Term t, Natural k);
/// t + t + ... + t (k copies, left-leaning); k >= 1.
Term times(Term t, Natural k);

/// Witness found by scanning [0, bound] (bound evaluated in the enclosing scope).
struct SearchTo {
  Term bound;
  friend bool operator==(const SearchTo&, const SearchTo&) = default;
};

/// Witness x with f(x) = target, scanned over (f^{-1}(target + low), f^{-1}(target + high)].
struct FInverseBracket {
  Term target;
  std::int64_t low_offset = -1;
  std::int64_t high_offset = 0;
  friend bool operator==(const FInverseBracket&, const FInverseBracket&) = default;
};

/// Witness pinned by linear equations of the body; resolved by exact
/// solving, refused when the body leaves it unconstrained.
struct Pinned {
  friend bool operator==(const Pinned&, const Pinned&) = default;
};

/// No bound: the evaluator refuses.
struct Unbounded {
  friend bool operator==(const Unbounded&, const Unbounded&) = default;
};

using WitnessHint = std::variant<Unbounded, SearchTo, FInverseBracket, Pinned>;

/// Positive existential formula: equations, conjunction, disjunction and
/// existential quantification carrying a witness hint.
class Formula {
 public:
  enum class Kind : std::uint8_t { Eq, And, Or, Exists };

  static Formula eq(Term lhs, Term rhs);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula exists(std::string var, WitnessHint hint, Formula body);

  /// Left-folded conjunction/disjunction of a nonempty list.
  static Formula conj(const std::vector<Formula>& parts);
  static Formula disj(const std::vector<Formula>& parts);

  Kind kind() const noexcept;
  const Term& lhs() const;            ///< Eq only.
  const Term& rhs() const;            ///< Eq only.
  const Formula& first() const;       ///< And/Or.
  const Formula& second() const;      ///< And/Or.
  const std::string& var() const;     ///< Exists.
  const WitnessHint& hint() const;    ///< Exists.
  const Formula& body() const;        ///< Exists.

  const VarSet& free_vars() const noexcept;
  /// Address of the shared node; equal for copies of one formula.
  const void* identity() const noexcept { return node_.get(); }
  std::uint64_t size() const noexcept;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  Formula() = default;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// a <= b as exists u <= b . (a + u) = b
Formula less_equal(Term a, Term b, const std::string& witness);
/// a < b as exists u <= b . ((a + u) + 1) = b
Formula less_than(Term a, Term b, const std::string& witness);

/// Capture-avoiding substitution phi[name := t]. Bound variables that would
/// capture a variable of t are renamed.
Formula substitute(const Formula& phi, const std::string& name, const Term& t);
Term substitute(const Term& s, const std::string& name, const Term& t);

/// Variables bound anywhere in the formula.
VarSet bound_vars(const Formula& phi);

/// Pre-order list of the quantifiers (variable and hint).
std::vector<std::pair<std::string, WitnessHint>> quantifiers(const Formula& phi);

/// Replaces the hints of the quantifiers, in pre-order.
Formula with_hints(const Formula& phi, const std::vector<WitnessHint>& hints);

struct SizeMetrics {
  std::uint64_t nodes = 0;        ///< formula and term nodes, shared subtrees counted each time
  std::uint64_t equations = 0;
  std::uint64_t quantifiers = 0;
  std::uint64_t f_applications = 0;
  std::uint64_t max_depth = 0;
};

SizeMetrics measure(const Formula& phi);

/// Problems found by the vocabulary linter: malformed identifiers, the
/// reserved word used as a variable, or free variables outside `allowed`
/// (when given). Empty means clean.
std::vector<std::string> lint(const Formula& phi, const VarSet* allowed = nullptr);

bool is_identifier(std::string_view s);

/// Variable assignment.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<const std::string, Natural>> init) : values_(init) {}

  void set(const std::string& name, Natural v) { values_[name] = v; }
  /// Throws Error for unassigned variables.
  Natural get(const std::string& name) const;
  bool has(const std::string& name) const { return values_.count(name) != 0; }
  const std::map<std::string, Natural>& values() const noexcept { return values_; }

  /// Parses "x=1,y=2".
  static Assignment parse(const std::string& text);

 private:
  std::map<std::string, Natural> values_;
};

}  // namespace quotdef
