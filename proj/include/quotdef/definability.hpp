#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "quotdef/common.hpp"
#include "quotdef/eval.hpp"
#include "quotdef/formula.hpp"
#include "quotdef/pseudo_inverse.hpp"
#include "quotdef/quotient_class.hpp"

namespace quotdef {

enum class VarRole { Input, Output, Parameter };

std::string_view to_string(VarRole role);

struct RelationVar {
  std::string name;
  VarRole role;
};

/// Lower threshold on one input: the relation is only claimed for
/// value >= threshold. A missing threshold could not be computed.
struct DomainConstraint {
  std::string variable;
  std::string description;
  std::optional<Natural> threshold;
};

/// An existential formula together with what it claims to define.
struct DefinedRelation {
  std::string name;
  std::vector<RelationVar> vars;  ///< argument order
  Formula formula;
  std::vector<DomainConstraint> domain;
  ClassParams params;
  /// Threshold of the f-tilde part; nullopt when kept symbolic.
  std::optional<Natural> x0;
  std::string provenance;

  std::vector<std::string> names(VarRole role) const;
  /// The single output variable.
  const std::string& output() const;

  /// Throws DomainError when the assignment lies outside the declared
  /// domain or a threshold is unreachable.
  void require_domain(const Assignment& a) const;
};

/// a = b (mod m) with quotient at most c, as the disjunction over h in
/// [0, c] of a = b + h m and b = a + h m (h m an h-fold sum).
Formula restricted_congruence(const Term& a, const Term& b, const Term& m, Natural c);

/// x0 = f^{-1}(2 + 4d + n0^2 + k), or nullopt when out of reach.
std::optional<Natural> resolve_x0(const ClassParams& params, const PseudoInverse& finv);

/// R(x, y): y = f(x) for x > x0, as
///   x > x0 & y <= x & y + F(x) = F(x+1) (mod x+1, quotient <= k+d).
/// Without x0 the threshold stays a free parameter variable "x0".
DefinedRelation define_f_tilde(const ClassParams& params, std::optional<Natural> x0);

/// Q(n, y): y = 5d n^2 for n >= n1, as
///   exists x [bracket 5dn] . R(x, 5dn) & y + F(x) = F(x+n) (mod x+n, quotient <= k+d) & y < x+n.
DefinedRelation define_c_n_squared(const ClassParams& params, std::optional<Natural> x0);

/// M(a, b, z): z = a b on all of N^2, by shifting into the domain of Q
/// (A = a + n1, B = b + n1) and polarising:
///   c(A+B)^2 = cA^2 + cB^2 + 2c(ab + n1 a + n1 b + n1^2).
DefinedRelation define_multiplication(const ClassParams& params, std::optional<Natural> x0);

/// (f^{-1}(target-1), f^{-1}(target+k)]: every x with f(x) = target lies in
/// it. Requires target >= n0 + 1. Returns (exclusive low, inclusive high).
std::pair<Natural, Natural> witness_bracket(const PseudoInverse& finv, const ClassParams& params, Natural target);

/// Domain-gated evaluation of the relation at `a`.
bool evaluate(const DefinedRelation& rel, const Evaluator& ev, const Assignment& a,
              std::vector<WitnessRecord>* witnesses = nullptr);

nlohmann::json hint_to_json(const WitnessHint& hint);
WitnessHint hint_from_json(const nlohmann::json& j);

/// Envelope: name, roles, domain, params, formula text, pre-order hints,
/// size metrics and provenance.
nlohmann::json to_envelope(const DefinedRelation& rel);
/// Formula of an envelope with its hints re-attached.
Formula formula_from_envelope(const nlohmann::json& j);

}  // namespace quotdef
