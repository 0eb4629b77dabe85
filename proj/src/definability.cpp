#include "quotdef/definability.hpp"

#include "quotdef/text.hpp"

namespace quotdef {

using nlohmann::json;

std::string_view to_string(VarRole role) {
  switch (role) {
    case VarRole::Input: return "input";
    case VarRole::Output: return "output";
    case VarRole::Parameter: return "parameter";
  }
  return "?";
}

std::vector<std::string> DefinedRelation::names(VarRole role) const {
  std::vector<std::string> out;
  for (const auto& v : vars) {
    if (v.role == role) out.push_back(v.name);
  }
  return out;
}

const std::string& DefinedRelation::output() const {
  for (const auto& v : vars) {
    if (v.role == VarRole::Output) return v.name;
  }
  throw Error(name + " has no output variable");
}

void DefinedRelation::require_domain(const Assignment& a) const {
  for (const auto& c : domain) {
    if (!c.threshold) {
      throw DomainError(name + ": domain threshold unreachable (" + c.description + ")");
    }
    const Natural v = a.get(c.variable);
    if (v < *c.threshold) {
      throw DomainError(name + ": " + c.variable + " = " + std::to_string(v) + " outside declared domain " +
                        c.description);
    }
  }
}

Formula restricted_congruence(const Term& a, const Term& b, const Term& m, Natural c) {
  std::vector<Formula> parts;
  parts.reserve(2 * (c + 1));
  for (Natural h = 0; h <= c; ++h) {
    if (h == 0) {
      parts.push_back(Formula::eq(a, b));
      parts.push_back(Formula::eq(b, a));
    } else {
      const Term hm = times(m, h);
      parts.push_back(Formula::eq(a, Term::sum(b, hm)));
      parts.push_back(Formula::eq(b, Term::sum(a, hm)));
    }
  }
  return Formula::disj(parts);
}

std::optional<Natural> resolve_x0(const ClassParams& params, const PseudoInverse& finv) {
  return params.x0(finv);
}

namespace {

Term var(const char* name) { return Term::var(name); }

// x > x0, with x0 a numeral (possibly 0) or the parameter variable.
Formula above_threshold(const Term& x, std::optional<Natural> x0, const std::string& witness) {
  const Term w = Term::var(witness);
  if (x0 && *x0 == 0) return Formula::exists(witness, SearchTo{x}, Formula::eq(Term::sum(w, Term::one()), x));
  const Term t = x0 ? numeral(*x0) : var("x0");
  return less_than(t, x, witness);
}

json params_json(const ClassParams& p, std::optional<Natural> x0) {
  json j{{"k", p.k()}, {"d", p.d()}, {"n0", p.n0()}, {"c", p.c()}, {"n1", p.n1()}};
  j["x0"] = x0 ? json(*x0) : json(nullptr);
  j["x0_argument"] = p.x0_argument();
  return j;
}

std::string x0_text(const ClassParams& p, std::optional<Natural> x0) {
  return x0 ? std::to_string(*x0) : "f^-1(" + std::to_string(p.x0_argument()) + ")";
}

}  // namespace

DefinedRelation define_f_tilde(const ClassParams& params, std::optional<Natural> x0) {
  const Term x = var("x");
  const Term y = var("y");
  const Term x1 = Term::sum(x, Term::one());
  Formula phi = Formula::conj({above_threshold(x, x0, "ux"), less_equal(y, x, "uy"),
                               restricted_congruence(Term::sum(y, Term::f(x)), Term::f(x1), x1,
                                                     checked_add(params.k(), params.d()))});
  std::vector<RelationVar> vars{{"x", VarRole::Input}, {"y", VarRole::Output}};
  std::optional<Natural> first;
  if (x0) first = checked_add(*x0, 1);
  if (!x0) vars.push_back({"x0", VarRole::Parameter});
  return DefinedRelation{
      "ftilde",
      std::move(vars),
      std::move(phi),
      {DomainConstraint{"x", "x > x0 = " + x0_text(params, x0), first}},
      params,
      x0,
      "graph of f above x0: y + F(x) and F(x+1) congruent modulo x+1 with quotient at most k+d, y <= x"};
}

DefinedRelation define_c_n_squared(const ClassParams& params, std::optional<Natural> x0) {
  const Natural c = params.c();
  const Natural kd = checked_add(params.k(), params.d());
  const Term n = var("n");
  const Term x = var("x");
  const Term y = var("y");
  const Term target = times(n, c);
  const Term xn = Term::sum(x, n);

  const DefinedRelation r = define_f_tilde(params, x0);
  Formula body = Formula::conj({substitute(r.formula, "y", target),
                                restricted_congruence(Term::sum(y, Term::f(x)), Term::f(xn), xn, kd),
                                less_than(y, xn, "uq")});
  const auto k = static_cast<std::int64_t>(params.k());
  Formula phi = Formula::exists("x", FInverseBracket{target, -1, k}, std::move(body));

  std::vector<RelationVar> vars{{"n", VarRole::Input}, {"y", VarRole::Output}};
  if (!x0) vars.push_back({"x0", VarRole::Parameter});
  std::vector<DomainConstraint> domain{{"n", "n >= n1 = " + std::to_string(params.n1()), params.n1()}};
  if (!x0) domain.push_back({"n", "f-tilde part needs x0 = " + x0_text(params, x0), std::nullopt});
  return DefinedRelation{
      "csquare",
      std::move(vars),
      std::move(phi),
      std::move(domain),
      params,
      x0,
      "y = 5d n^2 for n >= n1: some x with f(x) = 5dn makes y + F(x) and F(x+n) congruent modulo x+n, "
      "and y < x+n pins the residue"};
}

DefinedRelation define_multiplication(const ClassParams& params, std::optional<Natural> x0) {
  const Natural n1 = params.n1();
  const Natural c2 = checked_mul(2, params.c());
  const Term a = var("a");
  const Term b = var("b");
  const Term z = var("z");
  const Term A = plus_numeral(a, n1);
  const Term B = plus_numeral(b, n1);

  const DefinedRelation q = define_c_n_squared(params, x0);
  auto square = [&](const Term& arg, const char* out) {
    return substitute(substitute(q.formula, "y", var(out)), "n", arg);
  };

  Term rhs = Term::sum(var("qa"), var("qb"));
  rhs = Term::sum(rhs, times(z, c2));
  rhs = Term::sum(rhs, times(a, checked_mul(c2, n1)));
  rhs = Term::sum(rhs, times(b, checked_mul(c2, n1)));
  rhs = Term::sum(rhs, numeral(checked_mul(checked_mul(c2, n1), n1)));

  Formula inner = Formula::conj(square(Term::sum(A, B), "qs"), Formula::eq(var("qs"), rhs));
  inner = Formula::exists("qs", Pinned{}, inner);
  inner = Formula::exists("qb", Pinned{}, Formula::conj(square(B, "qb"), inner));
  Formula phi = Formula::exists("qa", Pinned{}, Formula::conj(square(A, "qa"), inner));

  std::vector<RelationVar> vars{{"a", VarRole::Input}, {"b", VarRole::Input}, {"z", VarRole::Output}};
  std::vector<DomainConstraint> domain;
  if (!x0) {
    vars.push_back({"x0", VarRole::Parameter});
    domain.push_back({"a", "squares need x0 = " + x0_text(params, x0), std::nullopt});
  }
  return DefinedRelation{
      "mult",
      std::move(vars),
      std::move(phi),
      std::move(domain),
      params,
      x0,
      "z = ab on all of N^2: squares of a+n1, b+n1 and a+b+2n1 combined by polarisation"};
}

std::pair<Natural, Natural> witness_bracket(const PseudoInverse& finv, const ClassParams& params, Natural target) {
  if (target < params.n0() + 1) {
    throw DomainError("witness bracket needs target >= n0 + 1 = " + std::to_string(params.n0() + 1));
  }
  return {finv(target - 1), finv(checked_add(target, params.k()))};
}

bool evaluate(const DefinedRelation& rel, const Evaluator& ev, const Assignment& a,
              std::vector<WitnessRecord>* witnesses) {
  rel.require_domain(a);
  if (witnesses) return ev.formula(rel.formula, a, *witnesses);
  return ev.formula(rel.formula, a);
}

json hint_to_json(const WitnessHint& hint) {
  if (auto s = std::get_if<SearchTo>(&hint)) return json{{"kind", "search_to"}, {"bound", print(s->bound)}};
  if (auto b = std::get_if<FInverseBracket>(&hint)) {
    return json{{"kind", "finverse"}, {"target", print(b->target)}, {"low", b->low_offset}, {"high", b->high_offset}};
  }
  if (std::holds_alternative<Pinned>(hint)) return json{{"kind", "pinned"}};
  return json{{"kind", "unbounded"}};
}

WitnessHint hint_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "search_to") return SearchTo{parse_term(j.at("bound").get<std::string>())};
  if (kind == "finverse") {
    return FInverseBracket{parse_term(j.at("target").get<std::string>()), j.at("low").get<std::int64_t>(),
                           j.at("high").get<std::int64_t>()};
  }
  if (kind == "pinned") return Pinned{};
  if (kind == "unbounded") return Unbounded{};
  throw Error("unknown witness hint kind '" + kind + "'");
}

json to_envelope(const DefinedRelation& rel) {
  json roles = json::array();
  for (const auto& v : rel.vars) roles.push_back({{"name", v.name}, {"role", to_string(v.role)}});
  json domain = json::array();
  for (const auto& c : rel.domain) {
    domain.push_back({{"variable", c.variable},
                      {"constraint", c.description},
                      {"threshold", c.threshold ? json(*c.threshold) : json(nullptr)}});
  }
  json hints = json::array();
  for (const auto& [name, hint] : quantifiers(rel.formula)) {
    json h = hint_to_json(hint);
    h["var"] = name;
    hints.push_back(std::move(h));
  }
  const SizeMetrics m = measure(rel.formula);
  const json params = params_json(rel.params, rel.x0);
  return json{{"name", rel.name},
              {"roles", roles},
              {"domain", domain},
              {"params", params},
              {"formula", print(rel.formula)},
              {"hints", hints},
              {"size",
               {{"nodes", m.nodes},
                {"equations", m.equations},
                {"quantifiers", m.quantifiers},
                {"f_applications", m.f_applications},
                {"max_depth", m.max_depth}}},
              {"provenance", rel.provenance}};
}

Formula formula_from_envelope(const json& j) {
  Formula phi = parse_formula(j.at("formula").get<std::string>());
  if (!j.contains("hints")) return phi;
  std::vector<WitnessHint> hints;
  for (const auto& h : j.at("hints")) hints.push_back(hint_from_json(h));
  return with_hints(phi, hints);
}

}  // namespace quotdef
