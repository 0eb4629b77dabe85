#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quotdef/definability.hpp"
#include "quotdef/eval.hpp"
#include "quotdef/oracle.hpp"
#include "quotdef/prime_estimates.hpp"
#include "quotdef/prime_table.hpp"
#include "quotdef/quotient_class.hpp"
#include "quotdef/report.hpp"

namespace quotdef {

/// Index below which the prime-quotient statements are settled by direct
/// computation rather than by the two-sided estimate.
inline constexpr Natural kEstimateThreshold = 7022;

// ---------------------------------------------------------------- prime quotient

/// f(m) - f(n) >= -1 for m > n >= 1: every pair up to pair_bound, plus the
/// tail comparison min_{split <= m <= tail_bound} f(m) >= max_{n <= split} f(n) - 1.
VerificationReport verify_prop1_item1(const FunctionOracle& f, Natural pair_bound, Natural tail_bound,
                                      Natural split = kEstimateThreshold);

struct MaxQuotientClaim {
  Natural k_max = kEstimateThreshold;
  Natural argmax = 7012;
  /// The maximum ratio is claimed strictly below bound_num / bound_den.
  Natural bound_num = 10102824;
  Natural bound_den = 1000000;
};

/// argmax_{1 <= k <= k_max} p_k / k by exact rational comparison, checked
/// against the claimed argmax and bound. Also records whether the maximum
/// stays below 11, which is what f^{-1}(11) >= k_max rests on.
VerificationReport verify_max_quotient(const PrimeTable& table, PrimeIndexing indexing = PrimeIndexing::ZeroBased,
                                       const MaxQuotientClaim& claim = {});

/// f^{-1}(n+1) - f^{-1}(n) > n for n_first <= n < n_max, with the
/// intermediate bound p_k / k < n + 2 (equivalently f(k) <= n + 1) at
/// k = m + n and across m < k <= 2m, where m = f^{-1}(n). Without n_max the
/// sweep runs until the pseudo-inverse leaves the oracle's range.
VerificationReport verify_prop1_item2(const FunctionOracle& f, std::optional<Natural> n_max, Natural n_first = 11);

// ---------------------------------------------------------------- class lemmas

/// (i)   f^{-1}(n+d) - f^{-1}(n) > n            for n0 <= n <= n_max - d
/// (ii)  some x has f(x) = n                     for n0 + 1 <= n <= n_max
/// (iii) f(x) = n >= n0 + 1  =>  2d x > (n-1)(n-2) - n0(n0-1), for x <= f^{-1}(n_max)
VerificationReport verify_lemma1(const FunctionOracle& f, const ClassParams& params, Natural n_max,
                                 Natural search_limit);

/// f(x) = n >= n0 and 1 <= c <= n  =>  -k <= f(x+c) - f(x) <= k+d, for x in
/// [x_lo, x_hi]: every c when x < full_sweep_below, `samples` seeded draws otherwise.
VerificationReport verify_lemma2(const FunctionOracle& f, const ClassParams& params, Natural x_lo, Natural x_hi,
                                 std::uint64_t seed, Natural full_sweep_below = 2000, unsigned samples = 8);

/// For x in [x_lo, x_hi] with f(x) >= n0:
///   f(x) < x;
///   f(x) = (x+1)f(x+1) - x f(x) (mod x+1), and with quotient at most k+d;
///   |f(x+1) - f(x)| <= k+d;
/// and, when x0 = f^{-1}(2+4d+n0^2+k) is reachable, f(x) > 2+4d+n0^2 for x > x0.
VerificationReport verify_lemma3_ingredients(const FunctionOracle& f, const ClassParams& params, Natural x_lo,
                                             Natural x_hi, Natural search_limit);

/// Runs the lemma checks against fault-injected copies of f and passes only
/// if every mutant is caught.
VerificationReport verify_lemma_mutants(const FunctionOracle& f, const ClassParams& params, Natural n_max,
                                        Natural x_hi, Natural search_limit, std::uint64_t seed);

// ---------------------------------------------------------------- defined relations

struct RelationSample {
  std::vector<Assignment> inputs;
  /// The output the relation must single out.
  std::function<Natural(const Assignment&)> expected;
  /// Exclusive bound of the output sweep; empty disables uniqueness sweeps.
  std::function<Natural(const Assignment&)> sweep_bound;
  /// Number of leading inputs whose sweep evaluates every output value
  /// directly instead of through the solver.
  std::size_t literal_sweeps = 0;
  std::uint64_t seed = 1;
};

/// For each input: true at the expected output, false at output +-1 and at a
/// seeded random wrong value; optionally the expected output is the only
/// solution below the sweep bound.
VerificationReport verify_defined_relation(const DefinedRelation& rel, const Evaluator& ev,
                                           const RelationSample& sample);

/// Re-evaluates a failure witness of verify_defined_relation; true when the
/// recorded (wrong) truth value is observed again.
bool reproduce_relation_witness(const DefinedRelation& rel, const Evaluator& ev, const nlohmann::json& witness);

/// R(x, y) for x in (x0, x0 + count].
VerificationReport verify_f_tilde(const Evaluator& ev, const ClassParams& params, Natural count, std::uint64_t seed);
/// Q(n, y) for n in [n1, n_hi], uniqueness below x + n.
VerificationReport verify_c_n_squared(const Evaluator& ev, const ClassParams& params, Natural n_hi,
                                      std::uint64_t seed);
/// M(a, b, z) for a, b in [0, max].
VerificationReport verify_multiplication(const Evaluator& ev, const ClassParams& params, Natural max,
                                         std::uint64_t seed);

/// Corrupted copies of a relation (a conjunct dropped, the output shifted)
/// that verify_defined_relation must reject.
std::vector<std::pair<std::string, DefinedRelation>> relation_mutants(const DefinedRelation& rel);

/// Runs verify_defined_relation on every mutant; passes only if all fail.
VerificationReport verify_relation_mutants(const DefinedRelation& rel, const Evaluator& ev,
                                           const RelationSample& sample);

/// Lint over the relation's own roles.
VerificationReport lint_relation(const DefinedRelation& rel);

}  // namespace quotdef
