#pragma once

#include <optional>
#include <string>

#include "quotdef/common.hpp"
#include "quotdef/oracle.hpp"
#include "quotdef/pseudo_inverse.hpp"
#include "quotdef/report.hpp"

namespace quotdef {

/// Parameters (k, d, n0) of the class of k-almost increasing functions whose
/// pseudo-inverse has at least (1/d)-linear difference from n0 on.
/// Derived constants are computed on demand.
class ClassParams {
 public:
  ClassParams(Natural k, Natural d, Natural n0);

  Natural k() const noexcept { return k_; }
  Natural d() const noexcept { return d_; }
  Natural n0() const noexcept { return n0_; }

  /// c = 5d, the coefficient of the definable square n -> c n^2.
  Natural c() const;
  /// n1 = 2 + 5d + n0^2, first argument of the definable square.
  Natural n1() const;
  /// 2 + 4d + n0^2 + k; x0 is the pseudo-inverse at this value.
  Natural x0_argument() const;
  /// x0 = f^{-1}(x0_argument()), or nullopt when the search is exhausted.
  std::optional<Natural> x0(const PseudoInverse& finv) const;

  /// "k,d,n0"
  std::string to_string() const;
  /// Parses "k,d,n0"; throws DomainError.
  static ClassParams parse(const std::string& text);

  bool operator==(const ClassParams&) const = default;

 private:
  Natural k_;
  Natural d_;
  Natural n0_;
};

/// f(y) - f(x) >= -k for all n_start <= x <= y <= range_end.
///
/// One pass with a running prefix maximum (equivalent to comparing f(x)
/// against the suffix minimum after x); reports the worst pair found.
VerificationReport check_k_almost_increasing(const FunctionOracle& f, Natural k, Natural range_end);
/// Same over range_start <= x <= y <= range_end.
VerificationReport check_k_almost_increasing(const FunctionOracle& f, Natural k, Natural range_start,
                                             Natural range_end);

/// d * (f^{-1}(n+1) - f^{-1}(n)) > n for n0 <= n < n_max. An unresolvable
/// pseudo-inverse makes the report inconclusive, tagged with that n.
VerificationReport check_linear_difference(const FunctionOracle& f, Natural d, Natural n0, Natural n_max,
                                           Natural search_limit);
VerificationReport check_linear_difference(const PseudoInverse& finv, Natural d, Natural n0, Natural n_max);

/// Conjunction of both conditions over the checked ranges.
VerificationReport class_check(const FunctionOracle& f, const ClassParams& params, Natural range_end, Natural n_max,
                               Natural search_limit);
VerificationReport class_check(const FunctionOracle& f, const ClassParams& params, Natural range_start,
                               Natural range_end, Natural n_max, Natural search_limit);

}  // namespace quotdef
