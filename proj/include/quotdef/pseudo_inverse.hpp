#pragma once

#include <mutex>
#include <utility>
#include <vector>

#include "quotdef/common.hpp"
#include "quotdef/oracle.hpp"

namespace quotdef {

/// First m considered by the pseudo-inverse: the search runs over m + 1 >=
/// max(n_start, 1), so f(0) never constrains it.
Natural pseudo_inverse_start(const FunctionOracle& f);

/// f^{-1}(n) = least m with f(m+1) > n, by a direct scan over m <= search_limit.
/// Throws SearchExhausted when no witness exists up to the limit (or up to
/// the oracle's last argument).
Natural pseudo_inverse(const FunctionOracle& f, Natural n, Natural search_limit);

/// Memoised pseudo-inverse.
///
/// Scans f once, lazily, keeping only the positions where the running
/// maximum strictly increases; f^{-1}(n) is one less than the first such
/// position whose value exceeds n. Safe to share between threads.
class PseudoInverse {
 public:
  PseudoInverse(FunctionOracle f, Natural search_limit);

  Natural operator()(Natural n) const;

  const FunctionOracle& oracle() const noexcept { return f_; }
  Natural search_limit() const noexcept { return limit_; }

 private:
  FunctionOracle f_;
  Natural limit_;
  mutable std::mutex mu_;
  mutable std::vector<std::pair<Natural, Natural>> records_;  // (argument, value)
  mutable Natural next_arg_;                                  // next argument to scan
  mutable bool exhausted_ = false;
};

}  // namespace quotdef
