#include "quotdef/pseudo_inverse.hpp"

#include <algorithm>

namespace quotdef {

namespace {

// Largest m whose f(m+1) can be evaluated under both the caller's limit and
// the oracle's domain.
Natural effective_limit(const FunctionOracle& f, Natural search_limit) {
  Natural lim = search_limit;
  if (auto last = f.max_argument()) {
    if (*last == 0) return 0;
    lim = std::min(lim, *last - 1);
  }
  return lim;
}

[[noreturn]] void exhausted(const FunctionOracle& f, Natural n, Natural limit) {
  throw SearchExhausted("no m with " + f.id() + "(m+1) > " + std::to_string(n), limit, n);
}

}  // namespace

Natural pseudo_inverse_start(const FunctionOracle& f) {
  return f.n_start() == 0 ? 0 : f.n_start() - 1;
}

Natural pseudo_inverse(const FunctionOracle& f, Natural n, Natural search_limit) {
  const Natural lim = effective_limit(f, search_limit);
  for (Natural m = pseudo_inverse_start(f); m <= lim; ++m) {
    if (f(m + 1) > n) return m;
  }
  exhausted(f, n, search_limit);
}

PseudoInverse::PseudoInverse(FunctionOracle f, Natural search_limit)
    : f_(std::move(f)), limit_(search_limit), next_arg_(pseudo_inverse_start(f_) + 1) {}

Natural PseudoInverse::operator()(Natural n) const {
  std::lock_guard lock(mu_);
  auto first_above = [&]() {
    return std::upper_bound(records_.begin(), records_.end(), n,
                            [](Natural v, const auto& rec) { return v < rec.second; });
  };
  if (auto it = first_above(); it != records_.end()) return it->first - 1;
  if (!exhausted_) {
    const Natural lim = effective_limit(f_, limit_);
    const Natural last_arg = lim == kNaturalMax ? kNaturalMax : lim + 1;
    Natural best = records_.empty() ? 0 : records_.back().second;
    while (next_arg_ <= last_arg && next_arg_ != 0) {
      const Natural arg = next_arg_++;
      const Natural v = f_(arg);
      if (records_.empty() || v > best) {
        records_.emplace_back(arg, v);
        best = v;
        if (v > n) return arg - 1;
      }
    }
    exhausted_ = true;
  }
  exhausted(f_, n, limit_);
}

}  // namespace quotdef
