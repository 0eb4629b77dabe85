#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "quotdef/common.hpp"
#include "quotdef/prime_table.hpp"

namespace quotdef {

enum class OracleKind { PrimeQuotient, SqrtLike, Table };

/// A total map from {x >= n_start} into the naturals, assumed unbounded.
///
/// Finite oracles (table-backed, or the prime quotient limited by its sieve)
/// carry a max_argument; asking beyond it raises OutOfRange instead of
/// guessing. Oracles are immutable and cheap to copy.
class FunctionOracle {
 public:
  using Fn = std::function<Natural(Natural)>;

  FunctionOracle(OracleKind kind, std::string id, Natural n_start, std::optional<Natural> max_argument, Fn fn);

  OracleKind kind() const noexcept { return kind_; }
  const std::string& id() const noexcept { return id_; }
  Natural n_start() const noexcept { return n_start_; }
  std::optional<Natural> max_argument() const noexcept { return max_argument_; }

  bool in_range(Natural x) const noexcept {
    return x >= n_start_ && (!max_argument_ || x <= *max_argument_);
  }

  /// f(x); DomainError below n_start, OutOfRange past max_argument.
  Natural operator()(Natural x) const;

  /// f(x) without range checks.
  Natural raw(Natural x) const { return fn_(x); }

 private:
  OracleKind kind_;
  std::string id_;
  Natural n_start_;
  std::optional<Natural> max_argument_;
  Fn fn_;
};

/// n -> floor(p_n / n) on [1, count - 1].
FunctionOracle make_prime_quotient(std::shared_ptr<const PrimeTable> table);

/// x -> floor(sqrt(2x / d)), computed with integer square roots.
/// A member of C(0, d, 1); unbounded and defined from 0.
FunctionOracle make_sqrt_like(Natural d);

/// Table-backed oracle: f(n_start + i) = values[i].
FunctionOracle make_table_oracle(std::vector<Natural> values, Natural n_start = 0, std::string id = "table");

/// Reads one natural per line; blank lines and '#' comments are skipped.
FunctionOracle load_table_oracle(const std::filesystem::path& path, Natural n_start = 0);

/// Copy of `base` with selected values replaced; used for fault injection.
FunctionOracle make_patched(const FunctionOracle& base, std::map<Natural, Natural> patches, std::string id);

/// floor(sqrt(n)) exactly.
Natural integer_sqrt(Natural n);

}  // namespace quotdef
