#include "quotdef/oracle.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace quotdef {

FunctionOracle::FunctionOracle(OracleKind kind, std::string id, Natural n_start, std::optional<Natural> max_argument,
                               Fn fn)
    : kind_(kind), id_(std::move(id)), n_start_(n_start), max_argument_(max_argument), fn_(std::move(fn)) {
  if (max_argument_ && *max_argument_ < n_start_) throw DomainError("oracle " + id_ + " has an empty domain");
}

Natural FunctionOracle::operator()(Natural x) const {
  if (x < n_start_) {
    throw DomainError("oracle " + id_ + " undefined at " + std::to_string(x) + " (first argument " +
                      std::to_string(n_start_) + ")");
  }
  if (max_argument_ && x > *max_argument_) {
    throw OutOfRange("oracle " + id_ + " evaluated at " + std::to_string(x) + " beyond its last argument " +
                     std::to_string(*max_argument_));
  }
  return fn_(x);
}

Natural integer_sqrt(Natural n) {
  auto r = static_cast<Natural>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && (r > 0xFFFFFFFFull || r * r > n)) --r;
  while (r < 0xFFFFFFFFull && (r + 1) * (r + 1) <= n) ++r;
  return r;
}

FunctionOracle make_prime_quotient(std::shared_ptr<const PrimeTable> table) {
  if (!table || table->count() < 2) throw DomainError("prime quotient needs a table with at least two primes");
  const Natural last = table->count() - 1;
  auto id = "prime-quotient[limit=" + std::to_string(table->limit()) + "]";
  return FunctionOracle(OracleKind::PrimeQuotient, std::move(id), 1, last,
                        [t = std::move(table)](Natural n) { return (*t)[n] / n; });
}

FunctionOracle make_sqrt_like(Natural d) {
  if (d == 0) throw DomainError("sqrt-like oracle needs d >= 1");
  return FunctionOracle(OracleKind::SqrtLike, "sqrt-like:" + std::to_string(d), 0, std::nullopt,
                        [d](Natural x) { return integer_sqrt(checked_mul(2, x) / d); });
}

FunctionOracle make_table_oracle(std::vector<Natural> values, Natural n_start, std::string id) {
  if (values.empty()) throw DomainError("table oracle needs at least one value");
  const Natural last = n_start + values.size() - 1;
  auto shared = std::make_shared<const std::vector<Natural>>(std::move(values));
  return FunctionOracle(OracleKind::Table, std::move(id), n_start, last,
                        [shared, n_start](Natural x) { return (*shared)[x - n_start]; });
}

FunctionOracle load_table_oracle(const std::filesystem::path& path, Natural n_start) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open table oracle file: " + path.string());
  std::vector<Natural> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string token;
    if (!(ls >> token)) continue;
    std::string extra;
    if (ls >> extra) throw Error(path.string() + ":" + std::to_string(line_no) + ": more than one value on a line");
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || token.front() == '-') {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": not a natural number: " + token);
    }
    values.push_back(v);
  }
  return make_table_oracle(std::move(values), n_start, "table:" + path.filename().string());
}

FunctionOracle make_patched(const FunctionOracle& base, std::map<Natural, Natural> patches, std::string id) {
  return FunctionOracle(base.kind(), std::move(id), base.n_start(), base.max_argument(),
                        [base, p = std::move(patches)](Natural x) {
                          if (auto it = p.find(x); it != p.end()) return it->second;
                          return base.raw(x);
                        });
}

}  // namespace quotdef
