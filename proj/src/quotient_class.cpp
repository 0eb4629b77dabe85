#include "quotdef/quotient_class.hpp"

#include <algorithm>
#include <sstream>

namespace quotdef {

ClassParams::ClassParams(Natural k, Natural d, Natural n0) : k_(k), d_(d), n0_(n0) {
  if (d_ == 0) throw DomainError("class parameter d must be >= 1");
}

Natural ClassParams::c() const { return checked_mul(5, d_); }

Natural ClassParams::n1() const { return checked_add(checked_add(2, c()), checked_mul(n0_, n0_)); }

Natural ClassParams::x0_argument() const {
  return checked_add(checked_add(checked_add(2, checked_mul(4, d_)), checked_mul(n0_, n0_)), k_);
}

std::optional<Natural> ClassParams::x0(const PseudoInverse& finv) const {
  try {
    return finv(x0_argument());
  } catch (const SearchExhausted&) {
    return std::nullopt;
  }
}

std::string ClassParams::to_string() const {
  return std::to_string(k_) + "," + std::to_string(d_) + "," + std::to_string(n0_);
}

ClassParams ClassParams::parse(const std::string& text) {
  std::istringstream in(text);
  Natural v[3];
  for (int i = 0; i < 3; ++i) {
    std::string part;
    if (!std::getline(in, part, ',') || part.empty() ||
        part.find_first_not_of("0123456789") != std::string::npos) {
      throw DomainError("class parameters must be \"k,d,n0\" naturals, got \"" + text + "\"");
    }
    v[i] = std::stoull(part);
  }
  std::string rest;
  if (std::getline(in, rest)) throw DomainError("trailing text in class parameters \"" + text + "\"");
  return ClassParams(v[0], v[1], v[2]);
}

VerificationReport check_k_almost_increasing(const FunctionOracle& f, Natural k, Natural range_end) {
  return check_k_almost_increasing(f, k, f.n_start(), range_end);
}

VerificationReport check_k_almost_increasing(const FunctionOracle& f, Natural k, Natural range_start,
                                             Natural range_end) {
  VerificationReport r;
  ReportTimer timer(r);
  r.check = "class.almost-increasing";
  r.anchor = "f(y) - f(x) >= -k for all y >= x";
  r.oracle = f.id();
  r.params = {{"k", k}};
  const Natural start = std::max(range_start, f.n_start());
  r.ranges = {{"x", {start, range_end}}};
  if (range_end < start) throw DomainError("almost-increasing range ends before the oracle's first argument");
  if (!f.in_range(range_end)) f(range_end);  // raises the oracle's range error

  Natural best = f.raw(start);
  Natural best_at = start;
  Natural worst_drop = 0;
  Natural worst_x = start;
  Natural worst_y = start;
  for (Natural y = start; y <= range_end; ++y) {
    const Natural v = f.raw(y);
    if (v > best) {
      best = v;
      best_at = y;
    } else if (best - v > worst_drop) {
      worst_drop = best - v;
      worst_x = best_at;
      worst_y = y;
    }
  }
  nlohmann::json pair = {{"x", worst_x}, {"y", worst_y}, {"f_x", f.raw(worst_x)}, {"f_y", f.raw(worst_y)}};
  r.details = {{"worst_drop", worst_drop}, {"worst_pair", pair}};
  if (worst_drop > k) r.fail(pair);
  return r;
}

VerificationReport check_linear_difference(const PseudoInverse& finv, Natural d, Natural n0, Natural n_max) {
  VerificationReport r;
  ReportTimer timer(r);
  r.check = "class.linear-difference";
  r.anchor = "f^-1(n+1) - f^-1(n) > n/d for n >= n0";
  r.oracle = finv.oracle().id();
  r.params = {{"d", d}, {"n0", n0}};
  r.ranges = {{"n", {n0, n_max}}};
  r.limits = {{"search_limit", finv.search_limit()}};
  if (d == 0) throw DomainError("d must be >= 1");
  if (n_max < n0) throw DomainError("n_max must be >= n0");

  Natural checked = 0;
  Natural min_slack_n = n0;
  std::optional<__int128> min_slack;
  try {
    Natural prev = finv(n0);
    for (Natural n = n0; n < n_max; ++n) {
      const Natural next = finv(n + 1);
      const Natural delta = next - prev;
      const __int128 slack = static_cast<__int128>(d) * delta - static_cast<__int128>(n);
      if (!min_slack || slack < *min_slack) {
        min_slack = slack;
        min_slack_n = n;
      }
      if (slack <= 0) {
        r.fail({{"n", n}, {"finv_n", prev}, {"finv_n_plus_1", next}, {"d", d}});
      }
      ++checked;
      prev = next;
    }
  } catch (const SearchExhausted& e) {
    r.details["unresolved_n"] = e.target();
    r.inconclusive("pseudo-inverse at " + std::to_string(e.target()) + " not found within search limit " +
                   std::to_string(e.limit()));
  }
  r.details["checked"] = checked;
  if (min_slack) {
    r.details["min_slack"] = static_cast<long long>(*min_slack);
    r.details["min_slack_n"] = min_slack_n;
  }
  return r;
}

VerificationReport check_linear_difference(const FunctionOracle& f, Natural d, Natural n0, Natural n_max,
                                           Natural search_limit) {
  return check_linear_difference(PseudoInverse(f, search_limit), d, n0, n_max);
}

VerificationReport class_check(const FunctionOracle& f, const ClassParams& params, Natural range_end, Natural n_max,
                               Natural search_limit) {
  return class_check(f, params, f.n_start(), range_end, n_max, search_limit);
}

VerificationReport class_check(const FunctionOracle& f, const ClassParams& params, Natural range_start,
                               Natural range_end, Natural n_max, Natural search_limit) {
  std::vector<VerificationReport> parts;
  parts.push_back(check_k_almost_increasing(f, params.k(), range_start, range_end));
  parts.push_back(check_linear_difference(f, params.d(), params.n0(), n_max, search_limit));
  auto r = combine("class", "f in C(k,d,n0)", f.id(), std::move(parts));
  r.params = {{"k", params.k()}, {"d", params.d()}, {"n0", params.n0()}};
  r.ranges = {{"almost_increasing_x", {std::max(range_start, f.n_start()), range_end}},
              {"linear_difference_n", {params.n0(), n_max}}};
  r.notes.push_back("empirical membership over the checked ranges only, not a proof beyond them");
  return r;
}

}  // namespace quotdef
