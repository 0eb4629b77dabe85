#include "quotdef/prime_estimates.hpp"

#include <string>

namespace quotdef {

namespace {

template <typename T>
Interval<T> main_terms(Natural m) {
  const Interval<T> mm(static_cast<T>(m));
  const auto lm = log(mm);
  return mm * lm + mm * log(lm);
}

template <typename T>
Interval<T> estimate(Natural m, std::int64_t num, std::int64_t scale) {
  const Interval<T> mm(static_cast<T>(m));
  return main_terms<T>(m) - mm * Interval<T>::ratio(static_cast<T>(num), static_cast<T>(scale));
}

void require_lower(Natural m, const RosserBounds& b) {
  if (m < b.lower_min_m) throw DomainError("lower estimate needs m >= " + std::to_string(b.lower_min_m));
}

void require_upper(Natural m, const RosserBounds& b) {
  if (m < b.upper_min_m) throw DomainError("upper estimate needs m >= " + std::to_string(b.upper_min_m));
}

}  // namespace

Interval<double> rosser_lower(Natural m, const RosserBounds& b) {
  require_lower(m, b);
  return estimate<double>(m, b.lower_num, b.scale);
}

Interval<double> rosser_upper(Natural m, const RosserBounds& b) {
  require_upper(m, b);
  return estimate<double>(m, b.upper_num, b.scale);
}

Interval<long double> rosser_lower_ext(Natural m, const RosserBounds& b) {
  require_lower(m, b);
  return estimate<long double>(m, b.lower_num, b.scale);
}

Interval<long double> rosser_upper_ext(Natural m, const RosserBounds& b) {
  require_upper(m, b);
  return estimate<long double>(m, b.upper_num, b.scale);
}

Natural indexed_prime(const PrimeTable& table, Natural m, PrimeIndexing indexing) {
  if (indexing == PrimeIndexing::ZeroBased) return table.nth_prime(m);
  if (m == 0) throw DomainError("one-based prime index must be >= 1");
  return table.nth_prime(m - 1);
}

namespace {

enum class Verdict { Holds, Violated, Undecided };

// lower side: bound <= p ; upper side: p <= bound
Verdict decide(Natural m, Natural p, bool lower, const RosserBounds& b) {
  const double pd = static_cast<double>(p);
  const auto iv = lower ? rosser_lower(m, b) : rosser_upper(m, b);
  if (lower ? iv.certainly_le(pd) : iv.certainly_ge(pd)) return Verdict::Holds;
  if (lower ? iv.certainly_gt(pd) : iv.certainly_lt(pd)) return Verdict::Violated;
  const long double pl = static_cast<long double>(p);
  const auto ext = lower ? rosser_lower_ext(m, b) : rosser_upper_ext(m, b);
  if (lower ? ext.certainly_le(pl) : ext.certainly_ge(pl)) return Verdict::Holds;
  if (lower ? ext.certainly_gt(pl) : ext.certainly_lt(pl)) return Verdict::Violated;
  return Verdict::Undecided;
}

VerificationReport check_side(const PrimeTable& table, EstimateRange range, bool lower, PrimeIndexing indexing,
                              const RosserBounds& b) {
  VerificationReport r;
  ReportTimer timer(r);
  r.check = lower ? "estimates.lower" : "estimates.upper";
  r.anchor = lower ? "m log m + m loglog m - 1.0072629 m <= p_m  (m >= 2)"
                   : "p_m <= m log m + m loglog m - 0.9385 m  (m >= 7022)";
  r.oracle = "prime-table";
  r.params = {{"indexing", indexing == PrimeIndexing::ZeroBased ? "zero-based" : "one-based"},
              {"constant", std::to_string(lower ? b.lower_num : b.upper_num) + "/" + std::to_string(b.scale)}};
  r.ranges = {{"m", {range.first, range.last}}};
  r.limits = {{"sieve_limit", table.limit()}, {"prime_count", table.count()}};

  if (range.first > range.last) throw DomainError("empty estimate range");
  if (lower) {
    require_lower(range.first, b);
  } else {
    require_upper(range.first, b);
  }
  // Bounds-check the last index up front so the loop can stay unchecked.
  indexed_prime(table, range.last, indexing);

  Natural violations = 0;
  Natural undecided = 0;
  nlohmann::json first_violations = nlohmann::json::array();
  nlohmann::json first_undecided = nlohmann::json::array();
  Natural last_violation = 0;
  const Natural shift = indexing == PrimeIndexing::OneBased ? 1 : 0;
  for (Natural m = range.first; m <= range.last; ++m) {
    const Natural p = table[m - shift];
    switch (decide(m, p, lower, b)) {
      case Verdict::Holds: break;
      case Verdict::Violated: {
        ++violations;
        last_violation = m;
        const auto iv = lower ? rosser_lower(m, b) : rosser_upper(m, b);
        nlohmann::json w = {{"m", m}, {"p_m", p}, {"bound_lo", iv.lo()}, {"bound_hi", iv.hi()}};
        if (first_violations.size() < 10) first_violations.push_back(w);
        if (violations == 1) r.fail(w);
        break;
      }
      case Verdict::Undecided:
        ++undecided;
        if (first_undecided.size() < 10) first_undecided.push_back(m);
        break;
    }
  }
  r.details = {{"violations", violations}, {"undecided", undecided}};
  if (violations) {
    r.details["first_violations"] = first_violations;
    r.details["last_violation_m"] = last_violation;
  }
  if (undecided) {
    r.details["first_undecided"] = first_undecided;
    r.inconclusive(std::to_string(undecided) + " values undecided by interval arithmetic");
  }
  return r;
}

}  // namespace

VerificationReport check_estimates(const PrimeTable& table, EstimateRange lower, EstimateRange upper,
                                   PrimeIndexing indexing, const RosserBounds& bounds) {
  std::vector<VerificationReport> parts;
  parts.push_back(check_side(table, lower, true, indexing, bounds));
  parts.push_back(check_side(table, upper, false, indexing, bounds));
  return combine("estimates", "two-sided prime estimate", "prime-table", std::move(parts));
}

Natural rosser_search_hint(Natural n, const RosserBounds& b) {
  const auto target = static_cast<double>(n) + 1.0;
  auto good = [&](Natural m) {
    const Interval<double> mm(static_cast<double>(m));
    const auto lm = log(mm);
    const auto per_m = lm + log(lm) - Interval<double>::ratio(static_cast<double>(b.lower_num),
                                                              static_cast<double>(b.scale));
    return per_m.certainly_ge(target);
  };
  Natural hi = 2;
  while (!good(hi)) {
    if (hi > (Natural{1} << 52)) throw OverflowError("search hint beyond double-exact range");
    hi *= 2;
  }
  Natural lo = hi / 2;  // good(lo) is false or lo < 2
  if (lo < 2) return hi;
  while (hi - lo > 1) {
    const Natural mid = lo + (hi - lo) / 2;
    if (good(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace quotdef
