#include "quotdef/natural_set.hpp"

#include <algorithm>

namespace quotdef {

NaturalSet NaturalSet::range(Natural lo, Natural hi) {
  NaturalSet s;
  if (lo <= hi) s.parts_.emplace_back(lo, hi);
  return s;
}

Natural NaturalSet::count() const noexcept {
  Natural total = 0;
  for (const auto& [lo, hi] : parts_) {
    const Natural width = hi - lo;
    if (width == kNaturalMax || total > kNaturalMax - width - 1) return kNaturalMax;
    total += width + 1;
  }
  return total;
}

bool NaturalSet::contains(Natural v) const noexcept {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), v,
                             [](Natural x, const Interval& iv) { return x < iv.first; });
  if (it == parts_.begin()) return false;
  --it;
  return v <= it->second;
}

void NaturalSet::append(Natural lo, Natural hi) {
  if (lo > hi) return;
  if (!parts_.empty()) {
    if (lo <= parts_.back().second) throw DomainError("NaturalSet::append out of order");
    if (lo == parts_.back().second + 1) {
      parts_.back().second = hi;
      return;
    }
  }
  parts_.emplace_back(lo, hi);
}

NaturalSet NaturalSet::intersect(const NaturalSet& other) const {
  NaturalSet out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < parts_.size() && j < other.parts_.size()) {
    const Natural lo = std::max(parts_[i].first, other.parts_[j].first);
    const Natural hi = std::min(parts_[i].second, other.parts_[j].second);
    if (lo <= hi) out.parts_.emplace_back(lo, hi);
    if (parts_[i].second < other.parts_[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

NaturalSet NaturalSet::unite(const NaturalSet& other) const {
  std::vector<Interval> all;
  all.reserve(parts_.size() + other.parts_.size());
  std::merge(parts_.begin(), parts_.end(), other.parts_.begin(), other.parts_.end(), std::back_inserter(all));
  NaturalSet out;
  for (const auto& iv : all) {
    if (!out.parts_.empty()) {
      auto& last = out.parts_.back();
      if (last.second == kNaturalMax || iv.first <= last.second + 1) {
        last.second = std::max(last.second, iv.second);
        continue;
      }
    }
    out.parts_.push_back(iv);
  }
  return out;
}

}  // namespace quotdef
