#include "quotdef/report.hpp"

namespace quotdef {

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

void VerificationReport::fail(nlohmann::json w) {
  if (result == Outcome::Fail) return;
  result = Outcome::Fail;
  witness = std::move(w);
}

void VerificationReport::inconclusive(std::string why) {
  if (result == Outcome::Fail) return;
  result = Outcome::Inconclusive;
  notes.push_back(std::move(why));
}

VerificationReport combine(std::string check, std::string anchor, std::string oracle,
                           std::vector<VerificationReport> parts) {
  VerificationReport out;
  out.check = std::move(check);
  out.anchor = std::move(anchor);
  out.oracle = std::move(oracle);
  double total_ms = 0;
  bool timed = false;
  for (const auto& p : parts) {
    if (p.result == Outcome::Fail && out.result != Outcome::Fail) {
      out.result = Outcome::Fail;
      out.witness = nlohmann::json{{"part", p.check}, {"witness", p.witness.value_or(nullptr)}};
    } else if (p.result == Outcome::Inconclusive && out.result == Outcome::Pass) {
      out.result = Outcome::Inconclusive;
    }
    if (p.runtime_ms) {
      total_ms += *p.runtime_ms;
      timed = true;
    }
  }
  if (timed) out.runtime_ms = total_ms;
  out.parts = std::move(parts);
  return out;
}

nlohmann::json to_json(const VerificationReport& r, bool include_runtime) {
  nlohmann::json j;
  j["check"] = r.check;
  j["anchor"] = r.anchor;
  j["oracle"] = r.oracle;
  j["params"] = r.params;
  j["ranges"] = r.ranges;
  j["result"] = std::string(to_string(r.result));
  if (r.witness) j["witness"] = *r.witness;
  j["seed"] = r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr);
  j["runtime_ms"] = (include_runtime && r.runtime_ms) ? nlohmann::json(*r.runtime_ms) : nlohmann::json(nullptr);
  if (!r.limits.empty()) j["limits"] = r.limits;
  if (!r.details.empty()) j["details"] = r.details;
  if (!r.notes.empty()) j["notes"] = r.notes;
  if (!r.parts.empty()) {
    auto& arr = j["parts"] = nlohmann::json::array();
    for (const auto& p : r.parts) arr.push_back(to_json(p, include_runtime));
  }
  return j;
}

}  // namespace quotdef
