#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace quotdef {

enum class Outcome { Pass, Fail, Inconclusive };

std::string_view to_string(Outcome outcome);

/// Structured evidence for one empirical check.
///
/// A Fail always carries a witness that can be re-evaluated on its own.
/// Inconclusive is reserved for interval indecision and exhausted searches.
struct VerificationReport {
  std::string check;
  /// The statement under test, written out as a formula.
  std::string anchor;
  std::string oracle;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json ranges = nlohmann::json::object();
  Outcome result = Outcome::Pass;
  std::optional<nlohmann::json> witness;
  std::optional<std::uint64_t> seed;
  std::optional<double> runtime_ms;
  nlohmann::json limits = nlohmann::json::object();
  nlohmann::json details = nlohmann::json::object();
  std::vector<std::string> notes;
  std::vector<VerificationReport> parts;

  bool passed() const noexcept { return result == Outcome::Pass; }

  /// Marks the report failed with the given witness (first failure wins).
  void fail(nlohmann::json w);
  /// Marks inconclusive unless already failed.
  void inconclusive(std::string why);
};

/// Aggregates sub-reports: fail if any failed, else inconclusive if any was,
/// else pass. The first failing part's witness is lifted to the top level.
VerificationReport combine(std::string check, std::string anchor, std::string oracle,
                           std::vector<VerificationReport> parts);

/// Serialises to the report schema. Runtime is written only when
/// include_runtime is set so identical runs produce identical bytes.
nlohmann::json to_json(const VerificationReport& report, bool include_runtime = false);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Measures wall time into report.runtime_ms when it goes out of scope.
class ReportTimer {
 public:
  explicit ReportTimer(VerificationReport& report)
      : report_(report), start_(std::chrono::steady_clock::now()) {}
  ~ReportTimer() {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    report_.runtime_ms = std::chrono::duration<double, std::milli>(elapsed).count();
  }
  ReportTimer(const ReportTimer&) = delete;
  ReportTimer& operator=(const ReportTimer&) = delete;

 private:
  VerificationReport& report_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace quotdef
