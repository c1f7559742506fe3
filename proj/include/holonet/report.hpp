#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "holonet/group.hpp"
#include "holonet/scenario.hpp"

namespace holonet {

inline constexpr int kReportVersion = 1;

enum class Status { Pass, Fail, Skipped, Error };
std::string to_string(Status s);
Status parse_status(std::string_view s);

/// One tested number: passes when value ≤ tolerance.
struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = true;

  bool operator==(const Check&) const = default;
};

struct TaskSection {
  Task task = Task::Check;
  Status status = Status::Pass;
  std::string message;     // skip reason or error text
  std::string error_kind;  // "capacity", "timeout", "sector", ... when status is Error
  std::vector<Check> checks;
  nlohmann::json values = nlohmann::json::object();

  bool operator==(const TaskSection&) const = default;
};

struct Report {
  int report_version = kReportVersion;
  int schema_version = kScenarioSchemaVersion;
  std::string scenario;
  std::string topology;
  std::string group;
  std::optional<std::uint64_t> seed;
  std::vector<TaskSection> tasks;

  const TaskSection* section(Task t) const;
  bool operator==(const Report&) const = default;
};

enum ExitCode : int { kExitOk = 0, kExitTaskFailure = 1, kExitParse = 2, kExitCapacity = 3 };
/// 0 iff every requested task passed; capacity errors take precedence.
int exit_code(const Report& r);

enum class Format { Text, Structured };

std::string emit(const Report& r, Format f);
std::string emit_structured(const Report& r);
std::string emit_text(const Report& r);
/// Inverse of emit_structured; throws ParseError on schema violations.
Report parse_report(std::string_view text);

nlohmann::json complex_json(Complex c);
/// U(1): {"angle", "value": [re, im]}; U(n): {"matrix": rows of [re, im]}.
nlohmann::json group_value_json(const GroupValue& g);

}  // namespace holonet
