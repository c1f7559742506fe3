#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holonet/cover.hpp"
#include "holonet/group.hpp"

namespace holonet {

inline constexpr int kScenarioSchemaVersion = 1;

enum class Task { Check, Trivialize, Holonomy, Sector, Amplitude, Classify };

/// Tasks in execution order.
const std::vector<Task>& all_tasks();
std::string to_string(Task t);
std::optional<Task> parse_task(std::string_view name);

struct NamedPath {
  std::string name;
  std::vector<RegionId> visited;
};

struct AmplitudeSpec {
  std::string name;
  std::string q;  // path names, both a -> o
  std::string p;
};

struct Tolerances {
  double group = kGroupTolerance;   // cocycle, holonomy, trivialization
  double sector = kGroupTolerance;  // window identities, amplitudes
};

struct ScenarioConfig {
  int schema_version = kScenarioSchemaVersion;
  std::string name;
  std::optional<BuiltinSpec> builtin;  // unset for explicit covers
  Cover cover;
  GroupDescriptor group;
  std::map<std::string, GroupValue> sigma;  // keyed by generator symbol
  int modes_per_region = 2;
  int charge = 1;
  std::vector<NamedPath> loops;
  std::vector<NamedPath> paths;
  std::vector<AmplitudeSpec> amplitudes;
  std::vector<Task> tasks;  // execution order
  Tolerances tolerances;
  std::optional<std::uint64_t> seed;
  int random_checks = 0;  // randomized homotopy and amplitude samples per task
  double timeout_seconds = 0.0;  // per task; 0 disables

  const NamedPath* find_path(std::string_view name) const;
};

/// "pi/3", "-2pi/3", "3*pi/4", "pi", "1.25".
double parse_angle(std::string_view text);

/// Throws ParseError with "source:line: message" diagnostics.
ScenarioConfig parse_scenario(const std::filesystem::path& path);
ScenarioConfig parse_scenario_text(std::string_view text, std::string_view source = "<scenario>");

}  // namespace holonet
