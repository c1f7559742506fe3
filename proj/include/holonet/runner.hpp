#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "holonet/report.hpp"
#include "holonet/scenario.hpp"

namespace holonet {

struct RunOptions {
  std::optional<std::vector<Task>> tasks;  // overrides the scenario's task list
  std::optional<std::uint64_t> seed;       // overrides the scenario's seed
  std::optional<double> tolerance;         // overrides every tolerance
};

/// Runs the requested tasks in fixed order. Task failures are recorded in the
/// report; a task whose requested prerequisite did not pass is skipped.
Report run(const ScenarioConfig& config, const RunOptions& options = {});

}  // namespace holonet
