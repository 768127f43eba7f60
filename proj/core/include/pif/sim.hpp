#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pif/model.hpp"
#include "pif/rng.hpp"
#include "pif/task.hpp"
#include "pif/trace.hpp"

namespace pif {

struct TaskSimConfig {
  std::string name;
  double think_mean_ms = 0;    // > 0
  double think_jitter_ms = 0;  // >= 0, sd of the truncated-normal think time
  int n_operations = 9;        // >= 1

  bool operator==(const TaskSimConfig&) const = default;
};

struct NetworkConfig {
  double inherent_latency_ms = 15;  // platform floor
  double added_delay_ms = 0;        // >= 0

  bool operator==(const NetworkConfig&) const = default;
};

struct StallConfig {
  int count = 0;                   // >= 0, at most one stall per cycle
  double avg_duration_ms = 0;      // > 0 when count > 0
  double duration_jitter_ms = 0;   // >= 0, uniform half-width around avg
  double trigger_offset_ms = 500;  // stall onset relative to the input event

  bool operator==(const StallConfig&) const = default;
};

struct ScenarioConfig {
  TaskSimConfig task;
  NetworkConfig network;
  StallConfig stalls;
  std::uint64_t seed = 0;
  // Identity used in trace metadata and rating cells; not part of the
  // config file format.
  std::string scenario_id = "custom";

  double e2e_delay_ms() const { return network.inherent_latency_ms + network.added_delay_ms; }

  bool operator==(const ScenarioConfig&) const = default;
};

struct StallPlanEntry {
  int cycle_index = 0;         // distinct across the plan
  double onset_offset_ms = 0;  // always = trigger_offset_ms
  std::int64_t duration_ms = 0;  // > 0
};
using StallPlan = std::vector<StallPlanEntry>;

// Throws InputError describing the first invalid field.
void validate_config(const ScenarioConfig& config);

// Pick `stalls.count` distinct cycles uniformly without replacement (plan
// sorted by cycle) and a duration avg +- jitter for each (floor 1 ms).
// Consumes rng draws even when jitter is 0 so streams stay aligned.
StallPlan schedule_stalls(int n_cycles, const StallConfig& stalls, Rng& rng);

// Deterministic two-agent turn-taking run. Actors alternate A, B, A, ...;
// each cycle is feedback -> (think) -> input/action_start -> action_end,
// with the partner's feedback arriving one end-to-end delay later. A stall
// scheduled in a cycle opens trigger_offset_ms after the input and freezes
// everything that would have happened from its onset on. Identical config
// (seed included) gives a byte-identical serialized trace.
SessionTrace simulate_session(const ScenarioConfig& config, double action_duration_ms = 600);

// n x n matrix, values 0..n-1, each once per row and column; rows follow the
// standard balanced construction (0, 1, n-1, 2, n-2, ... then +1 mod n per
// row), which for even n also balances first-order carryover.
std::vector<std::vector<int>> latin_square(int n);

enum class ScenarioTable { kII, kIII, kIV, kDelayLevels };

// Simulator presets for a built-in task: think mean bound to the task JND,
// zero jitter, 9 operations.
TaskSimConfig task_preset(const std::string& task_name);

// The built-in study condition tables. Tasks default to the BR preset and
// seeds to 0; callers override both. Delay entries are end-to-end targets,
// so added_delay = level - inherent 15 ms. The stall-only table runs at the
// 15 ms floor.
std::vector<ScenarioConfig> builtin_scenarios(ScenarioTable table);

// Synthetic ACR panel: clamp(round(q + normal(0, noise_sd)), 1, 5) per
// participant. The task name and condition are mixed into the seed, so one
// base seed yields independent streams per cell.
std::vector<int> synth_ratings(const ImpairmentCondition& condition, const TaskProfile& task,
                               double q, int n_participants, double noise_sd,
                               std::uint64_t seed);

// Strict config document: exact field names, unknown keys rejected.
// task.name and task.think_mean_ms are required, everything else has the
// defaults above.
ScenarioConfig load_scenario_config(std::istream& in);
ScenarioConfig parse_scenario_config(const std::string& text);
std::string serialize_scenario_config(const ScenarioConfig& config);

}  // namespace pif
