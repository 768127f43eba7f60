#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pif/trace.hpp"

namespace pif {

// Feedback received -> own next action started -> that action finished.
struct InteractionCycle {
  std::string actor;
  std::int64_t feedback_t_ms = 0;
  std::int64_t action_start_t_ms = 0;
  std::int64_t action_end_t_ms = 0;

  // Time from seeing the partner's feedback to starting to act.
  std::int64_t response_ms() const { return action_start_t_ms - feedback_t_ms; }

  bool operator==(const InteractionCycle&) const = default;
};

struct ArtEstimate {
  double mean_s = 0;
  double sd_s = 0;   // sample sd (n-1), 0 for a single cycle
  int n_cycles = 0;
};

struct StallMeasurement {
  std::int64_t t_s_ms = 0;  // total stalled time
  std::int64_t t_m_ms = 0;  // active span minus stalled time
  double rs = 0;            // t_s / (t_s + t_m)
};

// Pair, per actor, each feedback with that actor's next action_start and its
// action_end. A newer feedback before the action supersedes the older one;
// a trailing unanswered feedback is dropped. Cycles come back in completion
// order.
std::vector<InteractionCycle> extract_cycles(const SessionTrace& trace);

// Mean and sample sd of cycle response times, pooled across actors.
ArtEstimate estimate_art(const std::vector<InteractionCycle>& cycles);

// Realized stall ratio over the active span (first action_start to last
// action_end). Throws when the trace contains no actions.
StallMeasurement measure_stall_ratio(const SessionTrace& trace);

// Pooled mean response time over traces captured under ideal conditions,
// the behavioral stand-in for the task's JND. Every trace must share one
// task and have configured delay <= 15 ms and zero stalls.
double estimate_jnd(const std::vector<SessionTrace>& traces);

}  // namespace pif
