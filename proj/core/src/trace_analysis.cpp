#include "pif/trace_analysis.hpp"

#include <cmath>
#include <optional>

#include "pif/errors.hpp"
#include "pif/stats.hpp"

namespace pif {

std::vector<InteractionCycle> extract_cycles(const SessionTrace& trace) {
  struct Pending {
    std::optional<std::int64_t> feedback_t;
    std::optional<InteractionCycle> open;  // action started, waiting for end
  };
  Pending state[2];
  std::vector<InteractionCycle> out;
  for (const TraceEvent& e : trace.events) {
    if (e.actor != "A" && e.actor != "B") continue;
    Pending& st = state[e.actor == "A" ? 0 : 1];
    switch (e.kind) {
      case EventKind::kFeedback:
        st.feedback_t = e.t_ms;
        break;
      case EventKind::kActionStart:
        if (st.feedback_t) {
          InteractionCycle c;
          c.actor = e.actor;
          c.feedback_t_ms = *st.feedback_t;
          c.action_start_t_ms = e.t_ms;
          st.open = c;
          st.feedback_t.reset();
        }
        break;
      case EventKind::kActionEnd:
        if (st.open) {
          st.open->action_end_t_ms = e.t_ms;
          out.push_back(*st.open);
          st.open.reset();
        }
        break;
      default:
        break;
    }
  }
  return out;
}

ArtEstimate estimate_art(const std::vector<InteractionCycle>& cycles) {
  if (cycles.empty()) throw InsufficientDataError("no interaction cycles");
  std::vector<double> resp_s;
  resp_s.reserve(cycles.size());
  for (const auto& c : cycles) resp_s.push_back(static_cast<double>(c.response_ms()) / 1000.0);
  ArtEstimate a;
  a.n_cycles = static_cast<int>(cycles.size());
  a.mean_s = mean(resp_s);
  a.sd_s = sample_sd(resp_s);
  return a;
}

StallMeasurement measure_stall_ratio(const SessionTrace& trace) {
  std::int64_t stall_total = 0;
  std::optional<std::int64_t> stall_open;
  std::optional<std::int64_t> first_action_start, last_action_end;
  for (const TraceEvent& e : trace.events) {
    switch (e.kind) {
      case EventKind::kStallStart:
        stall_open = e.t_ms;
        break;
      case EventKind::kStallEnd:
        if (stall_open) stall_total += e.t_ms - *stall_open;
        stall_open.reset();
        break;
      case EventKind::kActionStart:
        if (!first_action_start) first_action_start = e.t_ms;
        break;
      case EventKind::kActionEnd:
        last_action_end = e.t_ms;
        break;
      default:
        break;
    }
  }
  if (!first_action_start || !last_action_end)
    throw InsufficientDataError("trace has no actions");
  const std::int64_t span = *last_action_end - *first_action_start;
  StallMeasurement m;
  m.t_s_ms = stall_total;
  m.t_m_ms = span - stall_total;
  if (m.t_m_ms <= 0)
    throw ValidationError("stalled time covers the whole active span");
  m.rs = static_cast<double>(m.t_s_ms) / static_cast<double>(m.t_s_ms + m.t_m_ms);
  return m;
}

double estimate_jnd(const std::vector<SessionTrace>& traces) {
  if (traces.empty()) throw InsufficientDataError("no traces");
  const std::string& task = traces.front().metadata.task;
  std::vector<double> resp_s;
  for (const SessionTrace& t : traces) {
    if (t.metadata.task != task)
      throw ValidationError("traces mix tasks '" + task + "' and '" + t.metadata.task + "'");
    if (t.metadata.delay_ms > 15.0 || t.metadata.stall_count != 0)
      throw ValidationError("trace for scenario '" + t.metadata.scenario +
                            "' was not captured under ideal conditions");
    for (const auto& c : extract_cycles(t))
      resp_s.push_back(static_cast<double>(c.response_ms()) / 1000.0);
  }
  if (resp_s.empty()) throw InsufficientDataError("no interaction cycles in any trace");
  return mean(resp_s);
}

}  // namespace pif
