#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pif {

enum class EventKind {
  kSessionStart,
  kSessionEnd,
  kInput,
  kFeedback,
  kActionStart,
  kActionEnd,
  kStallStart,
  kStallEnd,
};

std::string_view to_string(EventKind k);
std::optional<EventKind> event_kind_from_string(std::string_view s);

struct TraceEvent {
  std::int64_t t_ms = 0;
  std::string actor;  // "A", "B", or "system"
  EventKind kind = EventKind::kSessionStart;
  std::optional<int> op_index;  // cycle the event belongs to, when it has one

  bool operator==(const TraceEvent&) const = default;
};

// Configuration echo carried in the first line of a trace file.
struct TraceMetadata {
  std::string task;
  std::string scenario;
  std::uint64_t seed = 0;
  double delay_ms = 0;      // configured end-to-end delay
  int stall_count = 0;      // configured number of stalls
  double avg_stall_ms = 0;  // configured mean stall duration

  bool operator==(const TraceMetadata&) const = default;
};

struct SessionTrace {
  TraceMetadata metadata;
  std::vector<TraceEvent> events;

  bool operator==(const SessionTrace&) const = default;
};

// Structural rules every trace must satisfy: starts with session_start, ends
// with session_end, timestamps non-decreasing, stalls alternate and never
// nest, and each actor's action_start/action_end strictly pair up. Throws
// ValidationError naming the first offending event.
void validate_trace(const SessionTrace& trace);

// One event per line; first line is the metadata record. Unknown keys,
// missing keys, or type mismatches raise ParseError with the line number.
// The returned trace has been validated.
SessionTrace parse_trace(std::istream& in);
SessionTrace parse_trace(const std::string& text);

// Inverse of parse_trace, byte-deterministic: keys are emitted in sorted
// order, lines end with LF.
std::string serialize_trace(const SessionTrace& trace);

}  // namespace pif
