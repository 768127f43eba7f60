#include "pif/trace.hpp"

#include <cmath>
#include <istream>
#include <sstream>

#include "json.hpp"

#include "pif/errors.hpp"

namespace pif {
namespace {

using json = nlohmann::json;

constexpr std::pair<EventKind, std::string_view> kKindNames[] = {
    {EventKind::kSessionStart, "session_start"},
    {EventKind::kSessionEnd, "session_end"},
    {EventKind::kInput, "input"},
    {EventKind::kFeedback, "feedback"},
    {EventKind::kActionStart, "action_start"},
    {EventKind::kActionEnd, "action_end"},
    {EventKind::kStallStart, "stall_start"},
    {EventKind::kStallEnd, "stall_end"},
};

std::string describe(const TraceEvent& e, size_t index) {
  return "event " + std::to_string(index + 1) + " (" + std::string(to_string(e.kind)) +
         ", actor " + e.actor + ", t=" + std::to_string(e.t_ms) + ")";
}

// Integral-valued doubles are written as integers so configured millisecond
// values look like milliseconds.
json number(double v) {
  if (v == std::floor(v) && std::fabs(v) < 9.0e15) return static_cast<std::int64_t>(v);
  return v;
}

double get_number(const json& j, const char* key, std::int64_t line) {
  if (!j.contains(key)) throw ParseError("missing key '" + std::string(key) + "'", line);
  const json& v = j.at(key);
  if (!v.is_number()) throw ParseError("key '" + std::string(key) + "' must be a number", line);
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError("key '" + std::string(key) + "' must be finite", line);
  return d;
}

std::int64_t get_int(const json& j, const char* key, std::int64_t line) {
  if (!j.contains(key)) throw ParseError("missing key '" + std::string(key) + "'", line);
  const json& v = j.at(key);
  if (!v.is_number_integer())
    throw ParseError("key '" + std::string(key) + "' must be an integer", line);
  return v.get<std::int64_t>();
}

std::string get_string(const json& j, const char* key, std::int64_t line) {
  if (!j.contains(key)) throw ParseError("missing key '" + std::string(key) + "'", line);
  const json& v = j.at(key);
  if (!v.is_string()) throw ParseError("key '" + std::string(key) + "' must be a string", line);
  return v.get<std::string>();
}

json parse_line(const std::string& line, std::int64_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid record: ") + e.what(), line_no);
  }
  if (!j.is_object()) throw ParseError("record must be an object", line_no);
  return j;
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    std::int64_t line_no) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) known = true;
    if (!known) throw ParseError("unknown key '" + item.key() + "'", line_no);
  }
}

}  // namespace

std::string_view to_string(EventKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

std::optional<EventKind> event_kind_from_string(std::string_view s) {
  for (const auto& [kind, name] : kKindNames)
    if (name == s) return kind;
  return std::nullopt;
}

void validate_trace(const SessionTrace& trace) {
  const auto& m = trace.metadata;
  if (m.task.empty()) throw ValidationError("metadata task must not be empty");
  if (m.delay_ms < 0 || m.stall_count < 0 || m.avg_stall_ms < 0)
    throw ValidationError("metadata delay/stall fields must be >= 0");

  const auto& ev = trace.events;
  if (ev.empty()) throw ValidationError("trace has no events");
  if (ev.front().kind != EventKind::kSessionStart)
    throw ValidationError("trace must begin with session_start, got " + describe(ev.front(), 0));
  if (ev.back().kind != EventKind::kSessionEnd)
    throw ValidationError("trace must end with session_end, got " +
                          describe(ev.back(), ev.size() - 1));

  bool in_stall = false;
  struct ActorState {
    bool action_open = false;
  };
  ActorState actors[2];  // A, B
  for (size_t i = 0; i < ev.size(); ++i) {
    const TraceEvent& e = ev[i];
    if (e.t_ms < 0) throw ValidationError(describe(e, i) + ": negative timestamp");
    if (i > 0 && e.t_ms < ev[i - 1].t_ms)
      throw ValidationError(describe(e, i) + ": timestamps must be non-decreasing");
    if (e.op_index && *e.op_index < 0)
      throw ValidationError(describe(e, i) + ": op_index must be >= 0");

    const bool user_kind = e.kind == EventKind::kInput || e.kind == EventKind::kFeedback ||
                           e.kind == EventKind::kActionStart || e.kind == EventKind::kActionEnd;
    if (user_kind) {
      if (e.actor != "A" && e.actor != "B")
        throw ValidationError(describe(e, i) + ": actor must be A or B");
    } else {
      if (e.actor != "system")
        throw ValidationError(describe(e, i) + ": actor must be system");
    }
    if ((e.kind == EventKind::kSessionStart && i != 0) ||
        (e.kind == EventKind::kSessionEnd && i + 1 != ev.size()))
      throw ValidationError(describe(e, i) + ": session markers only at the boundaries");

    switch (e.kind) {
      case EventKind::kStallStart:
        if (in_stall) throw ValidationError(describe(e, i) + ": stall_start inside a stall");
        in_stall = true;
        break;
      case EventKind::kStallEnd:
        if (!in_stall) throw ValidationError(describe(e, i) + ": stall_end without stall_start");
        in_stall = false;
        break;
      case EventKind::kActionStart: {
        ActorState& st = actors[e.actor == "A" ? 0 : 1];
        if (st.action_open)
          throw ValidationError(describe(e, i) + ": action_start before previous action_end");
        st.action_open = true;
        break;
      }
      case EventKind::kActionEnd: {
        ActorState& st = actors[e.actor == "A" ? 0 : 1];
        if (!st.action_open)
          throw ValidationError(describe(e, i) + ": action_end without action_start");
        st.action_open = false;
        break;
      }
      default:
        break;
    }
  }
  if (in_stall) throw ValidationError("trace ends inside a stall");
  if (actors[0].action_open || actors[1].action_open)
    throw ValidationError("trace ends with an unfinished action");
}

SessionTrace parse_trace(std::istream& in) {
  SessionTrace trace;
  std::string line;
  std::int64_t line_no = 0;
  bool have_meta = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      throw ParseError("CR line ending; trace files use LF", line_no);
    if (line.empty()) throw ParseError("blank line", line_no);
    json j = parse_line(line, line_no);
    if (!have_meta) {
      reject_unknown(j, {"task", "scenario", "seed", "delay_ms", "stall_count", "avg_stall_ms"},
                     line_no);
      TraceMetadata m;
      m.task = get_string(j, "task", line_no);
      m.scenario = get_string(j, "scenario", line_no);
      if (!j.contains("seed") || !j.at("seed").is_number_unsigned())
        throw ParseError("key 'seed' must be a nonnegative integer", line_no);
      m.seed = j.at("seed").get<std::uint64_t>();
      m.delay_ms = get_number(j, "delay_ms", line_no);
      const std::int64_t sc = get_int(j, "stall_count", line_no);
      if (sc < 0) throw ParseError("stall_count must be >= 0", line_no);
      m.stall_count = static_cast<int>(sc);
      m.avg_stall_ms = get_number(j, "avg_stall_ms", line_no);
      trace.metadata = m;
      have_meta = true;
      continue;
    }
    reject_unknown(j, {"t_ms", "actor", "kind", "op_index"}, line_no);
    TraceEvent e;
    e.t_ms = get_int(j, "t_ms", line_no);
    e.actor = get_string(j, "actor", line_no);
    const std::string kind = get_string(j, "kind", line_no);
    auto k = event_kind_from_string(kind);
    if (!k) throw ParseError("unknown event kind '" + kind + "'", line_no);
    e.kind = *k;
    if (j.contains("op_index")) {
      const std::int64_t op = get_int(j, "op_index", line_no);
      if (op < 0) throw ParseError("op_index must be >= 0", line_no);
      e.op_index = static_cast<int>(op);
    }
    trace.events.push_back(std::move(e));
  }
  if (!have_meta) throw ParseError("empty trace document");
  validate_trace(trace);
  return trace;
}

SessionTrace parse_trace(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in);
}

std::string serialize_trace(const SessionTrace& trace) {
  std::string out;
  const auto& m = trace.metadata;
  json meta = {
      {"task", m.task},           {"scenario", m.scenario},
      {"seed", m.seed},           {"delay_ms", number(m.delay_ms)},
      {"stall_count", m.stall_count}, {"avg_stall_ms", number(m.avg_stall_ms)},
  };
  out += meta.dump();
  out += '\n';
  for (const TraceEvent& e : trace.events) {
    json j = {{"t_ms", e.t_ms}, {"actor", e.actor}, {"kind", std::string(to_string(e.kind))}};
    if (e.op_index) j["op_index"] = *e.op_index;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace pif
