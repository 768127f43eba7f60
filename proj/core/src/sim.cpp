#include "pif/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "pif/errors.hpp"

namespace pif {
namespace {

using json = nlohmann::json;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) { return splitmix64(h ^ v); }

void require_finite_nonneg(double v, const char* what) {
  if (!std::isfinite(v) || v < 0) throw InputError(std::string(what) + " must be finite and >= 0");
}

TraceEvent make_event(std::int64_t t, const char* actor, EventKind kind, int op = -1) {
  TraceEvent e;
  e.t_ms = t;
  e.actor = actor;
  e.kind = kind;
  if (op >= 0) e.op_index = op;
  return e;
}

}  // namespace

void validate_config(const ScenarioConfig& config) {
  if (config.task.name.empty()) throw InputError("task.name must not be empty");
  if (!std::isfinite(config.task.think_mean_ms) || config.task.think_mean_ms <= 0)
    throw InputError("task.think_mean_ms must be > 0");
  require_finite_nonneg(config.task.think_jitter_ms, "task.think_jitter_ms");
  if (config.task.n_operations < 1) throw InputError("task.n_operations must be >= 1");
  require_finite_nonneg(config.network.inherent_latency_ms, "network.inherent_latency_ms");
  require_finite_nonneg(config.network.added_delay_ms, "network.added_delay_ms");
  if (config.stalls.count < 0) throw InputError("stalls.count must be >= 0");
  if (config.stalls.count > config.task.n_operations)
    throw InputError("stalls.count exceeds the cycle count (" +
                     std::to_string(config.task.n_operations) + ")");
  require_finite_nonneg(config.stalls.avg_duration_ms, "stalls.avg_duration_ms");
  if (config.stalls.count > 0 && config.stalls.avg_duration_ms <= 0)
    throw InputError("stalls.avg_duration_ms must be > 0 when stalls.count > 0");
  require_finite_nonneg(config.stalls.duration_jitter_ms, "stalls.duration_jitter_ms");
  require_finite_nonneg(config.stalls.trigger_offset_ms, "stalls.trigger_offset_ms");
}

StallPlan schedule_stalls(int n_cycles, const StallConfig& stalls, Rng& rng) {
  if (n_cycles < 0) throw InputError("n_cycles must be >= 0");
  if (stalls.count > n_cycles)
    throw InputError("stalls.count exceeds the cycle count (" + std::to_string(n_cycles) + ")");
  if (stalls.count == 0) return {};
  if (stalls.avg_duration_ms <= 0)
    throw InputError("stalls.avg_duration_ms must be > 0 when stalls.count > 0");

  std::vector<int> cycles(n_cycles);
  std::iota(cycles.begin(), cycles.end(), 0);
  for (int i = 0; i < stalls.count; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_cycles - i)));
    std::swap(cycles[i], cycles[j]);
  }
  cycles.resize(stalls.count);
  std::sort(cycles.begin(), cycles.end());

  StallPlan plan;
  plan.reserve(cycles.size());
  for (int c : cycles) {
    const double u = rng.uniform01();
    const double d = stalls.avg_duration_ms + stalls.duration_jitter_ms * (2.0 * u - 1.0);
    StallPlanEntry e;
    e.cycle_index = c;
    e.onset_offset_ms = stalls.trigger_offset_ms;
    e.duration_ms = std::max<std::int64_t>(1, std::llround(d));
    plan.push_back(e);
  }
  return plan;
}

SessionTrace simulate_session(const ScenarioConfig& config, double action_duration_ms) {
  validate_config(config);
  if (!std::isfinite(action_duration_ms) || action_duration_ms <= 0)
    throw InputError("action duration must be > 0");

  const int n = config.task.n_operations;
  Rng rng(config.seed);
  const StallPlan plan = schedule_stalls(n, config.stalls, rng);
  std::vector<std::int64_t> think(n);
  for (auto& t : think)
    t = std::llround(
        rng.truncated_normal_nonneg(config.task.think_mean_ms, config.task.think_jitter_ms));

  const std::int64_t delay = std::llround(config.e2e_delay_ms());
  const std::int64_t act = std::llround(action_duration_ms);

  // Ideal (stall-free) timeline. A feedback with op_index k opens cycle k.
  std::vector<TraceEvent> ev;
  ev.push_back(make_event(0, "system", EventKind::kSessionStart));
  ev.push_back(make_event(0, "A", EventKind::kFeedback, 0));
  std::vector<std::int64_t> input_t(n);
  std::int64_t fb = 0;
  for (int k = 0; k < n; ++k) {
    const char* actor = k % 2 == 0 ? "A" : "B";
    const char* partner = k % 2 == 0 ? "B" : "A";
    const std::int64_t in_t = fb + think[k];
    input_t[k] = in_t;
    ev.push_back(make_event(in_t, actor, EventKind::kInput, k));
    ev.push_back(make_event(in_t, actor, EventKind::kActionStart, k));
    const std::int64_t ae = in_t + act;
    ev.push_back(make_event(ae, actor, EventKind::kActionEnd, k));
    fb = ae + delay;
    ev.push_back(make_event(fb, partner, EventKind::kFeedback, k + 1));
  }
  ev.push_back(make_event(fb, "system", EventKind::kSessionEnd));

  // Freeze: everything at or after the onset slides by the stall duration.
  for (const auto& s : plan) {
    const std::int64_t onset = input_t[s.cycle_index] + std::llround(s.onset_offset_ms);
    auto it = std::find_if(ev.begin(), ev.end(),
                           [&](const TraceEvent& e) { return e.t_ms >= onset; });
    const auto idx = static_cast<size_t>(it - ev.begin());
    for (size_t i = idx; i < ev.size(); ++i) ev[i].t_ms += s.duration_ms;
    const TraceEvent stall_pair[] = {
        make_event(onset, "system", EventKind::kStallStart, s.cycle_index),
        make_event(onset + s.duration_ms, "system", EventKind::kStallEnd, s.cycle_index),
    };
    ev.insert(ev.begin() + static_cast<std::ptrdiff_t>(idx), std::begin(stall_pair),
              std::end(stall_pair));
    for (auto& t : input_t)
      if (t >= onset) t += s.duration_ms;
  }

  SessionTrace trace;
  trace.metadata.task = config.task.name;
  trace.metadata.scenario = config.scenario_id;
  trace.metadata.seed = config.seed;
  trace.metadata.delay_ms = config.e2e_delay_ms();
  trace.metadata.stall_count = config.stalls.count;
  trace.metadata.avg_stall_ms = config.stalls.avg_duration_ms;
  trace.events = std::move(ev);
  try {
    validate_trace(trace);
  } catch (const ValidationError& e) {
    throw InputError(std::string("configuration produces an invalid timeline: ") + e.what());
  }
  return trace;
}

std::vector<std::vector<int>> latin_square(int n) {
  if (n < 1) throw InputError("latin_square needs n >= 1");
  std::vector<int> first(n);
  first[0] = 0;
  for (int j = 1; j < n; ++j) first[j] = (j % 2 == 1) ? (j + 1) / 2 : n - j / 2;
  std::vector<std::vector<int>> rows(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rows[i][j] = (first[j] + i) % n;
  return rows;
}

TaskSimConfig task_preset(const std::string& task_name) {
  const TaskProfile& t = find_task(task_name);
  TaskSimConfig c;
  c.name = t.name;
  c.think_mean_ms = t.jnd_s * 1000.0;
  c.think_jitter_ms = 0;
  c.n_operations = 9;
  return c;
}

std::vector<ScenarioConfig> builtin_scenarios(ScenarioTable table) {
  struct Row {
    double delay_e2e;  // 0 = platform floor only
    int times;
    double avg_ms;
  };
  static const Row kTableII[] = {
      {0, 1, 100}, {0, 1, 200}, {0, 1, 300}, {0, 1, 500}, {0, 1, 1000}, {0, 1, 2000},
      {0, 2, 100}, {0, 2, 200}, {0, 2, 500}, {0, 2, 1000},
      {0, 3, 100}, {0, 3, 200}, {0, 3, 500}, {0, 3, 1000},
  };
  static const Row kTableIII[] = {
      {1000, 1, 300}, {500, 1, 1000}, {2000, 1, 2000}, {800, 2, 500},
      {1000, 2, 1000}, {2000, 2, 1000}, {300, 3, 500},  {2000, 3, 1000},
  };
  static const Row kTableIV[] = {
      {200, 1, 200}, {2000, 1, 500}, {800, 1, 1000}, {500, 1, 2000}, {800, 2, 300},
      {1000, 2, 400}, {400, 2, 800}, {200, 3, 200},  {600, 3, 400},  {1000, 3, 1000},
  };
  static const double kDelayLevels[] = {100, 200, 300, 500, 800, 1000, 2000, 3000};

  const TaskSimConfig default_task = task_preset("BR");
  std::vector<ScenarioConfig> out;
  auto push = [&](const std::string& id, double delay_e2e, int times, double avg) {
    ScenarioConfig c;
    c.task = default_task;
    c.network.added_delay_ms =
        delay_e2e > 0 ? std::max(0.0, delay_e2e - c.network.inherent_latency_ms) : 0.0;
    c.stalls.count = times;
    c.stalls.avg_duration_ms = avg;
    c.scenario_id = id;
    out.push_back(std::move(c));
  };
  switch (table) {
    case ScenarioTable::kII:
      for (size_t i = 0; i < std::size(kTableII); ++i)
        push("II-" + std::to_string(i + 1), kTableII[i].delay_e2e, kTableII[i].times,
             kTableII[i].avg_ms);
      break;
    case ScenarioTable::kIII:
      for (size_t i = 0; i < std::size(kTableIII); ++i)
        push("III-" + std::to_string(i + 1), kTableIII[i].delay_e2e, kTableIII[i].times,
             kTableIII[i].avg_ms);
      break;
    case ScenarioTable::kIV:
      for (size_t i = 0; i < std::size(kTableIV); ++i)
        push("IV-" + std::to_string(i + 1), kTableIV[i].delay_e2e, kTableIV[i].times,
             kTableIV[i].avg_ms);
      break;
    case ScenarioTable::kDelayLevels:
      for (double level : kDelayLevels)
        push("delay-" + std::to_string(static_cast<int>(level)), level, 0, 0);
      break;
  }
  return out;
}

std::vector<int> synth_ratings(const ImpairmentCondition& condition, const TaskProfile& task,
                               double q, int n_participants, double noise_sd,
                               std::uint64_t seed) {
  validate_condition(condition);
  if (!std::isfinite(q) || q < 1 || q > 5) throw InputError("q must be in [1,5]");
  if (n_participants < 1) throw InputError("n_participants must be >= 1");
  if (!std::isfinite(noise_sd) || noise_sd < 0) throw InputError("noise_sd must be >= 0");

  std::uint64_t h = splitmix64(seed);
  h = mix(h, fnv1a(task.name));
  h = mix(h, std::bit_cast<std::uint64_t>(condition.delay_ms));
  h = mix(h, static_cast<std::uint64_t>(condition.stall_count));
  h = mix(h, std::bit_cast<std::uint64_t>(condition.avg_stall_ms));
  h = mix(h, std::bit_cast<std::uint64_t>(condition.interaction_ms));
  Rng rng(h);

  std::vector<int> out;
  out.reserve(static_cast<size_t>(n_participants));
  for (int i = 0; i < n_participants; ++i) {
    const long r = std::lround(q + rng.normal(0, noise_sd));
    out.push_back(static_cast<int>(std::clamp(r, 1L, 5L)));
  }
  return out;
}

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  if (!j.is_object()) throw ParseError(where + " must be an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) known = true;
    if (!known) throw ParseError("unknown key '" + item.key() + "' in " + where);
  }
}

double config_num(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ParseError("key '" + std::string(key) + "' in " + where + " must be a number");
  return j.at(key).get<double>();
}

int config_int(const json& j, const char* key, int fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer())
    throw ParseError("key '" + std::string(key) + "' in " + where + " must be an integer");
  return j.at(key).get<int>();
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid config JSON: ") + e.what());
  }
  reject_unknown_keys(j, {"task", "network", "stalls", "seed"}, "config");
  if (!j.contains("task")) throw ParseError("config needs a 'task' object");

  ScenarioConfig c;
  const json& t = j.at("task");
  reject_unknown_keys(t, {"name", "think_mean_ms", "think_jitter_ms", "n_operations"},
                      "config.task");
  if (!t.contains("name") || !t.at("name").is_string())
    throw ParseError("config.task needs a string 'name'");
  c.task.name = t.at("name").get<std::string>();
  if (!t.contains("think_mean_ms"))
    throw ParseError("config.task needs 'think_mean_ms'");
  c.task.think_mean_ms = config_num(t, "think_mean_ms", 0, "config.task");
  c.task.think_jitter_ms = config_num(t, "think_jitter_ms", 0, "config.task");
  c.task.n_operations = config_int(t, "n_operations", 9, "config.task");

  if (j.contains("network")) {
    const json& nw = j.at("network");
    reject_unknown_keys(nw, {"inherent_latency_ms", "added_delay_ms"}, "config.network");
    c.network.inherent_latency_ms = config_num(nw, "inherent_latency_ms", 15, "config.network");
    c.network.added_delay_ms = config_num(nw, "added_delay_ms", 0, "config.network");
  }
  if (j.contains("stalls")) {
    const json& st = j.at("stalls");
    reject_unknown_keys(st, {"count", "avg_duration_ms", "duration_jitter_ms", "trigger_offset_ms"},
                        "config.stalls");
    c.stalls.count = config_int(st, "count", 0, "config.stalls");
    c.stalls.avg_duration_ms = config_num(st, "avg_duration_ms", 0, "config.stalls");
    c.stalls.duration_jitter_ms = config_num(st, "duration_jitter_ms", 0, "config.stalls");
    c.stalls.trigger_offset_ms = config_num(st, "trigger_offset_ms", 500, "config.stalls");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned())
      throw ParseError("config 'seed' must be a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  validate_config(c);
  return c;
}

ScenarioConfig load_scenario_config(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_config(buf.str());
}

std::string serialize_scenario_config(const ScenarioConfig& c) {
  json j = {
      {"task",
       {{"name", c.task.name},
        {"think_mean_ms", c.task.think_mean_ms},
        {"think_jitter_ms", c.task.think_jitter_ms},
        {"n_operations", c.task.n_operations}}},
      {"network",
       {{"inherent_latency_ms", c.network.inherent_latency_ms},
        {"added_delay_ms", c.network.added_delay_ms}}},
      {"stalls",
       {{"count", c.stalls.count},
        {"avg_duration_ms", c.stalls.avg_duration_ms},
        {"duration_jitter_ms", c.stalls.duration_jitter_ms},
        {"trigger_offset_ms", c.stalls.trigger_offset_ms}}},
      {"seed", c.seed},
  };
  return j.dump(2) + "\n";
}

}  // namespace pif
