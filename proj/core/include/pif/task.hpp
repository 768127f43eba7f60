#pragma once

#include <string>
#include <vector>

namespace pif {

// A collaborative task, characterized by the delay level at which users start
// to notice impairment (just-noticeable difference, seconds).
struct TaskProfile {
  std::string name;  // "SP", "TTT", "MAR", "BR", "LES", "VA"
  double jnd_s = 0;  // > 0

  bool operator==(const TaskProfile&) const = default;
};

// The six built-in tasks with their measured JNDs.
const std::vector<TaskProfile>& builtin_tasks();

// Lookup by name. Throws UnsupportedTaskError if absent.
const TaskProfile& find_task(const std::string& name);

// True if `name` is one of the built-in task names.
bool is_builtin_task(const std::string& name);

}  // namespace pif
