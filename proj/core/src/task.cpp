#include "pif/task.hpp"

#include "pif/errors.hpp"

namespace pif {

const std::vector<TaskProfile>& builtin_tasks() {
  static const std::vector<TaskProfile> kTasks = {
      {"SP", 3.34}, {"TTT", 1.57}, {"MAR", 1.16},
      {"BR", 0.38}, {"LES", 0.71}, {"VA", 0.95},
  };
  return kTasks;
}

const TaskProfile& find_task(const std::string& name) {
  for (const auto& t : builtin_tasks()) {
    if (t.name == name) return t;
  }
  throw UnsupportedTaskError("unknown task '" + name + "'");
}

bool is_builtin_task(const std::string& name) {
  for (const auto& t : builtin_tasks()) {
    if (t.name == name) return true;
  }
  return false;
}

}  // namespace pif
