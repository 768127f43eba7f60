#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pif/fit.hpp"
#include "pif/model.hpp"
#include "pif/stats.hpp"

namespace pif {

// Condition lookup row: which impairment a (task, scenario) cell ran under.
struct ConditionRow {
  std::string task;
  std::string scenario_id;
  ImpairmentCondition condition;
};

// Header: participant_id,task,scenario_id,rating
std::vector<RatingRecord> read_ratings_csv(std::istream& in);

// Header: task,scenario_id,delay_ms,stall_count,avg_stall_ms,interaction_ms
// Duplicate (task, scenario_id) pairs are rejected.
std::vector<ConditionRow> read_conditions_csv(std::istream& in);

// Header: x,y
Dataset read_xy_csv(std::istream& in);

// Header: qd,qs,mos
std::vector<WeightsRecord> read_weights_csv(std::istream& in);

}  // namespace pif
