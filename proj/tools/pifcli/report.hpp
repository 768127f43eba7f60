#pragma once

#include <string>
#include <vector>

#include "pif/csv.hpp"
#include "pif/model.hpp"
#include "pif/stats.hpp"

namespace pif::cli {

// Fixed-width numeric rendering so report files diff cleanly.
std::string fmt4f(double v);
std::string fmt4e(double v);

struct EvalRow {
  std::string model;
  std::string task;
  std::string scenario_id;
  double predicted = 0;
  double mos = 0;
};

// task is a task name, or "All" for the pooled block.
struct EvalSummary {
  std::string model;
  std::string task;
  MetricReport metrics;
};

struct EvalFTest {
  std::string model;  // compared against the task-aware model's residuals
  std::string task;
  FTestResult test;
};

struct EvaluationReport {
  std::vector<EvalRow> rows;
  std::vector<EvalSummary> summaries;
  std::vector<EvalFTest> f_tests;
  std::vector<ParticipantScreen> screening;
};

extern const std::vector<std::string> kAllModels;  // tpifm, baseline1..3

// One model score for one cell. tpifm resolves per-task parameters when the
// task has them and falls back to the JND-generalized form otherwise.
double predict_for(const std::string& model, const std::string& task,
                   const ImpairmentCondition& condition);

// Cross joins rated cells (in conditions-file order) with the requested
// models, computes per-task and pooled agreement metrics, variance-ratio
// tests of every baseline against the task-aware model, and participant
// screening. Cells rated but missing from conditions are an error; per-task
// metric blocks need at least 2 rated cells for that task.
EvaluationReport build_evaluation(const std::vector<RatingRecord>& ratings,
                                  const std::vector<ConditionRow>& conditions,
                                  const std::vector<std::string>& models);

// Four '#'-headed CSV blocks: rows, summary, f_tests, screening.
std::string render_evaluation(const EvaluationReport& report);

}  // namespace pif::cli
