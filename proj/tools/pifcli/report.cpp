#include "pifcli/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "pif/errors.hpp"
#include "pif/task.hpp"

namespace pif::cli {

const std::vector<std::string> kAllModels = {"tpifm", "baseline1", "baseline2", "baseline3"};

std::string fmt4f(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string fmt4e(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

double predict_for(const std::string& model, const std::string& task,
                   const ImpairmentCondition& condition) {
  if (model == "tpifm") {
    const ModelParamSet& p = builtin_params();
    const PredictionMode mode = p.delay.count(task) && p.stall.count(task)
                                    ? PredictionMode::kPerTask
                                    : PredictionMode::kGeneralized;
    return tpifm_predict(find_task(task), condition, mode).score;
  }
  if (model == "baseline1") return baseline1_predict(condition).score;
  if (model == "baseline2") return baseline2_predict(condition);
  if (model == "baseline3") return baseline3_predict(condition);
  throw InputError("unknown model '" + model + "'");
}

EvaluationReport build_evaluation(const std::vector<RatingRecord>& ratings,
                                  const std::vector<ConditionRow>& conditions,
                                  const std::vector<std::string>& models) {
  if (models.empty()) throw InputError("at least one model required");
  std::set<std::string> seen;
  for (const auto& m : models) {
    if (std::find(kAllModels.begin(), kAllModels.end(), m) == kAllModels.end())
      throw InputError("unknown model '" + m + "'");
    if (!seen.insert(m).second) throw InputError("model '" + m + "' listed twice");
  }

  const auto mos_table = mos(ratings);

  std::map<CellId, const ConditionRow*> by_cell;
  for (const auto& c : conditions) by_cell[{c.task, c.scenario_id}] = &c;
  std::string missing;
  for (const auto& [cell, value] : mos_table) {
    if (by_cell.count(cell)) continue;
    if (!missing.empty()) missing += ", ";
    missing += "(" + cell.first + ", " + cell.second + ")";
  }
  if (!missing.empty())
    throw ValidationError("rated cells without a condition row: " + missing);

  // Rated cells in conditions-file order.
  struct Cell {
    const ConditionRow* cond;
    double mos_value;
  };
  std::vector<Cell> cells;
  for (const auto& c : conditions) {
    auto it = mos_table.find({c.task, c.scenario_id});
    if (it != mos_table.end()) cells.push_back({&c, it->second});
  }

  EvaluationReport report;
  for (const auto& m : models)
    for (const auto& cell : cells)
      report.rows.push_back({m, cell.cond->task, cell.cond->scenario_id,
                             predict_for(m, cell.cond->task, cell.cond->condition),
                             cell.mos_value});

  // Tasks in first-appearance order.
  std::vector<std::string> tasks;
  for (const auto& cell : cells)
    if (std::find(tasks.begin(), tasks.end(), cell.cond->task) == tasks.end())
      tasks.push_back(cell.cond->task);

  struct Series {
    std::vector<double> pred, obs, resid;
  };
  auto collect = [&](const std::string& model, const std::string& task) {
    Series s;
    for (const auto& r : report.rows) {
      if (r.model != model) continue;
      if (task != "All" && r.task != task) continue;
      s.pred.push_back(r.predicted);
      s.obs.push_back(r.mos);
      s.resid.push_back(r.predicted - r.mos);
    }
    return s;
  };

  for (const auto& m : models) {
    for (const auto& t : tasks) {
      const Series s = collect(m, t);
      if (s.pred.size() < 2) continue;  // not enough cells for agreement metrics
      report.summaries.push_back({m, t, metric_report(s.pred, s.obs)});
    }
    report.summaries.push_back({m, "All", metric_report(collect(m, "All").pred,
                                                        collect(m, "All").obs)});
  }

  const bool have_reference =
      std::find(models.begin(), models.end(), "tpifm") != models.end();
  if (have_reference) {
    std::vector<std::string> scopes = tasks;
    scopes.push_back("All");
    for (const auto& m : models) {
      if (m == "tpifm") continue;
      for (const auto& scope : scopes) {
        const Series ours = collect("tpifm", scope);
        const Series theirs = collect(m, scope);
        if (ours.resid.size() < 2) continue;
        try {
          report.f_tests.push_back({m, scope, f_test_residuals(theirs.resid, ours.resid)});
        } catch (const InsufficientDataError&) {
          // both residual sets degenerate; nothing to report
        }
      }
    }
  }

  report.screening = screen_participants(ratings, mos_table);
  return report;
}

std::string render_evaluation(const EvaluationReport& report) {
  std::string out;
  out += "# rows\nmodel,task,scenario_id,predicted,mos\n";
  for (const auto& r : report.rows)
    out += r.model + "," + r.task + "," + r.scenario_id + "," + fmt4f(r.predicted) + "," +
           fmt4f(r.mos) + "\n";

  out += "\n# summary\nmodel,task,n,pcc,srocc,rmse\n";
  for (const auto& s : report.summaries)
    out += s.model + "," + s.task + "," + std::to_string(s.metrics.n) + "," +
           fmt4f(s.metrics.pcc) + "," + fmt4f(s.metrics.srocc) + "," + fmt4f(s.metrics.rmse) +
           "\n";

  out += "\n# f_tests\nmodel,task,f_statistic,df1,df2,p_value\n";
  for (const auto& f : report.f_tests)
    out += f.model + "," + f.task + "," + fmt4f(f.test.f_statistic) + "," +
           std::to_string(f.test.df1) + "," + std::to_string(f.test.df2) + "," +
           fmt4e(f.test.p_value) + "\n";

  out += "\n# screening\nparticipant_id,n_cells,pcc,keep,insufficient\n";
  for (const auto& s : report.screening)
    out += s.participant_id + "," + std::to_string(s.n_cells) + "," +
           (s.pcc ? fmt4f(*s.pcc) : std::string()) + "," + (s.keep ? "1" : "0") + "," +
           (s.insufficient ? "1" : "0") + "\n";
  return out;
}

}  // namespace pif::cli
