// pifeval: predict scores, simulate sessions, analyze traces, fit curves,
// evaluate model variants against ratings, dump plottable curve samples.
//
// Exit codes: 0 ok, 1 usage, 2 bad data, 3 fit did not converge.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pif/csv.hpp"
#include "pif/errors.hpp"
#include "pif/fit.hpp"
#include "pif/model.hpp"
#include "pif/sim.hpp"
#include "pif/stats.hpp"
#include "pif/task.hpp"
#include "pif/trace.hpp"
#include "pif/trace_analysis.hpp"
#include "pifcli/report.hpp"

using namespace pif;
using cli::fmt4e;
using cli::fmt4f;

namespace {

std::string fmt3f(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  return out;
}

struct PredictOpts {
  std::string model = "tpifm";
  std::string task;
  double jnd_s = 0;
  double delay_ms = 0;
  int stall_count = 0;
  double stall_avg_ms = 0;
  double interaction_ms = 9000;
  std::string mode = "per-task";
  bool task_given = false, jnd_given = false, mode_given = false;
};

int run_predict(const PredictOpts& o) {
  const ImpairmentCondition c{o.delay_ms, o.stall_count, o.stall_avg_ms, o.interaction_ms};
  std::string line = "{\"model\":\"" + o.model + "\"";
  if (o.model == "tpifm") {
    if (o.task_given == o.jnd_given)
      throw InputError("tpifm needs exactly one of --task and --jnd");
    Prediction p;
    if (o.jnd_given) {
      if (o.mode_given && o.mode == "per-task")
        throw InputError("--jnd has no per-task constants; use --mode generalized");
      if (!(o.jnd_s > 0)) throw InputError("--jnd must be > 0");
      p = tpifm_predict(TaskProfile{"custom", o.jnd_s}, c, PredictionMode::kGeneralized);
      line += ",\"jnd_s\":" + fmt4f(o.jnd_s) + ",\"mode\":\"generalized\"";
    } else {
      const PredictionMode m =
          o.mode == "per-task" ? PredictionMode::kPerTask : PredictionMode::kGeneralized;
      p = tpifm_predict(find_task(o.task), c, m);
      line += ",\"task\":\"" + o.task + "\",\"mode\":\"" + o.mode + "\"";
    }
    line += ",\"qd\":" + fmt4f(p.qd) + ",\"qs\":" + fmt4f(p.qs) + ",\"rs\":" + fmt4f(p.rs) +
            ",\"score\":" + fmt4f(p.score);
  } else if (o.model == "baseline1") {
    const Prediction p = baseline1_predict(c);
    line += ",\"qd\":" + fmt4f(p.qd) + ",\"qs\":" + fmt4f(p.qs) + ",\"rs\":" + fmt4f(p.rs) +
            ",\"score\":" + fmt4f(p.score);
  } else {
    // the remaining reference models have no delay/stall decomposition
    const double score =
        o.model == "baseline2" ? baseline2_predict(c) : baseline3_predict(c);
    line += ",\"qd\":null,\"qs\":null,\"rs\":" + fmt4f(stall_ratio(c)) +
            ",\"score\":" + fmt4f(score);
  }
  std::cout << line << "}\n";
  return 0;
}

struct SimulateOpts {
  std::string config_path, table, task, out_path;
  int index = 0;
  std::uint64_t seed = 0;
  bool config_given = false, table_given = false, index_given = false;
  bool task_given = false, seed_given = false, out_given = false;
};

int run_simulate(const SimulateOpts& o) {
  if (o.config_given == o.table_given)
    throw InputError("pass exactly one of --config and --table");
  ScenarioConfig cfg;
  if (o.config_given) {
    if (o.index_given) throw InputError("--index only applies to --table");
    auto in = open_input(o.config_path);
    cfg = load_scenario_config(in);
  } else {
    if (!o.index_given) throw InputError("--table needs --index");
    const ScenarioTable table = o.table == "II"    ? ScenarioTable::kII
                                : o.table == "III" ? ScenarioTable::kIII
                                : o.table == "IV"  ? ScenarioTable::kIV
                                                   : ScenarioTable::kDelayLevels;
    const auto rows = builtin_scenarios(table);
    if (o.index < 1 || o.index > static_cast<int>(rows.size()))
      throw InputError("--index out of range 1.." + std::to_string(rows.size()));
    cfg = rows[o.index - 1];
  }
  if (o.task_given) cfg.task = task_preset(o.task);
  if (o.seed_given) cfg.seed = o.seed;

  const SessionTrace trace = simulate_session(cfg);
  if (o.out_given) open_output(o.out_path) << serialize_trace(trace);

  const ArtEstimate art = estimate_art(extract_cycles(trace));
  const StallMeasurement sm = measure_stall_ratio(trace);
  std::cout << "{\"scenario_id\":\"" << cfg.scenario_id << "\",\"task\":\"" << cfg.task.name
            << "\",\"seed\":" << cfg.seed << ",\"events\":" << trace.events.size()
            << ",\"n_cycles\":" << art.n_cycles << ",\"art_s\":" << fmt4f(art.mean_s)
            << ",\"art_sd_s\":" << fmt4f(art.sd_s) << ",\"t_s_ms\":" << sm.t_s_ms
            << ",\"t_m_ms\":" << sm.t_m_ms << ",\"rs\":" << fmt4f(sm.rs) << "}\n";
  return 0;
}

struct AnalyzeOpts {
  std::string trace_path;
  bool jnd_mode = false;
};

int run_analyze(const AnalyzeOpts& o) {
  auto in = open_input(o.trace_path);
  const SessionTrace trace = parse_trace(in);
  const auto cycles = extract_cycles(trace);
  const ArtEstimate art = estimate_art(cycles);
  const StallMeasurement sm = measure_stall_ratio(trace);

  std::map<std::string, std::vector<double>> responses;
  for (const auto& c : cycles) responses[c.actor].push_back(c.response_ms() / 1000.0);
  std::string actors;
  for (const auto& [actor, r] : responses) {
    if (!actors.empty()) actors += ",";
    actors += "\"" + actor + "\":{\"n\":" + std::to_string(r.size()) +
              ",\"mean_s\":" + fmt4f(mean(r)) + ",\"sd_s\":" + fmt4f(sample_sd(r)) + "}";
  }

  std::string line = "{\"task\":\"" + trace.metadata.task + "\",\"scenario\":\"" +
                     trace.metadata.scenario + "\",\"n_cycles\":" + std::to_string(art.n_cycles) +
                     ",\"art_s\":" + fmt4f(art.mean_s) + ",\"art_sd_s\":" + fmt4f(art.sd_s) +
                     ",\"t_s_ms\":" + std::to_string(sm.t_s_ms) +
                     ",\"t_m_ms\":" + std::to_string(sm.t_m_ms) + ",\"rs\":" + fmt4f(sm.rs) +
                     ",\"actors\":{" + actors + "}";
  if (o.jnd_mode) line += ",\"jnd_s\":" + fmt4f(estimate_jnd({trace}));
  std::cout << line << "}\n";
  return 0;
}

struct FitOpts {
  std::string form, data_path, out_path;
  bool out_given = false;
};

int run_fit(const FitOpts& o) {
  auto in = open_input(o.data_path);
  FitResult fit;
  if (o.form == "weights") {
    fit = fit_combined_weights(read_weights_csv(in));
  } else {
    const Dataset data = read_xy_csv(in);
    fit = o.form == "exp" ? fit_exp_decay(data) : fit_power_law(data);
  }

  std::string params;
  for (std::size_t i = 0; i < fit.params.size(); ++i)
    params += (i ? "," : "") + fmt4e(fit.params[i]);
  std::cout << "{\"form\":\"" << o.form << "\",\"params\":[" << params
            << "],\"sse\":" << fmt4e(fit.sse) << ",\"rmse\":" << fmt4e(fit.rmse)
            << ",\"r_square\":" << fmt4f(fit.r_square) << ",\"iterations\":" << fit.iterations
            << ",\"converged\":" << (fit.converged ? "true" : "false") << "}\n";

  if (o.out_given) {
    // full precision for downstream reuse, unlike the rounded stdout record
    nlohmann::json j;
    j["form"] = o.form;
    j["params"] = fit.params;
    j["sse"] = fit.sse;
    j["rmse"] = fit.rmse;
    j["r_square"] = fit.r_square;
    j["iterations"] = fit.iterations;
    j["converged"] = fit.converged;
    open_output(o.out_path) << j.dump(2) << "\n";
  }
  if (!fit.converged)
    throw ConvergenceError("no convergence after " + std::to_string(fit.iterations) +
                           " iterations");
  return 0;
}

struct EvaluateOpts {
  std::string ratings_path, conditions_path, out_path;
  std::vector<std::string> models;
  bool out_given = false;
};

int run_evaluate(const EvaluateOpts& o) {
  auto rin = open_input(o.ratings_path);
  const auto ratings = read_ratings_csv(rin);
  auto cin = open_input(o.conditions_path);
  const auto conditions = read_conditions_csv(cin);
  const auto& models = o.models.empty() ? cli::kAllModels : o.models;
  const std::string text = cli::render_evaluation(cli::build_evaluation(ratings, conditions, models));
  std::cout << text;
  if (o.out_given) open_output(o.out_path) << text;
  return 0;
}

struct CurvesOpts {
  int figure = 0;
  std::string task = "all";
  std::string out_path;
  bool out_given = false;
};

int run_curves(const CurvesOpts& o) {
  if (o.figure != 5 && o.figure != 6) throw InputError("--figure must be 5 or 6");
  const ModelParamSet& p = builtin_params();
  std::vector<std::string> tasks;
  if (o.task == "all") {
    tasks = {"SP", "TTT", "MAR", "BR"};
  } else if (p.delay.count(o.task)) {
    tasks = {o.task};
  } else {
    throw UnsupportedTaskError("no fitted curve for task '" + o.task + "'");
  }

  std::string text;
  if (o.figure == 5) {
    text = "task,delay_ms,score\n";
    for (const auto& t : tasks) {
      const DelayModelParams& dp = p.delay.at(t);
      for (int ms = 0; ms <= 3000; ms += 10)
        text += t + "," + std::to_string(ms) + "," + fmt4f(q_delay(ms, dp)) + "\n";
    }
  } else {
    text = "task,rs,score\n";
    for (const auto& t : tasks) {
      const StallModelParams& sp = p.stall.at(t);
      for (int i = 0; i <= 120; ++i) {
        const double rs = i * 0.005;
        text += t + "," + fmt3f(rs) + "," + fmt4f(q_stall(rs, sp)) + "\n";
      }
    }
  }
  std::cout << text;
  if (o.out_given) open_output(o.out_path) << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"task-aware interaction fluency toolkit"};
  app.require_subcommand(1);

  PredictOpts po;
  auto* predict = app.add_subcommand("predict", "score one impairment condition");
  predict->add_option("--model", po.model, "tpifm|baseline1|baseline2|baseline3")
      ->check(CLI::IsMember({"tpifm", "baseline1", "baseline2", "baseline3"}));
  predict->add_option("--task", po.task, "built-in task name");
  predict->add_option("--jnd", po.jnd_s, "tolerable response time, seconds");
  predict->add_option("--delay-ms", po.delay_ms, "end-to-end delay");
  predict->add_option("--stall-count", po.stall_count, "number of stalls");
  predict->add_option("--stall-avg-ms", po.stall_avg_ms, "mean stall duration");
  predict->add_option("--interaction-ms", po.interaction_ms, "active time excluding stalls");
  predict->add_option("--mode", po.mode, "per-task|generalized")
      ->check(CLI::IsMember({"per-task", "generalized"}));

  SimulateOpts so;
  auto* simulate = app.add_subcommand("simulate", "run a two-agent session");
  simulate->add_option("--config", so.config_path, "scenario config file");
  simulate->add_option("--table", so.table, "built-in condition table")
      ->check(CLI::IsMember({"II", "III", "IV", "delay"}));
  simulate->add_option("--index", so.index, "1-based row in the table");
  simulate->add_option("--task", so.task, "override the task preset");
  simulate->add_option("--seed", so.seed, "override the seed");
  simulate->add_option("--out", so.out_path, "write the trace here");

  AnalyzeOpts ao;
  auto* analyze = app.add_subcommand("analyze", "measure a session trace");
  analyze->add_option("--trace", ao.trace_path, "trace file")->required();
  analyze->add_flag("--jnd-mode", ao.jnd_mode, "require ideal conditions, report the mean response");

  FitOpts fo;
  auto* fit = app.add_subcommand("fit", "fit a curve to samples");
  fit->add_option("--form", fo.form, "exp|power|weights")
      ->required()
      ->check(CLI::IsMember({"exp", "power", "weights"}));
  fit->add_option("--data", fo.data_path, "input csv")->required();
  fit->add_option("--out", fo.out_path, "write a full-precision record here");

  EvaluateOpts eo;
  auto* evaluate = app.add_subcommand("evaluate", "score models against a rating cohort");
  evaluate->add_option("--ratings", eo.ratings_path, "ratings csv")->required();
  evaluate->add_option("--conditions", eo.conditions_path, "conditions csv")->required();
  evaluate->add_option("--models", eo.models, "comma-separated model list")->delimiter(',');
  evaluate->add_option("--out", eo.out_path, "also write the report here");

  CurvesOpts co;
  auto* curves = app.add_subcommand("curves", "sample the fitted partial-score curves");
  curves->add_option("--figure", co.figure, "5 = score vs delay, 6 = score vs stall ratio")
      ->required();
  curves->add_option("--task", co.task, "fitted task name or 'all'");
  curves->add_option("--out", co.out_path, "also write the csv here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(predict)) {
      po.task_given = predict->count("--task") > 0;
      po.jnd_given = predict->count("--jnd") > 0;
      po.mode_given = predict->count("--mode") > 0;
      return run_predict(po);
    }
    if (app.got_subcommand(simulate)) {
      so.config_given = simulate->count("--config") > 0;
      so.table_given = simulate->count("--table") > 0;
      so.index_given = simulate->count("--index") > 0;
      so.task_given = simulate->count("--task") > 0;
      so.seed_given = simulate->count("--seed") > 0;
      so.out_given = simulate->count("--out") > 0;
      return run_simulate(so);
    }
    if (app.got_subcommand(analyze)) return run_analyze(ao);
    if (app.got_subcommand(fit)) {
      fo.out_given = fit->count("--out") > 0;
      return run_fit(fo);
    }
    if (app.got_subcommand(evaluate)) {
      eo.out_given = evaluate->count("--out") > 0;
      return run_evaluate(eo);
    }
    if (app.got_subcommand(curves)) {
      co.out_given = curves->count("--out") > 0;
      return run_curves(co);
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const UnsupportedTaskError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    // parse, validation, insufficient-data, underdetermined
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
