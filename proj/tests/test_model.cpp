#include "pif/model.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"

#include "pif/errors.hpp"
#include "pif/params.hpp"
#include "pif/rng.hpp"
#include "pif/task.hpp"

using namespace pif;

namespace {

ImpairmentCondition cond(double delay, int stalls, double avg, double interaction = 9000) {
  ImpairmentCondition c;
  c.delay_ms = delay;
  c.stall_count = stalls;
  c.avg_stall_ms = avg;
  c.interaction_ms = interaction;
  return c;
}

doctest::Approx near(double v, double eps = 1e-9) {
  return doctest::Approx(v).epsilon(eps);
}

}  // namespace

TEST_CASE("built-in task table") {
  CHECK(builtin_tasks().size() == 6);
  CHECK(find_task("SP").jnd_s == 3.34);
  CHECK(find_task("TTT").jnd_s == 1.57);
  CHECK(find_task("MAR").jnd_s == 1.16);
  CHECK(find_task("BR").jnd_s == 0.38);
  CHECK(find_task("LES").jnd_s == 0.71);
  CHECK(find_task("VA").jnd_s == 0.95);
  CHECK(is_builtin_task("BR"));
  CHECK(!is_builtin_task("XX"));
  CHECK_THROWS_AS(find_task("XX"), UnsupportedTaskError);
}

TEST_CASE("built-in parameter constants") {
  const ModelParamSet& p = builtin_params();
  CHECK(p.delay.at("SP").v1 == 4.786);
  CHECK(p.delay.at("SP").v2 == 7.99e-5);
  CHECK(p.delay.at("TTT").v1 == 4.678);
  CHECK(p.delay.at("TTT").v2 == 1.56e-4);
  CHECK(p.delay.at("MAR").v1 == 4.777);
  CHECK(p.delay.at("MAR").v2 == 3.57e-4);
  CHECK(p.delay.at("BR").v1 == 4.764);
  CHECK(p.delay.at("BR").v2 == 4.86e-4);
  CHECK(p.stall.at("SP").v3 == 4.905);
  CHECK(p.stall.at("SP").v4 == 4.282);
  CHECK(p.stall.at("TTT").v3 == 4.965);
  CHECK(p.stall.at("TTT").v4 == 5.301);
  CHECK(p.stall.at("MAR").v3 == 4.911);
  CHECK(p.stall.at("MAR").v4 == 6.611);
  CHECK(p.stall.at("BR").v3 == 4.937);
  CHECK(p.stall.at("BR").v4 == 9.291);
  CHECK(p.generalized.alpha == 6.43e-4);
  CHECK(p.generalized.beta == 0.679);
  CHECK(p.generalized.rho == 6.608);
  CHECK(p.generalized.sigma == 0.361);
  CHECK(p.generalized.v1_bar == 4.751);
  CHECK(p.generalized.v3_bar == 4.929);
  CHECK(p.generalized.v5 == 0.104);
  CHECK(p.generalized.v6 == 0.192);
  CHECK(p.baseline1.v1 == 4.726);
  CHECK(p.baseline1.v2 == 2.0e-4);
  CHECK(p.baseline1.v3 == 4.878);
  CHECK(p.baseline1.v4 == 6.096);
  CHECK(p.baseline2.a == 1.07);
  CHECK(p.baseline2.b_per_s == -0.24);
  CHECK(p.baseline2.s == 0.15);
  CHECK(p.baseline3.l0 == 4.208);
  CHECK(p.baseline3.l1_per_ms == -3.0e-4);
  CHECK(p.baseline3.l2 == -12.39);
}

TEST_CASE("parameter set round-trips through JSON exactly") {
  const ModelParamSet& p = builtin_params();
  const std::string text = serialize_params(p);
  const ModelParamSet q = parse_params(text);
  CHECK(q == p);  // bitwise double equality via defaulted operator==

  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse_params(R"({"bogus": 1})"), ParseError);
    std::string with_extra = text;
    with_extra.insert(with_extra.find('{') + 1, "\"extra\": 3,");
    CHECK_THROWS_AS(parse_params(with_extra), ParseError);
  }
  SUBCASE("malformed JSON is a parse error") {
    CHECK_THROWS_AS(parse_params("{"), ParseError);
    CHECK_THROWS_AS(parse_params(R"({"jnd_s": {"BR": "x"}})"), ParseError);
  }
  SUBCASE("stream round trip") {
    std::stringstream ss;
    save_params(ss, p);
    CHECK(load_params(ss) == p);
  }
}

TEST_CASE("delay partial score") {
  const auto& br = builtin_params().delay.at("BR");
  CHECK(q_delay(3000, br) == near(1.108588574));
  CHECK(q_delay(0, br) == 4.764);
  CHECK(q_delay(10000, br) == 1.0);  // raw 0.0369, clamped
  CHECK(q_delay(0, {5.4, 1e-4}) == 5.0);

  CHECK_THROWS_AS(q_delay(-1, br), InputError);
  CHECK_THROWS_AS(q_delay(std::nan(""), br), InputError);
}

TEST_CASE("delay decay rate from JND") {
  const auto& g = builtin_params().generalized;
  CHECK(v2_from_jnd(0.38, g) == near(4.96768798769e-4));
  CHECK(v2_from_jnd(3.34, g) == near(6.65720436388e-5));
  CHECK(v2_from_jnd(1.57, g) == near(2.21431818344e-4));
  CHECK(v2_from_jnd(1.16, g) == near(2.92511717073e-4));
  CHECK_THROWS_AS(v2_from_jnd(0, g), InputError);
  CHECK_THROWS_AS(v2_from_jnd(-1, g), InputError);
}

TEST_CASE("stall ratio") {
  CHECK(stall_ratio(cond(0, 2, 500)) == 0.1);
  CHECK(stall_ratio(cond(0, 0, 0)) == 0.0);
  CHECK(stall_ratio(cond(0, 1, 9000)) == 0.5);
  CHECK_THROWS_AS(stall_ratio(cond(0, 1, 500, 0)), InputError);
  CHECK_THROWS_AS(stall_ratio(cond(0, -1, 500)), InputError);
  CHECK_THROWS_AS(stall_ratio(cond(0, 1, -5)), InputError);
}

TEST_CASE("stall partial score") {
  const auto& p = builtin_params();
  CHECK(q_stall(0.1, p.stall.at("BR")) == near(1.949665578));
  CHECK(q_stall(0.1, p.stall.at("SP")) == near(3.196495627));
  CHECK(q_stall(0.0, p.stall.at("BR")) == 4.937);
  CHECK(q_stall(0.9, p.stall.at("BR")) == 1.0);  // deep clamp
  CHECK_THROWS_AS(q_stall(-0.1, p.stall.at("BR")), InputError);
  CHECK_THROWS_AS(q_stall(1.5, p.stall.at("BR")), InputError);
}

TEST_CASE("stall sensitivity from JND") {
  const auto& g = builtin_params().generalized;
  CHECK(v4_from_jnd(3.34, g) == near(4.275604838));
  CHECK(v4_from_jnd(0.38, g) == near(9.370616317));
  CHECK(v4_from_jnd(1.57, g) == near(5.615006454));
  CHECK(v4_from_jnd(1.16, g) == near(6.263263746));
  CHECK(v4_from_jnd(1.0, g) == 6.608);  // jnd^(-sigma) = 1
  CHECK_THROWS_AS(v4_from_jnd(0, g), InputError);
}

TEST_CASE("combined score") {
  const auto& g = builtin_params().generalized;
  CHECK(q_combined(4, 3, g) == near(3.048, 1e-12));
  CHECK(q_combined(5, 5, g) == 5.0);
  CHECK(q_combined(1, 1, g) == 1.0);  // raw 0.264, clamped
  CHECK_THROWS_AS(q_combined(0.5, 3, g), InputError);
  CHECK_THROWS_AS(q_combined(3, 5.5, g), InputError);
}

TEST_CASE("task-aware prediction, per-task constants") {
  const Prediction br = tpifm_predict(find_task("BR"), cond(2000, 0, 0), PredictionMode::kPerTask);
  CHECK(br.qd == near(1.8023433));
  CHECK(br.qs == 4.937);
  CHECK(br.rs == 0.0);
  CHECK(br.score == near(3.621390813));

  const Prediction sp = tpifm_predict(find_task("SP"), cond(0, 0, 0), PredictionMode::kPerTask);
  CHECK(sp.score == near(4.838016));

  CHECK_THROWS_AS(tpifm_predict(find_task("LES"), cond(0, 0, 0), PredictionMode::kPerTask),
                  UnsupportedTaskError);
}

TEST_CASE("task-aware prediction, generalized constants") {
  const TaskProfile unit_task{"X1", 1.0};
  const Prediction p =
      tpifm_predict(unit_task, cond(1000, 1, 1000), PredictionMode::kGeneralized);
  CHECK(p.rs == 0.1);
  CHECK(p.qd == near(3.429019905));
  CHECK(p.qs == near(2.545522995));
  CHECK(p.score == near(2.46143394));

  // Known tasks work in generalized mode too, through their JND.
  const Prediction les =
      tpifm_predict(find_task("LES"), cond(500, 0, 0), PredictionMode::kGeneralized);
  CHECK(les.score > 1.0);
  CHECK(les.score < 5.0);
}

TEST_CASE("reference model 1 (task-blind)") {
  const Prediction ideal = baseline1_predict(cond(0, 0, 0));
  CHECK(ideal.score == near(4.79232, 1e-12));

  const Prediction delayed = baseline1_predict(cond(3000, 0, 0));
  CHECK(delayed.qd == near(2.593683792));
  CHECK(delayed.score == near(3.905276458));

  const Prediction stalled = baseline1_predict(cond(0, 1, 9000));
  CHECK(stalled.rs == 0.5);
  CHECK(stalled.qs == 1.0);  // raw 0.2315, clamped up
  CHECK(stalled.score == near(1.814016, 1e-12));
}

TEST_CASE("reference model 2 (multiplicative exponential)") {
  const auto& b2 = builtin_params().baseline2;
  CHECK(baseline2_predict(0.0, 0.0, b2) == 5.0);  // raw 5.28, clamped
  CHECK(baseline2_predict(3.0, 0.0, b2) == near(3.083299656));
  CHECK(baseline2_predict(0.0, 0.15, b2) == near(2.574524008));
  // Condition overload converts ms to seconds.
  CHECK(baseline2_predict(cond(3000, 0, 0)) == near(3.083299656));
  CHECK_THROWS_AS(baseline2_predict(-1.0, 0.0, b2), InputError);
}

TEST_CASE("reference model 3 (linear)") {
  const auto& b3 = builtin_params().baseline3;
  CHECK(baseline3_predict(0.0, 0.0, b3) == 4.208);
  CHECK(baseline3_predict(1000.0, 0.1, b3) == near(2.669, 1e-12));
  CHECK(baseline3_predict(20000.0, 0.5, b3) == 1.0);  // raw -7.987, clamped
  CHECK(baseline3_predict(cond(1000, 2, 500)) == near(2.669, 1e-12));
  CHECK_THROWS_AS(baseline3_predict(0.0, 2.0, b3), InputError);
}

TEST_CASE("condition validation") {
  CHECK_NOTHROW(validate_condition(cond(0, 0, 0)));
  CHECK_THROWS_AS(validate_condition(cond(-1, 0, 0)), InputError);
  CHECK_THROWS_AS(validate_condition(cond(0, 2, 0)), InputError);  // stalls need a duration
  ImpairmentCondition bad = cond(0, 0, 0);
  bad.interaction_ms = -3;
  CHECK_THROWS_AS(validate_condition(bad), InputError);
  bad.interaction_ms = std::nan("");
  CHECK_THROWS_AS(validate_condition(bad), InputError);
}

TEST_CASE("score clamping and monotonicity over random conditions") {
  Rng rng(20240817);
  const auto& tasks = builtin_tasks();
  for (int i = 0; i < 2000; ++i) {
    const TaskProfile& task = tasks[rng.below(tasks.size())];
    const double delay = rng.uniform(0, 5000);
    const int stalls = static_cast<int>(rng.below(4));
    const double avg = stalls > 0 ? rng.uniform(1, 3000) : 0.0;
    const double interaction = rng.uniform(1000, 20000);
    ImpairmentCondition c = cond(delay, stalls, avg, interaction);

    const Prediction p = tpifm_predict(task, c, PredictionMode::kGeneralized);
    CHECK(p.score >= 1.0);
    CHECK(p.score <= 5.0);
    CHECK(p.qd >= 1.0);
    CHECK(p.qd <= 5.0);
    CHECK(p.qs >= 1.0);
    CHECK(p.qs <= 5.0);
    CHECK(p.rs >= 0.0);
    CHECK(p.rs < 1.0);

    // More delay can never help.
    ImpairmentCondition worse = c;
    worse.delay_ms += rng.uniform(0, 2000);
    CHECK(tpifm_predict(task, worse, PredictionMode::kGeneralized).score <= p.score);

    // Nor can more stalling.
    worse = c;
    worse.stall_count += 1;
    worse.avg_stall_ms = std::max(worse.avg_stall_ms, 1.0);
    CHECK(tpifm_predict(task, worse, PredictionMode::kGeneralized).score <= p.score);

    // A slower-paced task tolerates the same impairment at least as well.
    TaskProfile slower = task;
    slower.jnd_s = task.jnd_s + rng.uniform(0, 2);
    CHECK(tpifm_predict(slower, c, PredictionMode::kGeneralized).score + 1e-12 >= p.score);
  }
}
