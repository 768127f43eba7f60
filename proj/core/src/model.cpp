#include "pif/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pif/errors.hpp"

namespace pif {
namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw InputError(std::string(what) + " must be finite");
}

void require_score(double q, const char* what) {
  require_finite(q, what);
  if (q < 1.0 || q > 5.0)
    throw InputError(std::string(what) + " must be in [1,5], got " + std::to_string(q));
}

}  // namespace

void validate_condition(const ImpairmentCondition& c) {
  require_finite(c.delay_ms, "delay_ms");
  require_finite(c.avg_stall_ms, "avg_stall_ms");
  require_finite(c.interaction_ms, "interaction_ms");
  if (c.delay_ms < 0) throw InputError("delay_ms must be >= 0");
  if (c.stall_count < 0) throw InputError("stall_count must be >= 0");
  if (c.avg_stall_ms < 0) throw InputError("avg_stall_ms must be >= 0");
  if (c.stall_count > 0 && c.avg_stall_ms <= 0)
    throw InputError("avg_stall_ms must be > 0 when stalls are present");
  if (c.interaction_ms <= 0) throw InputError("interaction_ms must be > 0");
}

double clamp_mos(double q) { return std::clamp(q, 1.0, 5.0); }

double q_delay(double delay_ms, const DelayModelParams& p) {
  require_finite(delay_ms, "delay_ms");
  if (delay_ms < 0) throw InputError("delay_ms must be >= 0");
  return clamp_mos(p.v1 * std::exp(-p.v2 * delay_ms));
}

double v2_from_jnd(double jnd_s, const GeneralizedParams& g) {
  require_finite(jnd_s, "jnd_s");
  if (jnd_s <= 0) throw InputError("jnd_s must be > 0");
  return g.alpha * std::exp(-g.beta * jnd_s);
}

double stall_ratio(const ImpairmentCondition& c) {
  validate_condition(c);
  const double t_s = c.stall_count * c.avg_stall_ms;
  return t_s / (t_s + c.interaction_ms);
}

double q_stall(double rs, const StallModelParams& p) {
  require_finite(rs, "stall ratio");
  if (rs < 0 || rs > 1) throw InputError("stall ratio must be in [0,1]");
  return clamp_mos(p.v3 * std::exp(-p.v4 * rs));
}

double v4_from_jnd(double jnd_s, const GeneralizedParams& g) {
  require_finite(jnd_s, "jnd_s");
  if (jnd_s <= 0) throw InputError("jnd_s must be > 0");
  return g.rho * std::pow(jnd_s, -g.sigma);
}

double q_combined(double qd, double qs, const GeneralizedParams& g) {
  require_score(qd, "qd");
  require_score(qs, "qs");
  return clamp_mos(4.0 * (1.0 - g.v5 * (5.0 - qd) - g.v6 * (5.0 - qs)) + 1.0);
}

Prediction tpifm_predict(const TaskProfile& task, const ImpairmentCondition& c,
                         PredictionMode mode, const ModelParamSet& params) {
  validate_condition(c);
  Prediction out;
  out.rs = stall_ratio(c);
  if (mode == PredictionMode::kPerTask) {
    auto d = params.delay.find(task.name);
    auto s = params.stall.find(task.name);
    if (d == params.delay.end() || s == params.stall.end())
      throw UnsupportedTaskError("no per-task constants for '" + task.name + "'");
    out.qd = q_delay(c.delay_ms, d->second);
    out.qs = q_stall(out.rs, s->second);
  } else {
    const GeneralizedParams& g = params.generalized;
    out.qd = q_delay(c.delay_ms, {g.v1_bar, v2_from_jnd(task.jnd_s, g)});
    out.qs = q_stall(out.rs, {g.v3_bar, v4_from_jnd(task.jnd_s, g)});
  }
  out.score = q_combined(out.qd, out.qs, params.generalized);
  return out;
}

Prediction baseline1_predict(const ImpairmentCondition& c, const ModelParamSet& params) {
  validate_condition(c);
  const Baseline1Params& b = params.baseline1;
  Prediction out;
  out.rs = stall_ratio(c);
  out.qd = q_delay(c.delay_ms, {b.v1, b.v2});
  out.qs = q_stall(out.rs, {b.v3, b.v4});
  out.score = q_combined(out.qd, out.qs, params.generalized);
  return out;
}

double baseline2_predict(double delay_s, double sr, const Baseline2Params& p) {
  require_finite(delay_s, "delay_s");
  require_finite(sr, "stall ratio");
  if (delay_s < 0) throw InputError("delay_s must be >= 0");
  if (sr < 0 || sr > 1) throw InputError("stall ratio must be in [0,1]");
  return clamp_mos(4.0 * p.a * std::exp(p.b_per_s * delay_s) * std::exp(-sr / p.s) + 1.0);
}

double baseline2_predict(const ImpairmentCondition& c, const ModelParamSet& params) {
  return baseline2_predict(c.delay_ms / 1000.0, stall_ratio(c), params.baseline2);
}

double baseline3_predict(double delay_ms, double sr, const Baseline3Params& p) {
  require_finite(delay_ms, "delay_ms");
  require_finite(sr, "stall ratio");
  if (delay_ms < 0) throw InputError("delay_ms must be >= 0");
  if (sr < 0 || sr > 1) throw InputError("stall ratio must be in [0,1]");
  return clamp_mos(p.l0 + p.l1_per_ms * delay_ms + p.l2 * sr);
}

double baseline3_predict(const ImpairmentCondition& c, const ModelParamSet& params) {
  return baseline3_predict(c.delay_ms, stall_ratio(c), params.baseline3);
}

}  // namespace pif
