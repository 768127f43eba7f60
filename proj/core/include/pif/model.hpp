#pragma once

#include "pif/params.hpp"
#include "pif/task.hpp"

namespace pif {

// One experimental condition: network delay plus injected stalls over a
// session whose stall-free active time is interaction_ms.
struct ImpairmentCondition {
  double delay_ms = 0;       // >= 0, end-to-end latency
  int stall_count = 0;       // >= 0
  double avg_stall_ms = 0;   // >= 0, mean duration of one stall
  double interaction_ms = 0; // > 0, active time excluding stalls

  bool operator==(const ImpairmentCondition&) const = default;
};

// Throws InputError unless all fields are finite and in range.
void validate_condition(const ImpairmentCondition& c);

// Clamp a raw model output onto the scale.
double clamp_mos(double q);

// Partial score under delay only: clamp(v1 * exp(-v2 * delay_ms), 1, 5).
double q_delay(double delay_ms, const DelayModelParams& p);

// Decay rate for a task seen only through its JND: alpha * exp(-beta * jnd).
double v2_from_jnd(double jnd_s, const GeneralizedParams& g);

// Fraction of session time frozen: n*avg / (n*avg + interaction).
// Always in [0, 1).
double stall_ratio(const ImpairmentCondition& c);

// Partial score under stalls only: clamp(v3 * exp(-v4 * rs), 1, 5).
double q_stall(double rs, const StallModelParams& p);

// Stall sensitivity from the JND: rho * jnd^(-sigma).
double v4_from_jnd(double jnd_s, const GeneralizedParams& g);

// Combine the partial scores: clamp(4*(1 - v5*(5-qd) - v6*(5-qs)) + 1, 1, 5).
// qd and qs must already be on the [1,5] scale.
double q_combined(double qd, double qs, const GeneralizedParams& g);

enum class PredictionMode {
  kPerTask,      // per-task fitted v1..v4 (only tasks present in the set)
  kGeneralized,  // v2/v4 derived from the JND, cross-task intercepts
};

// A full model evaluation, kept apart so callers can report the pieces.
struct Prediction {
  double qd = 0;     // delay partial score, [1,5]
  double qs = 0;     // stall partial score, [1,5]
  double rs = 0;     // stall ratio used for qs
  double score = 0;  // combined score, [1,5]
};

// The task-aware model.
Prediction tpifm_predict(const TaskProfile& task, const ImpairmentCondition& c,
                         PredictionMode mode,
                         const ModelParamSet& params = builtin_params());

// Reference model 1: same structure, one task-blind parameter set.
Prediction baseline1_predict(const ImpairmentCondition& c,
                             const ModelParamSet& params = builtin_params());

// Reference model 2: multiplicative exponential form, delay in seconds.
double baseline2_predict(double delay_s, double sr, const Baseline2Params& p);
double baseline2_predict(const ImpairmentCondition& c,
                         const ModelParamSet& params = builtin_params());

// Reference model 3: linear in delay (ms) and stall ratio.
double baseline3_predict(double delay_ms, double sr, const Baseline3Params& p);
double baseline3_predict(const ImpairmentCondition& c,
                         const ModelParamSet& params = builtin_params());

}  // namespace pif
