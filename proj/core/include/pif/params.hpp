#pragma once

#include <iosfwd>
#include <map>
#include <string>

namespace pif {

// Q_d = clamp(v1 * exp(-v2 * T), 1, 5), T in ms.
struct DelayModelParams {
  double v1 = 0;  // > 0, intercept on the MOS scale
  double v2 = 0;  // >= 0, decay per ms
  bool operator==(const DelayModelParams&) const = default;
};

// Q_s = clamp(v3 * exp(-v4 * Rs), 1, 5), Rs in [0, 1).
struct StallModelParams {
  double v3 = 0;  // > 0
  double v4 = 0;  // >= 0, decay per unit stall ratio
  bool operator==(const StallModelParams&) const = default;
};

// Task-generalized form: decay rates derived from the task JND, plus the
// cross-task intercepts and the weights combining the two partial scores.
struct GeneralizedParams {
  double alpha = 0;   // v2 = alpha * exp(-beta * jnd_s)
  double beta = 0;
  double rho = 0;     // v4 = rho * jnd_s^(-sigma)
  double sigma = 0;
  double v1_bar = 0;  // cross-task mean intercepts
  double v3_bar = 0;
  double v5 = 0;      // combination weights
  double v6 = 0;
  bool operator==(const GeneralizedParams&) const = default;
};

// Reference model fitted once across all tasks (no task awareness).
struct Baseline1Params {
  double v1 = 0, v2 = 0, v3 = 0, v4 = 0;
  bool operator==(const Baseline1Params&) const = default;
};

// Q = clamp(4 * a * exp(b * T_s) * exp(-SR / s) + 1, 1, 5), T in seconds.
struct Baseline2Params {
  double a = 0, b_per_s = 0, s = 0;
  bool operator==(const Baseline2Params&) const = default;
};

// Q = clamp(l0 + l1 * T_ms + l2 * SR, 1, 5).
struct Baseline3Params {
  double l0 = 0, l1_per_ms = 0, l2 = 0;
  bool operator==(const Baseline3Params&) const = default;
};

// Everything needed to evaluate the model family: per-task fitted constants
// for the four tasks used in fitting, the generalized constants, and the
// three reference models.
struct ModelParamSet {
  std::map<std::string, double> jnd_s;               // task -> JND (s)
  std::map<std::string, DelayModelParams> delay;     // per-task delay curves
  std::map<std::string, StallModelParams> stall;     // per-task stall curves
  GeneralizedParams generalized;
  Baseline1Params baseline1;
  Baseline2Params baseline2;
  Baseline3Params baseline3;
  bool operator==(const ModelParamSet&) const = default;
};

// The published constants.
const ModelParamSet& builtin_params();

// JSON round trip. Serialization preserves full double precision, so
// parse(serialize(p)) == p exactly. Parsing rejects unknown keys and
// non-finite values.
std::string serialize_params(const ModelParamSet& p);
ModelParamSet parse_params(const std::string& json_text);
ModelParamSet load_params(std::istream& in);   // throws ParseError
void save_params(std::ostream& out, const ModelParamSet& p);

}  // namespace pif
