#pragma once

#include <utility>
#include <vector>

namespace pif {

// (x, y) samples with optional positive per-point weights (empty = all 1).
struct Dataset {
  std::vector<std::pair<double, double>> points;
  std::vector<double> weights;
};

struct FitResult {
  std::vector<double> params;
  double sse = 0;       // weighted sum of squared residuals, linear space
  double r_square = 0;  // 1 - sse / total sum of squares
  double rmse = 0;      // sqrt(sse / n)
  int iterations = 0;
  bool converged = false;
};

// One (qd, qs, observed mos) sample for the weight fit.
struct WeightsRecord {
  double qd = 0, qs = 0, mos = 0;  // all on the [1,5] scale
};

// y = A * exp(-k * x). Log-space linear regression seeds the iteration;
// non-positive y falls back to a coarse grid seed. Refined by damped
// Gauss-Newton (Levenberg damping, x10 on reject / /10 on accept) until
// ||J^T W r|| < 1e-10 or 200 iterations. On a singular system the best
// iterate is returned with converged = false.
FitResult fit_exp_decay(const Dataset& data);

// Same machinery, named for its use: maps task JND to the delay decay rate.
FitResult fit_jnd_exp_map(const Dataset& data);

// y = rho * x^(-sigma). Requires x > 0 and y > 0 (log-log seed).
FitResult fit_power_law(const Dataset& data);

// Solve mos = 4*(1 - v5*(5-qd) - v6*(5-qs)) + 1 by linear least squares.
// Records whose unclamped prediction leaves [1,5] are dropped and the system
// re-solved once; if that refit is underdetermined the first solution stands.
// params = {v5, v6}; sse/rmse are over the records used in the final solve,
// with unclamped residuals. Throws UnderdeterminedError when the initial
// system is collinear or has fewer than 2 records.
FitResult fit_combined_weights(const std::vector<WeightsRecord>& records);

}  // namespace pif
