#include "pif/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "pif/errors.hpp"

namespace pif {
namespace {

constexpr int kMaxIterations = 200;
constexpr double kGradTol = 1e-10;
constexpr double kLambda0 = 1e-3;
constexpr double kLambdaMax = 1e12;

struct CurveModel {
  double (*f)(double x, const double p[2]);
  void (*grad)(double x, const double p[2], double g[2]);
};

double exp_f(double x, const double p[2]) { return p[0] * std::exp(-p[1] * x); }
void exp_grad(double x, const double p[2], double g[2]) {
  const double e = std::exp(-p[1] * x);
  g[0] = e;
  g[1] = -p[0] * x * e;
}

double pow_f(double x, const double p[2]) { return p[0] * std::pow(x, -p[1]); }
void pow_grad(double x, const double p[2], double g[2]) {
  const double xe = std::pow(x, -p[1]);
  g[0] = xe;
  g[1] = -p[0] * std::log(x) * xe;
}

void check_dataset(const Dataset& d) {
  if (d.points.size() < 2)
    throw InsufficientDataError("two-parameter fit needs at least 2 points");
  if (!d.weights.empty() && d.weights.size() != d.points.size())
    throw InputError("weights length must match points length");
  for (const auto& [x, y] : d.points)
    if (!std::isfinite(x) || !std::isfinite(y)) throw InputError("non-finite data point");
  for (double w : d.weights)
    if (!(w > 0) || !std::isfinite(w)) throw InputError("weights must be positive and finite");
  const double x0 = d.points.front().first;
  bool varies = false;
  for (const auto& [x, y] : d.points)
    if (x != x0) varies = true;
  if (!varies) throw InsufficientDataError("x values are all equal");
}

double weight_at(const Dataset& d, size_t i) {
  return d.weights.empty() ? 1.0 : d.weights[i];
}

double weighted_sse(const Dataset& d, const CurveModel& m, const double p[2]) {
  double s = 0;
  for (size_t i = 0; i < d.points.size(); ++i) {
    const double r = d.points[i].second - m.f(d.points[i].first, p);
    s += weight_at(d, i) * r * r;
  }
  return s;
}

// Unweighted OLS of y on x; returns (intercept, slope).
std::pair<double, double> ols(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double n = static_cast<double>(pts.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  const double slope = sxy / sxx;  // sxx > 0: x values vary
  return {my - slope * mx, slope};
}

// Coarse SSE scan used when the log-space seed is unavailable.
void grid_seed(const Dataset& d, const CurveModel& m, double p[2]) {
  double amax = 0, xmin = d.points.front().first, xmax = xmin;
  for (const auto& [x, y] : d.points) {
    amax = std::max(amax, std::fabs(y));
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  if (amax == 0) amax = 1e-9;
  const double span = xmax - xmin;  // > 0 by check_dataset
  double best = std::numeric_limits<double>::infinity();
  for (int ia = -60; ia <= 60; ++ia) {
    if (ia == 0) continue;
    const double a = amax * ia / 20.0;
    for (int ik = -80; ik <= 80; ++ik) {
      const double k = 20.0 * ik / (80.0 * span);
      const double q[2] = {a, k};
      const double s = weighted_sse(d, m, q);
      if (s < best) {
        best = s;
        p[0] = a;
        p[1] = k;
      }
    }
  }
}

FitResult finish(const Dataset& d, const CurveModel& m, const double p[2], int iterations,
                 bool converged) {
  FitResult r;
  r.params = {p[0], p[1]};
  r.iterations = iterations;
  r.converged = converged;
  r.sse = weighted_sse(d, m, p);
  const double n = static_cast<double>(d.points.size());
  r.rmse = std::sqrt(r.sse / n);
  double wsum = 0, ysum = 0;
  for (size_t i = 0; i < d.points.size(); ++i) {
    wsum += weight_at(d, i);
    ysum += weight_at(d, i) * d.points[i].second;
  }
  const double ybar = ysum / wsum;
  double sst = 0;
  for (size_t i = 0; i < d.points.size(); ++i) {
    const double dy = d.points[i].second - ybar;
    sst += weight_at(d, i) * dy * dy;
  }
  r.r_square = sst > 0 ? 1.0 - r.sse / sst : (r.sse == 0 ? 1.0 : 0.0);
  return r;
}

FitResult levenberg_fit(const Dataset& d, const CurveModel& m, double p[2]) {
  double sse = weighted_sse(d, m, p);
  double lambda = kLambda0;
  int iter = 0;
  bool converged = false;
  for (; iter < kMaxIterations; ++iter) {
    // Normal equations J^T W J and gradient J^T W r, r = y - f.
    double a00 = 0, a01 = 0, a11 = 0, g0 = 0, g1 = 0;
    for (size_t i = 0; i < d.points.size(); ++i) {
      const double w = weight_at(d, i);
      double g[2];
      m.grad(d.points[i].first, p, g);
      const double r = d.points[i].second - m.f(d.points[i].first, p);
      a00 += w * g[0] * g[0];
      a01 += w * g[0] * g[1];
      a11 += w * g[1] * g[1];
      g0 += w * g[0] * r;
      g1 += w * g[1] * r;
    }
    if (std::hypot(g0, g1) < kGradTol) {
      converged = true;
      break;
    }
    bool stepped = false;
    while (lambda <= kLambdaMax) {
      const double b00 = a00 * (1.0 + lambda);
      const double b11 = a11 * (1.0 + lambda);
      const double det = b00 * b11 - a01 * a01;
      if (std::fabs(det) > 1e-300) {
        const double d0 = (b11 * g0 - a01 * g1) / det;
        const double d1 = (b00 * g1 - a01 * g0) / det;
        const double q[2] = {p[0] + d0, p[1] + d1};
        const double s2 = weighted_sse(d, m, q);
        if (std::isfinite(s2) && s2 < sse) {
          p[0] = q[0];
          p[1] = q[1];
          sse = s2;
          lambda = std::max(lambda * 0.1, 1e-12);
          stepped = true;
          break;
        }
      }
      lambda *= 10.0;
    }
    if (!stepped) break;  // singular or no descent direction left
  }
  return finish(d, m, p, iter, converged);
}

}  // namespace

FitResult fit_exp_decay(const Dataset& data) {
  check_dataset(data);
  const CurveModel m{exp_f, exp_grad};
  double p[2];
  bool positive = true;
  for (const auto& [x, y] : data.points)
    if (y <= 0) positive = false;
  if (positive) {
    std::vector<std::pair<double, double>> logged;
    logged.reserve(data.points.size());
    for (const auto& [x, y] : data.points) logged.emplace_back(x, std::log(y));
    const auto [c, slope] = ols(logged);
    p[0] = std::exp(c);
    p[1] = -slope;
  } else {
    grid_seed(data, m, p);
  }
  return levenberg_fit(data, m, p);
}

FitResult fit_jnd_exp_map(const Dataset& data) { return fit_exp_decay(data); }

FitResult fit_power_law(const Dataset& data) {
  check_dataset(data);
  for (const auto& [x, y] : data.points) {
    if (x <= 0) throw InputError("power law needs x > 0, got " + std::to_string(x));
    if (y <= 0) throw InputError("power law needs y > 0, got " + std::to_string(y));
  }
  std::vector<std::pair<double, double>> loglog;
  loglog.reserve(data.points.size());
  for (const auto& [x, y] : data.points) loglog.emplace_back(std::log(x), std::log(y));
  const auto [c, slope] = ols(loglog);
  double p[2] = {std::exp(c), -slope};
  const CurveModel m{pow_f, pow_grad};
  return levenberg_fit(data, m, p);
}

FitResult fit_combined_weights(const std::vector<WeightsRecord>& records) {
  if (records.size() < 2) throw UnderdeterminedError("weight fit needs at least 2 records");
  for (const auto& r : records) {
    if (!std::isfinite(r.qd) || !std::isfinite(r.qs) || !std::isfinite(r.mos))
      throw InputError("non-finite weight-fit record");
    if (r.qd < 1 || r.qd > 5 || r.qs < 1 || r.qs > 5 || r.mos < 1 || r.mos > 5)
      throw InputError("weight-fit record fields must be in [1,5]");
  }

  struct Solution {
    double v5, v6;
  };
  auto solve = [](const std::vector<WeightsRecord>& rs) -> std::optional<Solution> {
    double add = 0, ads = 0, ass = 0, bd = 0, bs = 0;
    for (const auto& r : rs) {
      const double dd = 5.0 - r.qd;
      const double ss = 5.0 - r.qs;
      const double u = (5.0 - r.mos) / 4.0;
      add += dd * dd;
      ads += dd * ss;
      ass += ss * ss;
      bd += dd * u;
      bs += ss * u;
    }
    const double det = add * ass - ads * ads;  // >= 0 (Cauchy-Schwarz)
    if (det <= 1e-12 * add * ass || det <= 0) return std::nullopt;
    return Solution{(ass * bd - ads * bs) / det, (add * bs - ads * bd) / det};
  };

  auto first = solve(records);
  if (!first)
    throw UnderdeterminedError("weight-fit design matrix is collinear or degenerate");

  auto raw = [](const Solution& s, const WeightsRecord& r) {
    return 4.0 * (1.0 - s.v5 * (5.0 - r.qd) - s.v6 * (5.0 - r.qs)) + 1.0;
  };

  // Drop records the model would clamp, then solve once more.
  std::vector<WeightsRecord> kept;
  for (const auto& r : records) {
    const double q = raw(*first, r);
    if (q >= 1.0 - 1e-12 && q <= 5.0 + 1e-12) kept.push_back(r);
  }
  Solution final = *first;
  const std::vector<WeightsRecord>* used = &records;
  int passes = 1;
  if (kept.size() != records.size()) {
    passes = 2;
    if (kept.size() >= 2) {
      if (auto second = solve(kept)) {
        final = *second;
        used = &kept;
      }
    }
  }

  FitResult out;
  out.params = {final.v5, final.v6};
  out.iterations = passes;
  out.converged = true;
  double sse = 0, msum = 0;
  for (const auto& r : *used) {
    const double e = r.mos - raw(final, r);
    sse += e * e;
    msum += r.mos;
  }
  const double n = static_cast<double>(used->size());
  out.sse = sse;
  out.rmse = std::sqrt(sse / n);
  const double mbar = msum / n;
  double sst = 0;
  for (const auto& r : *used) sst += (r.mos - mbar) * (r.mos - mbar);
  out.r_square = sst > 0 ? 1.0 - sse / sst : (sse == 0 ? 1.0 : 0.0);
  return out;
}

}  // namespace pif
