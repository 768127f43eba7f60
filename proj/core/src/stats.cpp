#include "pif/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pif/errors.hpp"

namespace pif {
namespace {

void require_same_size(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw InputError("vector length mismatch: " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
}

// Sample variance, n-1 denominator.
double sample_var(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

// Continued fraction for the incomplete beta, modified Lentz method.
double incbeta_cf(double a, double b, double x) {
  constexpr double kEps = 1e-14;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double mean(const std::vector<double>& v) {
  if (v.empty()) throw InsufficientDataError("mean of empty vector");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.empty()) throw InsufficientDataError("sd of empty vector");
  if (v.size() == 1) return 0.0;
  return std::sqrt(sample_var(v));
}

double pcc(const std::vector<double>& a, const std::vector<double>& b) {
  require_same_size(a, b);
  if (a.size() < 2) throw InsufficientDataError("pcc needs at least 2 points");
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0, saa = 0, sbb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0 || sbb == 0)
    throw InsufficientDataError("correlation undefined for a constant vector");
  return sab / std::sqrt(saa * sbb);
}

std::vector<double> average_ranks(const std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t i, size_t j) { return v[i] < v[j]; });
  std::vector<double> ranks(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    // positions i..j share the average of 1-based ranks i+1..j+1
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double srocc(const std::vector<double>& a, const std::vector<double>& b) {
  require_same_size(a, b);
  if (a.size() < 2) throw InsufficientDataError("srocc needs at least 2 points");
  return pcc(average_ranks(a), average_ranks(b));
}

double rmse(const std::vector<double>& pred, const std::vector<double>& obs) {
  require_same_size(pred, obs);
  if (pred.empty()) throw InsufficientDataError("rmse of empty vectors");
  double ss = 0;
  for (size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - obs[i];
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(pred.size()));
}

MetricReport metric_report(const std::vector<double>& pred, const std::vector<double>& obs) {
  MetricReport r;
  r.n = static_cast<int>(pred.size());
  r.pcc = pcc(pred, obs);
  r.srocc = srocc(pred, obs);
  r.rmse = rmse(pred, obs);
  return r;
}

std::map<CellId, double> mos(const std::vector<RatingRecord>& records) {
  if (records.empty()) throw InsufficientDataError("no ratings");
  std::map<CellId, std::pair<double, int>> acc;  // sum, count
  for (const auto& r : records) {
    if (r.rating < 1 || r.rating > 5)
      throw ValidationError("rating out of range 1..5 for participant '" + r.participant_id +
                            "' cell (" + r.task + ", " + r.scenario_id + ")");
    auto& [sum, count] = acc[{r.task, r.scenario_id}];
    sum += r.rating;
    count += 1;
  }
  std::map<CellId, double> out;
  for (const auto& [cell, sc] : acc) out[cell] = sc.first / sc.second;
  return out;
}

std::vector<ParticipantScreen> screen_participants(const std::vector<RatingRecord>& records,
                                                   const std::map<CellId, double>& mos_table,
                                                   double threshold) {
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_pid;
  for (const auto& r : records) {
    auto it = mos_table.find({r.task, r.scenario_id});
    if (it == mos_table.end())
      throw ValidationError("no MOS entry for cell (" + r.task + ", " + r.scenario_id + ")");
    auto& [own, ref] = by_pid[r.participant_id];
    own.push_back(static_cast<double>(r.rating));
    ref.push_back(it->second);
  }
  std::vector<ParticipantScreen> out;
  for (const auto& [pid, vecs] : by_pid) {
    ParticipantScreen s;
    s.participant_id = pid;
    s.n_cells = static_cast<int>(vecs.first.size());
    s.insufficient = s.n_cells < 3;
    if (!s.insufficient) {
      try {
        s.pcc = pcc(vecs.first, vecs.second);
      } catch (const InsufficientDataError&) {
        // constant ratings (or constant MOS): correlation undefined
      }
    }
    s.keep = s.pcc.has_value() && *s.pcc >= threshold;
    out.push_back(std::move(s));
  }
  return out;  // std::map iteration is already sorted by participant_id
}

FTestResult f_test_residuals(const std::vector<double>& resid_a,
                             const std::vector<double>& resid_b) {
  if (resid_a.size() < 2 || resid_b.size() < 2)
    throw InsufficientDataError("f-test needs at least 2 residuals per group");
  const double va = sample_var(resid_a);
  const double vb = sample_var(resid_b);
  if (va == 0 && vb == 0) throw InsufficientDataError("both residual variances are zero");

  FTestResult r;
  const bool a_on_top = va >= vb;
  const double num = a_on_top ? va : vb;
  const double den = a_on_top ? vb : va;
  r.df1 = static_cast<int>((a_on_top ? resid_a.size() : resid_b.size()) - 1);
  r.df2 = static_cast<int>((a_on_top ? resid_b.size() : resid_a.size()) - 1);
  if (den == 0) {
    r.f_statistic = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    return r;
  }
  r.f_statistic = num / den;
  const double cdf = f_cdf(r.f_statistic, r.df1, r.df2);
  r.p_value = std::min(1.0, 2.0 * std::min(cdf, 1.0 - cdf));
  return r;
}

double f_cdf(double f, int df1, int df2) {
  if (df1 < 1 || df2 < 1) throw InputError("degrees of freedom must be >= 1");
  if (!(f >= 0)) throw InputError("F statistic must be >= 0");
  if (std::isinf(f)) return 1.0;
  const double d1 = df1, d2 = df2;
  const double x = d1 * f / (d1 * f + d2);
  return regularized_incomplete_beta(d1 / 2.0, d2 / 2.0, x);
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (a <= 0 || b <= 0) throw InputError("beta parameters must be > 0");
  if (!(x >= 0 && x <= 1)) throw InputError("x must be in [0,1]");
  if (x == 0) return 0.0;
  if (x == 1) return 1.0;
  const double ln_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  // The continued fraction converges fast only below the distribution mode;
  // above it, use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(ln_front) * incbeta_cf(a, b, x) / a;
  }
  return 1.0 - std::exp(ln_front) * incbeta_cf(b, a, 1.0 - x) / b;
}

}  // namespace pif
