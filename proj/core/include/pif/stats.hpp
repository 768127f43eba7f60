#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pif {

// One subjective rating of one (task, scenario) cell.
struct RatingRecord {
  std::string participant_id;
  std::string task;
  std::string scenario_id;
  int rating = 0;  // 1..5

  bool operator==(const RatingRecord&) const = default;
};

// (task, scenario_id)
using CellId = std::pair<std::string, std::string>;

struct MetricReport {
  int n = 0;
  double pcc = 0;
  double srocc = 0;
  double rmse = 0;
  std::optional<double> f_statistic;
  std::optional<double> p_value;
};

struct FTestResult {
  double f_statistic = 0;  // larger sample variance / smaller
  int df1 = 0;             // numerator dof
  int df2 = 0;
  double p_value = 0;      // two-tailed
};

// Screening verdict for one participant. pcc is empty when it cannot be
// computed (fewer than 3 rated cells, or constant ratings).
struct ParticipantScreen {
  std::string participant_id;
  int n_cells = 0;
  std::optional<double> pcc;
  bool keep = false;
  bool insufficient = false;  // fewer than 3 rated cells
};

double mean(const std::vector<double>& v);
double sample_sd(const std::vector<double>& v);  // n-1 denominator, 0 for n=1

// Pearson correlation. Throws InputError on length mismatch,
// InsufficientDataError when n < 2 or either vector is constant.
double pcc(const std::vector<double>& a, const std::vector<double>& b);

// Average ranks, 1-based; ties share the mean of their rank range.
std::vector<double> average_ranks(const std::vector<double>& v);

// Spearman rank correlation = pcc of average-ranked data.
double srocc(const std::vector<double>& a, const std::vector<double>& b);

// sqrt(mean squared difference). Throws on mismatch or empty input.
double rmse(const std::vector<double>& pred, const std::vector<double>& obs);

// n + the three agreement metrics in one shot.
MetricReport metric_report(const std::vector<double>& pred, const std::vector<double>& obs);

// Mean rating per cell. Validates ratings are in 1..5; empty input throws.
std::map<CellId, double> mos(const std::vector<RatingRecord>& records);

// Correlate each participant's ratings against the cell MOS. Participants
// with < 3 rated cells are flagged, never silently removed. Output sorted by
// participant_id.
std::vector<ParticipantScreen> screen_participants(const std::vector<RatingRecord>& records,
                                                   const std::map<CellId, double>& mos_table,
                                                   double threshold = 0.75);

// Variance-ratio test on two residual vectors. The larger sample variance
// goes on top, so f_statistic >= 1 and the test is symmetric in its
// arguments. Two-tailed p-value. Throws when both variances are zero; if
// exactly one is zero the statistic is +infinity with p = 0.
FTestResult f_test_residuals(const std::vector<double>& resid_a,
                             const std::vector<double>& resid_b);

// CDF of the F distribution with (df1, df2) degrees of freedom.
double f_cdf(double f, int df1, int df2);

// I_x(a, b), continued-fraction evaluation, absolute accuracy ~1e-12.
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace pif
