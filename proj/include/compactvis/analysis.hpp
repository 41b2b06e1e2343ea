#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "compactvis/core.hpp"
#include "compactvis/study.hpp"

namespace compactvis {

/// Five-number summary of one aggregation interval.
struct IntervalStats {
  int start_step = 0;
  int end_step = 0;  // inclusive
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Quantile of an ascending sample by linear interpolation at q * (n - 1).
double interpolated_quantile(std::span<const double> sorted, double q);

/// Splits the series into ceil(n / interval_len) consecutive intervals (the
/// last one may be short) and summarizes each.
std::vector<IntervalStats> summary_stats(const TimeSeries& s, int interval_len = 3);

/// Last value minus first value.
double slope(const TimeSeries& s);

/// Earliest index of the maximum.
int global_max_time(const TimeSeries& s);

/// True iff some sample in the inclusive interval is strictly above thr.
bool exceeds_threshold(const TimeSeries& s, TimeInterval iv, double thr);

/// True iff every sample lies in the closed band [first - tol, first + tol].
bool within_range(const TimeSeries& s, double tol);

/// Mean over the quadrant's members of v(iv.end_step) - v(iv.start_step).
double quadrant_avg_slope(const GridLayout& grid, QuadrantId q, TimeInterval iv);

struct DtwResult {
  double cost = 0.0;
};

/// Unconstrained dynamic time warping with local cost |a_i - b_j| and the
/// three moves (i+1, j), (i, j+1), (i+1, j+1).
DtwResult dtw_cost(std::span<const double> a, std::span<const double> b);
inline DtwResult dtw_cost(const TimeSeries& a, const TimeSeries& b) { return dtw_cost(a.values(), b.values()); }

/// Unordered member pairs compared for homogeneity, as cell indices.
std::vector<std::pair<int, int>> quadrant_pairs(const GridLayout& grid, QuadrantId q);

/// Sum of pairwise DTW cost within a quadrant; lower is more homogeneous.
double quadrant_homogeneity(const GridLayout& grid, QuadrantId q);

/// Generation-side requirements on a task dataset.
struct TaskRules {
  int min_qualifying = 5;
  int max_qualifying = 10;
};

/// Outcome of checking a task's predicate on a dataset. On success `key` holds
/// the unique correct answer; otherwise `failure` names the violated predicate.
struct TaskCheck {
  std::optional<Answer> key;
  std::string failure;

  bool ok() const noexcept { return key.has_value(); }
};

TaskCheck evaluate_task(TaskId task, const GridLayout& grid, const TaskParams& params, const TimeDomain& td,
                        const TaskRules& rules = {});

struct TrialScore {
  bool skipped = false;
  double error = 0.0;
  /// T10 only: homogeneity of the chosen quadrant minus the best one.
  std::optional<double> dtw_cost_gap;
};

/// Error of one answer against the trial's key. A missing answer is a skip.
/// Throws ValidationError when the answer does not match the trial's type or
/// refers to a graph or quadrant outside the grid.
TrialScore score_trial(const TrialSpec& trial, const GridLayout& grid, const std::optional<Answer>& answer,
                       const TimeDomain& td);

}  // namespace compactvis
