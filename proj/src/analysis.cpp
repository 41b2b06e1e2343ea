#include "compactvis/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "compactvis/errors.hpp"

namespace compactvis {

double interpolated_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ShapeError("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

std::vector<IntervalStats> summary_stats(const TimeSeries& s, int interval_len) {
  if (interval_len <= 0) throw RangeError("interval length must be positive");
  const int n = static_cast<int>(s.size());
  std::vector<IntervalStats> out;
  out.reserve(static_cast<std::size_t>((n + interval_len - 1) / interval_len));
  std::vector<double> buf;
  for (int start = 0; start < n; start += interval_len) {
    const int end = std::min(start + interval_len, n);
    buf.assign(s.begin() + start, s.begin() + end);
    std::sort(buf.begin(), buf.end());
    out.push_back({start, end - 1, buf.front(), interpolated_quantile(buf, 0.25), interpolated_quantile(buf, 0.5),
                   interpolated_quantile(buf, 0.75), buf.back()});
  }
  return out;
}

double slope(const TimeSeries& s) {
  if (s.size() < 2) throw ShapeError("slope needs at least two samples");
  return s.back() - s.front();
}

int global_max_time(const TimeSeries& s) {
  if (s.empty()) throw ShapeError("maximum of an empty series");
  // max_element keeps the first of equal elements
  return static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
}

bool exceeds_threshold(const TimeSeries& s, TimeInterval iv, double thr) {
  if (iv.start_step < 0 || iv.end_step >= static_cast<int>(s.size()) || iv.start_step > iv.end_step) {
    throw RangeError("interval outside the series");
  }
  for (int t = iv.start_step; t <= iv.end_step; ++t)
    if (s[static_cast<std::size_t>(t)] > thr) return true;
  return false;
}

bool within_range(const TimeSeries& s, double tol) {
  if (!(tol > 0.0)) throw RangeError("range tolerance must be positive");
  const double lo = s.front() - tol;
  const double hi = s.front() + tol;
  return std::all_of(s.begin(), s.end(), [&](double v) { return v >= lo && v <= hi; });
}

double quadrant_avg_slope(const GridLayout& grid, QuadrantId q, TimeInterval iv) {
  const auto members = quadrant_members(grid, q);
  double sum = 0.0;
  for (int idx : members) {
    const auto& s = grid.cells[static_cast<std::size_t>(idx)];
    if (iv.end_step >= static_cast<int>(s.size()) || iv.start_step < 0) throw RangeError("interval outside the series");
    sum += s[static_cast<std::size_t>(iv.end_step)] - s[static_cast<std::size_t>(iv.start_step)];
  }
  return sum / static_cast<double>(members.size());
}

DtwResult dtw_cost(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ShapeError("dtw of an empty sequence");
  const std::size_t m = b.size();
  // two rolling rows of the accumulated-cost table
  std::vector<double> prev(m), cur(m);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double local = std::abs(a[i] - b[j]);
      double best;
      if (i == 0 && j == 0) best = 0.0;
      else if (i == 0) best = cur[j - 1];
      else if (j == 0) best = prev[j];
      else best = std::min({prev[j - 1], prev[j], cur[j - 1]});
      cur[j] = best + local;
    }
    std::swap(prev, cur);
  }
  return {prev[m - 1]};
}

std::vector<std::pair<int, int>> quadrant_pairs(const GridLayout& grid, QuadrantId q) {
  const auto members = quadrant_members(grid, q);
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j) pairs.emplace_back(members[i], members[j]);
  return pairs;
}

double quadrant_homogeneity(const GridLayout& grid, QuadrantId q) {
  double total = 0.0;
  for (auto [i, j] : quadrant_pairs(grid, q))
    total += dtw_cost(grid.cells[static_cast<std::size_t>(i)], grid.cells[static_cast<std::size_t>(j)]).cost;
  return total;
}

namespace {

/// Index of the strictly unique maximum, if any.
std::optional<int> unique_argmax(std::span<const double> xs) {
  if (xs.empty()) return std::nullopt;
  const auto it = std::max_element(xs.begin(), xs.end());
  if (std::count(xs.begin(), xs.end(), *it) != 1) return std::nullopt;
  return static_cast<int>(it - xs.begin());
}

std::optional<int> unique_argmin(std::span<const double> xs) {
  std::vector<double> neg(xs.begin(), xs.end());
  for (auto& x : neg) x = -x;
  return unique_argmax(neg);
}

double value_at(const GridLayout& grid, int cell, int step) {
  return grid.cells.at(static_cast<std::size_t>(cell)).values()[static_cast<std::size_t>(step)];
}

bool step_ok(int step, const TimeDomain& td) { return step >= 0 && step < td.steps; }

TaskCheck fail(std::string why) { return {std::nullopt, std::move(why)}; }

}  // namespace

TaskCheck evaluate_task(TaskId task, const GridLayout& grid, const TaskParams& params, const TimeDomain& td,
                        const TaskRules& rules) {
  const int n = static_cast<int>(grid.size());
  switch (task) {
    case TaskId::T01: {
      if (params.marker_steps.size() != 1 || !step_ok(params.marker_steps[0], td))
        throw ConfigError("T01 needs one shared marker step");
      std::vector<double> vals;
      for (int i = 0; i < n; ++i) vals.push_back(value_at(grid, i, params.marker_steps[0]));
      if (auto best = unique_argmax(vals)) return {SingleGraphAnswer{*best}, {}};
      return fail("unique maximum at the marked step");
    }
    case TaskId::T02:
    case TaskId::T03: {
      std::vector<double> slopes;
      for (const auto& s : grid.cells) slopes.push_back(slope(s));
      const bool increasing = task == TaskId::T02;
      const bool any = std::any_of(slopes.begin(), slopes.end(), [&](double d) { return increasing ? d > 0 : d < 0; });
      if (!any) return fail(increasing ? "at least one increasing slope" : "at least one decreasing slope");
      auto best = increasing ? unique_argmax(slopes) : unique_argmin(slopes);
      if (!best) return fail(increasing ? "unique steepest increase" : "unique steepest decrease");
      return {SingleGraphAnswer{*best}, {}};
    }
    case TaskId::T04:
    case TaskId::T05: {
      if (params.marker_steps.size() != static_cast<std::size_t>(n) || n != 2)
        throw ConfigError(std::string(to_string(task)) + " needs one marker per graph on a 1x2 grid");
      for (int m : params.marker_steps)
        if (!step_ok(m, td)) throw ConfigError("marker step out of range");
      if (params.marker_steps[0] == params.marker_steps[1]) return fail("markers at different positions");
      const double a = value_at(grid, 0, params.marker_steps[0]);
      const double b = value_at(grid, 1, params.marker_steps[1]);
      if (task == TaskId::T05) return {ValueAnswer{std::abs(a - b)}, {}};
      if (a == b) return fail("unique larger marked value");
      return {SingleGraphAnswer{a > b ? 0 : 1}, {}};
    }
    case TaskId::T06: {
      if (!params.highlighted || *params.highlighted < 0 || *params.highlighted >= n)
        throw ConfigError("T06 needs a highlighted graph");
      const auto& s = grid.cells[static_cast<std::size_t>(*params.highlighted)];
      if (!unique_argmax(s.values())) return fail("unique global maximum of the highlighted graph");
      return {TimeSliderAnswer{global_max_time(s)}, {}};
    }
    case TaskId::T07: {
      if (!params.threshold || !params.interval) throw ConfigError("T07 needs a threshold and an interval");
      std::vector<int> hits;
      for (int i = 0; i < n; ++i)
        if (exceeds_threshold(grid.cells[static_cast<std::size_t>(i)], *params.interval, *params.threshold))
          hits.push_back(i);
      const int count = static_cast<int>(hits.size());
      if (count < rules.min_qualifying || count > rules.max_qualifying)
        return fail("qualifying count in [" + std::to_string(rules.min_qualifying) + ", " +
                    std::to_string(rules.max_qualifying) + "]");
      return {MultiGraphAnswer{std::move(hits)}, {}};
    }
    case TaskId::T08: {
      if (!params.interval) throw ConfigError("T08 needs an interval");
      const auto quads = grid.quadrants();
      std::vector<double> avg;
      for (auto q : quads) avg.push_back(quadrant_avg_slope(grid, q, *params.interval));
      if (auto best = unique_argmax(avg)) return {QuadrantAnswer{quads[static_cast<std::size_t>(*best)]}, {}};
      return fail("unique quadrant with the highest average increase");
    }
    case TaskId::T09: {
      if (!params.highlighted || *params.highlighted < 0 || *params.highlighted >= n || !params.tolerance)
        throw ConfigError("T09 needs a highlighted graph and a tolerance");
      return {YesNoAnswer{within_range(grid.cells[static_cast<std::size_t>(*params.highlighted)], *params.tolerance)},
              {}};
    }
    case TaskId::T10: {
      const auto quads = grid.quadrants();
      std::vector<double> cost;
      for (auto q : quads) cost.push_back(quadrant_homogeneity(grid, q));
      if (auto best = unique_argmin(cost)) return {QuadrantAnswer{quads[static_cast<std::size_t>(*best)]}, {}};
      return fail("unique most homogeneous quadrant");
    }
  }
  return fail("unknown task");
}

namespace {

void require_graph(int idx, const GridLayout& grid, const std::string& id) {
  if (idx < 0 || idx >= static_cast<int>(grid.size()))
    throw ValidationError({id + ": graph index " + std::to_string(idx) + " outside the grid"});
}

void require_quadrant(QuadrantId q, const GridLayout& grid, const std::string& id) {
  const int per_side = grid.quadrants_per_side();
  if (q.row < 0 || q.col < 0 || q.row >= per_side || q.col >= per_side)
    throw ValidationError({id + ": quadrant outside the grid"});
}

}  // namespace

TrialScore score_trial(const TrialSpec& trial, const GridLayout& grid, const std::optional<Answer>& answer,
                       const TimeDomain& td) {
  if (!answer) return {true, 0.0, std::nullopt};
  const auto& id = trial.trial_id;
  if (answer_type_of(*answer) != trial.answer_type || answer_type_of(trial.key) != trial.answer_type) {
    throw ValidationError({id + ": answer type " + std::string(to_string(answer_type_of(*answer))) +
                           " does not match " + std::string(to_string(trial.answer_type))});
  }

  TrialScore out;
  switch (trial.task) {
    case TaskId::T01: {
      const int chosen = std::get<SingleGraphAnswer>(*answer).index;
      const int key = std::get<SingleGraphAnswer>(trial.key).index;
      require_graph(chosen, grid, id);
      const int step = trial.params.marker_steps.at(0);
      out.error = std::abs(value_at(grid, key, step) - value_at(grid, chosen, step));
      break;
    }
    case TaskId::T02:
    case TaskId::T03: {
      const int chosen = std::get<SingleGraphAnswer>(*answer).index;
      const int key = std::get<SingleGraphAnswer>(trial.key).index;
      require_graph(chosen, grid, id);
      out.error = std::abs(slope(grid.cells[static_cast<std::size_t>(key)]) -
                           slope(grid.cells[static_cast<std::size_t>(chosen)]));
      break;
    }
    case TaskId::T04: {
      const int chosen = std::get<SingleGraphAnswer>(*answer).index;
      require_graph(chosen, grid, id);
      out.error = chosen == std::get<SingleGraphAnswer>(trial.key).index ? 0.0 : 1.0;
      break;
    }
    case TaskId::T05:
      out.error = std::abs(std::get<ValueAnswer>(*answer).value - std::get<ValueAnswer>(trial.key).value);
      break;
    case TaskId::T06: {
      const int step = std::get<TimeSliderAnswer>(*answer).step;
      if (!step_ok(step, td)) throw ValidationError({id + ": time step " + std::to_string(step) + " out of range"});
      out.error = std::abs(step - std::get<TimeSliderAnswer>(trial.key).step) * td.hours_per_step();
      break;
    }
    case TaskId::T07: {
      const auto& chosen_list = std::get<MultiGraphAnswer>(*answer).indices;
      for (int c : chosen_list) require_graph(c, grid, id);
      const std::set<int> chosen(chosen_list.begin(), chosen_list.end());
      const auto& key_list = std::get<MultiGraphAnswer>(trial.key).indices;
      const std::set<int> key(key_list.begin(), key_list.end());
      int misses = 0, false_alarms = 0;
      for (int k : key) misses += chosen.count(k) == 0 ? 1 : 0;
      for (int c : chosen) false_alarms += key.count(c) == 0 ? 1 : 0;
      out.error = misses + false_alarms;
      break;
    }
    case TaskId::T08: {
      const auto chosen = std::get<QuadrantAnswer>(*answer).quadrant;
      require_quadrant(chosen, grid, id);
      const auto key = std::get<QuadrantAnswer>(trial.key).quadrant;
      const auto iv = trial.params.interval.value();
      out.error = std::abs(quadrant_avg_slope(grid, key, iv) - quadrant_avg_slope(grid, chosen, iv));
      break;
    }
    case TaskId::T09:
      out.error = std::get<YesNoAnswer>(*answer).yes == std::get<YesNoAnswer>(trial.key).yes ? 0.0 : 1.0;
      break;
    case TaskId::T10: {
      const auto chosen = std::get<QuadrantAnswer>(*answer).quadrant;
      require_quadrant(chosen, grid, id);
      const auto key = std::get<QuadrantAnswer>(trial.key).quadrant;
      out.error = chosen == key ? 0.0 : 1.0;
      out.dtw_cost_gap = chosen == key ? 0.0 : quadrant_homogeneity(grid, chosen) - quadrant_homogeneity(grid, key);
      break;
    }
  }
  return out;
}

}  // namespace compactvis
