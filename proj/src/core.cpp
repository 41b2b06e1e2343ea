#include "compactvis/core.hpp"

#include <cmath>
#include <cstdio>

#include "compactvis/errors.hpp"

namespace compactvis {

ValueDomain::ValueDomain(double lo, double hi) : min(lo), max(hi) {
  if (!(lo < hi)) throw ConfigError("value domain requires min < max");
}

TimeDomain::TimeDomain(int step_count, double span_hours) : steps(step_count), hours_span(span_hours) {
  if (step_count < 2) throw ConfigError("time domain requires at least 2 steps");
  if (!(span_hours > 0.0)) throw ConfigError("time domain requires a positive hour span");
}

void TimeSeries::validate(const ValueDomain& vd, const TimeDomain& td) const {
  if (values_.size() != static_cast<std::size_t>(td.steps)) {
    throw ShapeError("series has " + std::to_string(values_.size()) + " samples, expected " +
                     std::to_string(td.steps));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!vd.contains(values_[i])) {
      throw RangeError("sample " + std::to_string(i) + " outside the value domain");
    }
  }
}

void TimeInterval::validate(const TimeDomain& td) const {
  if (start_step < 0 || start_step >= end_step || end_step > td.steps - 1) {
    throw RangeError("invalid time interval [" + std::to_string(start_step) + ", " +
                     std::to_string(end_step) + "]");
  }
}

GridLayout::GridLayout(int r, int c, std::vector<TimeSeries> cs, std::optional<int> qs)
    : rows(r), cols(c), cells(std::move(cs)), quadrant_side(qs) {
  if (rows < 1 || cols < 1) throw ConfigError("grid needs at least one row and column");
  if (cells.size() != static_cast<std::size_t>(rows * cols)) {
    throw ShapeError("grid of " + std::to_string(rows) + "x" + std::to_string(cols) + " holds " +
                     std::to_string(cells.size()) + " series");
  }
  if (quadrant_side) {
    if (rows != cols) throw ConfigError("quadrants require a square grid");
    if (*quadrant_side < 1 || rows % *quadrant_side != 0) {
      throw ConfigError("grid side must be a multiple of the quadrant side");
    }
  }
}

int GridLayout::quadrants_per_side() const {
  if (!quadrant_side) throw ConfigError("grid has no quadrant partition");
  return rows / *quadrant_side;
}

std::vector<QuadrantId> GridLayout::quadrants() const {
  const int n = quadrants_per_side();
  std::vector<QuadrantId> out;
  out.reserve(static_cast<std::size_t>(n * n));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out.push_back({r, c});
  return out;
}

std::string clock_label(int step, const TimeDomain& td) {
  if (step < 0 || step >= td.steps) {
    throw RangeError("step " + std::to_string(step) + " outside [0, " + std::to_string(td.steps) + ")");
  }
  const auto minutes = static_cast<long>(std::lround(td.hours_at(step) * 60.0));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%ld:%02ld", minutes / 60, minutes % 60);
  return buf;
}

std::vector<int> quadrant_members(const GridLayout& grid, QuadrantId q) {
  const int per_side = grid.quadrants_per_side();
  if (q.row < 0 || q.col < 0 || q.row >= per_side || q.col >= per_side) {
    throw RangeError("quadrant (" + std::to_string(q.row) + ", " + std::to_string(q.col) + ") out of range");
  }
  const int qs = *grid.quadrant_side;
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(qs * qs));
  for (int r = 0; r < qs; ++r)
    for (int c = 0; c < qs; ++c) out.push_back((q.row * qs + r) * grid.cols + q.col * qs + c);
  return out;
}

}  // namespace compactvis
