#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace compactvis {

/// Closed value range of the data. Values never leave it.
struct ValueDomain {
  double min = 0.0;
  double max = 100.0;

  ValueDomain() = default;
  ValueDomain(double lo, double hi);

  double span() const noexcept { return max - min; }
  bool contains(double v) const noexcept { return v >= min && v <= max; }
};

/// Regular sampling of one display day. Sample i sits at hours_span * i / (steps - 1).
struct TimeDomain {
  int steps = 72;
  double hours_span = 24.0;

  TimeDomain() = default;
  TimeDomain(int step_count, double span_hours = 24.0);

  double hours_at(double step) const noexcept { return hours_span * step / (steps - 1); }
  double hours_per_step() const noexcept { return hours_span / (steps - 1); }
};

class TimeSeries {
public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }

  std::span<const double> values() const noexcept { return values_; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  /// Throws ShapeError / RangeError if the series does not fit the domains.
  void validate(const ValueDomain& vd, const TimeDomain& td) const;

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
  std::vector<double> values_;
};

struct QuadrantId {
  int row = 0;
  int col = 0;

  friend bool operator==(const QuadrantId&, const QuadrantId&) = default;
};

/// Inclusive range of sample indices.
struct TimeInterval {
  int start_step = 0;
  int end_step = 0;

  void validate(const TimeDomain& td) const;

  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

/// Row-major grid of series. Study grids are square except the 1x2 comparison
/// layouts, so rows and cols are kept separately.
struct GridLayout {
  int rows = 0;
  int cols = 0;
  std::vector<TimeSeries> cells;
  std::optional<int> quadrant_side;

  GridLayout() = default;
  GridLayout(int rows, int cols, std::vector<TimeSeries> cells,
             std::optional<int> quadrant_side = std::nullopt);

  static GridLayout square(int side, std::vector<TimeSeries> cells,
                           std::optional<int> quadrant_side = std::nullopt) {
    return GridLayout(side, side, std::move(cells), quadrant_side);
  }

  std::size_t size() const noexcept { return cells.size(); }
  const TimeSeries& at(int row, int col) const { return cells.at(static_cast<std::size_t>(row * cols + col)); }

  /// Quadrants per grid edge. Throws ConfigError without quadrants.
  int quadrants_per_side() const;
  std::vector<QuadrantId> quadrants() const;

  friend bool operator==(const GridLayout&, const GridLayout&) = default;
};

/// "H:MM" clock label of a sample, minutes rounded to nearest.
std::string clock_label(int step, const TimeDomain& td);

/// Row-major cell indices of one quadrant.
std::vector<int> quadrant_members(const GridLayout& grid, QuadrantId q);

}  // namespace compactvis
