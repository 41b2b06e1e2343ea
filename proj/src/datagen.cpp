#include "compactvis/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <json.hpp>

#include "compactvis/errors.hpp"
#include "compactvis/format.hpp"

namespace compactvis {

void GenConfig::validate() const {
  if (length < 2) throw ConfigError("series length must be at least 2");
  if (!(walk_step_sigma > 0.0)) throw ConfigError("walk step sigma must be positive");
  if (smooth_window < 1 || smooth_window % 2 == 0) throw ConfigError("smoothing window must be odd and positive");
  if (smooth_window >= length) throw ConfigError("smoothing window must be shorter than the series");
  if (alpha_prev < 0.0 || alpha_prev > 1.0) throw ConfigError("alpha_prev must lie in [0, 1]");
  if (!(domain.min < domain.max)) throw ConfigError("value domain requires min < max");
}

namespace {

double reflect(double x, double lo, double hi) {
  const double width = hi - lo;
  const double period = 2.0 * width;
  double y = std::fmod(x - lo, period);
  if (y < 0.0) y += period;
  if (y > width) y = period - y;
  return lo + y;
}

std::vector<double> moving_average(const std::vector<double>& raw, int window) {
  const int n = static_cast<int>(raw.size());
  const int half = window / 2;
  std::vector<double> out(raw.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (int j = lo; j <= hi; ++j) sum += raw[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = sum / (hi - lo + 1);
  }
  return out;
}

}  // namespace

TimeSeries random_walk_series(const GenConfig& cfg, Rng& rng) {
  cfg.validate();
  const auto& d = cfg.domain;
  std::vector<double> raw(static_cast<std::size_t>(cfg.length));
  raw[0] = rng.uniform(d.min, d.max);
  for (std::size_t i = 1; i < raw.size(); ++i)
    raw[i] = reflect(raw[i - 1] + rng.normal(0.0, cfg.walk_step_sigma), d.min, d.max);
  auto smooth = moving_average(raw, cfg.smooth_window);
  // rounding in the average can step one ulp outside the domain
  for (auto& v : smooth) v = std::clamp(v, d.min, d.max);
  return TimeSeries(std::move(smooth));
}

TimeSeries correlate(const TimeSeries& prev, const TimeSeries& fresh, double alpha) {
  if (prev.size() != fresh.size()) throw ShapeError("correlate needs series of equal length");
  if (alpha < 0.0 || alpha > 1.0) throw RangeError("correlation weight must lie in [0, 1]");
  std::vector<double> out(prev.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * prev[i] + (1.0 - alpha) * fresh[i];
  return TimeSeries(std::move(out));
}

GridCoord hilbert_d2xy(HilbertIndex idx) {
  if (idx.order < 1 || idx.order > 30) throw RangeError("hilbert order must lie in [1, 30]");
  const std::int64_t n = std::int64_t{1} << idx.order;
  if (idx.d < 0 || idx.d >= n * n) throw RangeError("hilbert distance " + std::to_string(idx.d) + " out of range");
  std::int64_t x = 0, y = 0, t = idx.d;
  for (std::int64_t s = 1; s < n; s *= 2) {
    const std::int64_t rx = 1 & (t / 2);
    const std::int64_t ry = 1 & (t ^ rx);
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
    x += s * rx;
    y += s * ry;
    t /= 4;
  }
  return {static_cast<int>(y), static_cast<int>(x)};
}

int hilbert_order_for(int side) {
  if (side < 1) throw RangeError("grid side must be positive");
  int order = 1;
  while ((1 << order) < side) ++order;
  return order;
}

std::vector<GridCoord> hilbert_placement(int rows, int cols) {
  const int order = hilbert_order_for(std::max(rows, cols));
  const std::int64_t total = std::int64_t{1} << (2 * order);
  std::vector<GridCoord> out;
  out.reserve(static_cast<std::size_t>(rows * cols));
  for (std::int64_t d = 0; d < total; ++d) {
    const auto p = hilbert_d2xy({d, order});
    if (p.row < rows && p.col < cols) out.push_back(p);
  }
  return out;
}

GridLayout layout_grid(int rows, int cols, const GenConfig& cfg, Rng& rng, std::optional<int> quadrant_side) {
  cfg.validate();
  const auto order = hilbert_placement(rows, cols);
  std::vector<TimeSeries> cells(order.size());
  TimeSeries prev;
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto fresh = random_walk_series(cfg, rng);
    TimeSeries s = i == 0 ? std::move(fresh) : correlate(prev, fresh, cfg.alpha_prev);
    cells[static_cast<std::size_t>(order[i].row * cols + order[i].col)] = s;
    prev = std::move(s);
  }
  return GridLayout(rows, cols, std::move(cells), quadrant_side);
}

TimeInterval slice_range(int steps, int slices, int s) {
  if (slices < 1 || slices > steps) throw ConfigError("slice count must lie in [1, steps]");
  if (s < 0 || s >= slices) throw RangeError("slice index out of range");
  const int base = steps / slices;
  return {s * base, s == slices - 1 ? steps - 1 : (s + 1) * base - 1};
}

int slice_of_step(int steps, int slices, int step) {
  if (step < 0 || step >= steps) throw RangeError("step out of range");
  const int base = steps / slices;
  return std::min(step / base, slices - 1);
}

namespace {

TaskParams draw_params(TaskId task, const GridLayout& grid, const GenConfig& cfg, const TaskConfig& tc, Rng& rng) {
  const int steps = cfg.length;
  const int n = static_cast<int>(grid.size());
  TaskParams p;
  p.quadrant_side = grid.quadrant_side;
  switch (task) {
    case TaskId::T01: p.marker_steps = {rng.uniform_int(0, steps - 1)}; break;
    case TaskId::T04:
    case TaskId::T05: {
      const int a = rng.uniform_int(0, steps - 1);
      int b = rng.uniform_int(0, steps - 2);
      if (b >= a) ++b;  // distinct positions
      p.marker_steps = {a, b};
      break;
    }
    case TaskId::T06: p.highlighted = rng.uniform_int(0, n - 1); break;
    case TaskId::T07: {
      p.threshold = rng.uniform_int(static_cast<int>(std::ceil(tc.threshold_min)),
                                    static_cast<int>(std::floor(tc.threshold_max)));
      const int len = std::clamp(static_cast<int>(std::lround(steps * tc.interval_fraction)), 2, steps);
      const int start = rng.uniform_int(0, steps - len);
      p.interval = TimeInterval{start, start + len - 1};
      break;
    }
    case TaskId::T08: {
      p.interval_kind = tc.interval_kind;
      switch (tc.interval_kind) {
        case IntervalKind::FullSpan: p.interval = TimeInterval{0, steps - 1}; break;
        case IntervalKind::SliceAligned: p.interval = slice_range(steps, tc.slices, rng.uniform_int(0, tc.slices - 1)); break;
        case IntervalKind::Arbitrary: {
          const int len = steps / tc.slices;
          int start;
          do {
            start = rng.uniform_int(0, steps - len);
          } while (start % len == 0);
          p.interval = TimeInterval{start, start + len - 1};
          break;
        }
      }
      break;
    }
    case TaskId::T09:
      p.highlighted = rng.uniform_int(0, n - 1);
      p.tolerance = tc.range_tolerance;
      break;
    default: break;
  }
  return p;
}

}  // namespace

TaskDataset generate_task_dataset(TaskId task, const GenConfig& cfg, const TaskConfig& tc, Rng& rng) {
  cfg.validate();
  const TimeDomain td(cfg.length);
  const auto shape = task_shape(task);
  std::string failure;
  for (int attempt = 1; attempt <= tc.max_attempts; ++attempt) {
    auto grid = layout_grid(shape.rows, shape.cols, cfg, rng, shape.quadrant_side);
    auto params = draw_params(task, grid, cfg, tc, rng);
    auto check = evaluate_task(task, grid, params, td, tc.rules);
    if (check.ok()) return {task, std::move(grid), std::move(params), std::move(*check.key), attempt};
    failure = std::move(check.failure);
  }
  throw GenerationError(std::string(to_string(task)) + ": no dataset satisfying '" + failure + "' after " +
                        std::to_string(tc.max_attempts) + " attempts");
}

TaskDataset generate_task_dataset(TaskId task, const GenConfig& cfg, const TaskConfig& tc) {
  Rng rng(cfg.seed);
  return generate_task_dataset(task, cfg, tc, rng);
}

std::string dataset_to_csv(const GridLayout& grid) {
  std::string out;
  for (const auto& s : grid.cells) {
    bool first = true;
    for (double v : s) {
      if (!first) out += ',';
      out += format_shortest(v);
      first = false;
    }
    out += '\n';
  }
  return out;
}

std::vector<TimeSeries> series_from_csv(std::string_view text) {
  std::vector<TimeSeries> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<double> values;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{}) throw FileError("malformed number on line " + std::to_string(line_no));
      values.push_back(v);
      p = next;
      while (p < end && *p == ' ') ++p;
      if (p < end) {
        if (*p != ',') throw FileError("expected ',' on line " + std::to_string(line_no));
        ++p;
      }
    }
    out.emplace_back(std::move(values));
  }
  return out;
}

GridLayout dataset_from_csv(std::string_view text, int rows, int cols, std::optional<int> quadrant_side) {
  return GridLayout(rows, cols, series_from_csv(text), quadrant_side);
}

std::string dataset_manifest(const GridLayout& grid, const GenConfig& cfg, std::uint64_t seed) {
  nlohmann::json j;
  j["schema"] = 1;
  j["seed"] = seed;
  j["rows"] = grid.rows;
  j["cols"] = grid.cols;
  j["quadrant_side"] = grid.quadrant_side ? nlohmann::json(*grid.quadrant_side) : nlohmann::json(nullptr);
  j["config"] = {{"length", cfg.length},
                 {"walk_step_sigma", cfg.walk_step_sigma},
                 {"smooth_window", cfg.smooth_window},
                 {"alpha_prev", cfg.alpha_prev},
                 {"domain", {cfg.domain.min, cfg.domain.max}}};
  return j.dump(2) + "\n";
}

}  // namespace compactvis
