#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "compactvis/analysis.hpp"
#include "compactvis/core.hpp"
#include "compactvis/rng.hpp"
#include "compactvis/study.hpp"

namespace compactvis {

/// Random-walk parameters. The step sigma and smoothing width are engine
/// defaults tuned for 72 samples drawn at 24 px.
struct GenConfig {
  std::uint64_t seed = 42;
  int length = 72;
  double walk_step_sigma = 4.0;
  int smooth_window = 5;
  double alpha_prev = 0.25;
  ValueDomain domain;

  void validate() const;
};

struct GridCoord {
  int row = 0;
  int col = 0;
  friend bool operator==(const GridCoord&, const GridCoord&) = default;
};

struct HilbertIndex {
  std::int64_t d = 0;
  int order = 1;
};

/// One series: uniform start, Gaussian steps reflected at the domain bounds,
/// then a centered moving average truncated at the ends.
TimeSeries random_walk_series(const GenConfig& cfg, Rng& rng);

/// Pointwise alpha * prev + (1 - alpha) * fresh.
TimeSeries correlate(const TimeSeries& prev, const TimeSeries& fresh, double alpha);

/// Curve distance to (row, col) on a 2^order square.
GridCoord hilbert_d2xy(HilbertIndex idx);

/// Smallest order whose curve covers a side x side grid.
int hilbert_order_for(int side);

/// Visit order of a rows x cols grid: the covering Hilbert curve with
/// positions outside the grid skipped.
std::vector<GridCoord> hilbert_placement(int rows, int cols);

/// Generates rows*cols series in sequence, each correlated with its
/// predecessor, and places series i at the i-th Hilbert position.
GridLayout layout_grid(int rows, int cols, const GenConfig& cfg, Rng& rng,
                       std::optional<int> quadrant_side = std::nullopt);

/// Per-task knobs of dataset generation.
struct TaskConfig {
  TaskRules rules;
  double threshold_min = 60.0;
  double threshold_max = 80.0;
  /// T07 interval length as a fraction of the sample count.
  double interval_fraction = 1.0 / 3.0;
  double range_tolerance = 15.0;
  /// Slices of the collapsed techniques; T08 slice-aligned intervals follow them.
  int slices = 3;
  IntervalKind interval_kind = IntervalKind::FullSpan;
  int max_attempts = 10000;
};

/// Rejection-samples whole grids (with fresh task parameters) until the task
/// predicate holds. Throws GenerationError naming the predicate otherwise.
TaskDataset generate_task_dataset(TaskId task, const GenConfig& cfg, const TaskConfig& tc, Rng& rng);

/// Convenience overload seeding a fresh generator from cfg.seed.
TaskDataset generate_task_dataset(TaskId task, const GenConfig& cfg, const TaskConfig& tc = {});

/// Sample range of slice `s` when `steps` samples are cut into `slices`
/// slices; the last slice takes the remainder.
TimeInterval slice_range(int steps, int slices, int s);
int slice_of_step(int steps, int slices, int step);

/// One row per series in cell order, comma separated, shortest round-trip decimals.
std::string dataset_to_csv(const GridLayout& grid);
GridLayout dataset_from_csv(std::string_view text, int rows, int cols, std::optional<int> quadrant_side = std::nullopt);
/// Parses every row as a series, no grid shape attached.
std::vector<TimeSeries> series_from_csv(std::string_view text);

/// Sidecar JSON naming seed, generator config and grid shape.
std::string dataset_manifest(const GridLayout& grid, const GenConfig& cfg, std::uint64_t seed);

}  // namespace compactvis
