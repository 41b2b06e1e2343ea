#pragma once

#include <span>
#include <vector>

#include "compactvis/colormap.hpp"
#include "compactvis/core.hpp"
#include "compactvis/scene.hpp"
#include "compactvis/study.hpp"

namespace compactvis {

/// Which slice ends up in front when the slices of a band are collapsed.
enum class SliceOrdering { FrontFirstSlice, FrontLastSlice };

struct BandSliceConfig {
  int bands = 3;
  int slices = 3;
  ValueDomain domain;
  SliceOrdering ordering = SliceOrdering::FrontFirstSlice;

  double band_height() const noexcept { return domain.span() / bands; }
  void validate() const;
};

/// Portion of every sample that falls inside one band, in [0, band height].
struct BandResidual {
  int band = 0;
  std::vector<double> residuals;
};

std::vector<BandResidual> band_decompose(const TimeSeries& s, int bands, const ValueDomain& domain);

struct Footprint {
  int width = 0;
  int height = 0;
  friend bool operator==(const Footprint&, const Footprint&) = default;
};

/// Collapsed size of a line graph: ceil(w / S) x ceil(h / B).
Footprint collapsed_footprint(int line_width, int line_height, int bands, int slices);
/// Horizon graph size: shrunk width, ceil(h / B) height.
Footprint horizon_footprint(int shrunk_width, int line_height, int bands);

/// Filled area under the plain line graph (the uncompressed reference).
SceneGraph build_line_graph(const TimeSeries& s, const ValueDomain& domain, int width_px, int height_px,
                            Rgb color = {0x52, 0x52, 0x52});

struct BoxplotStyle {
  Rgb range{0xde, 0xde, 0xde};
  Rgb quartiles{0x9e, 0x9e, 0x9e};
  Rgb median{0x25, 0x25, 0x25};
  double median_width = 1.0;
};

/// Compact boxplot: min-max band, interquartile band and median line, one
/// vertex per aggregation interval at the interval's temporal midpoint.
SceneGraph build_cbp(const TimeSeries& s, const ValueDomain& domain, int interval_len, int width_px, int height_px,
                     const BoxplotStyle& style = {});

/// Horizon graph without mirroring: band b drawn with z = b over the full width.
SceneGraph build_hg(const TimeSeries& s, int bands, const ValueDomain& domain, std::span<const Rgb> band_colors,
                    int width_px, int height_px);

/// Residual curve of one cell over the collapsed x-range [0, width]. The
/// y values are residuals in data units, not pixels. Sample points and the
/// points where the series crosses a band edge are both vertices.
struct CellCurve {
  int band = 0;
  int slice = 0;
  std::vector<Point> points;

  double value_at(double x) const;
};

/// Cuts every band residual into slices and maps each slice onto [0, width].
std::vector<CellCurve> collapsed_cells(const TimeSeries& s, const BandSliceConfig& cfg, double width);

/// Rank of a slice in the collapse order; the front slice has rank S - 1.
int front_rank(int slice, int slices, SliceOrdering ordering) noexcept;

/// Collapsed horizon graph: fill pass with z = front_rank * B + band, then a
/// contour pass of every cell's upper outline on top of all fills.
SceneGraph build_chg(const TimeSeries& s, const BandSliceConfig& cfg, const BivariateColorMap& cmap, int width_px,
                     int height_px);

/// Piece of a cell between two consecutive braid boundaries.
struct CellSegment {
  int band = 0;
  int slice = 0;
  double x0 = 0.0;
  double x1 = 0.0;
  std::vector<Point> points;  ///< residual values, as in CellCurve
  double mean_residual = 0.0;
  int z = 0;
};

struct Braid {
  /// Crossing and touching positions between any two cells, ascending.
  std::vector<double> intersections;
  std::vector<CellSegment> segments;
};

/// Splits every cell at the union of pairwise intersections and orders the
/// pieces of each sub-interval so that larger mean residual lies behind.
/// Ties go to (band, slice) ascending, i.e. the lower pair is drawn first.
/// All curves must span the same x-range.
Braid braid_cells(std::span<const CellCurve> cells);

/// Braided collapsed horizon graph; no contour pass.
SceneGraph build_bhg(const TimeSeries& s, const BandSliceConfig& cfg, const BivariateColorMap& cmap, int width_px,
                     int height_px);

/// Everything needed to draw one series with any of the four techniques.
struct TechniqueStyle {
  Technique technique = Technique::CHG;
  BandSliceConfig bands;
  int interval_len = 3;
  BivariateColorMap cmap = make_colormap(ColorFamily::SeqQual, 3, 3);
  std::vector<Rgb> horizon_colors = sequential_scheme(3);
  BoxplotStyle boxplot;
};

SceneGraph build_technique(const TimeSeries& s, const TechniqueStyle& style, int width_px, int height_px);

}  // namespace compactvis
