#include "compactvis/techniques.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "compactvis/analysis.hpp"
#include "compactvis/datagen.hpp"
#include "compactvis/errors.hpp"

namespace compactvis {

namespace {

constexpr double kMergeTolerance = 1e-9;

double clamp_residual(double v, double base, double h) { return std::clamp(v - base, 0.0, h); }

/// Residual of one band along a run of samples spread evenly over [0, width],
/// with extra vertices where the line crosses the band's lower or upper edge.
std::vector<Point> residual_curve(std::span<const double> v, double base, double h, double width) {
  const std::size_t n = v.size();
  if (n == 1) {
    const double r = clamp_residual(v[0], base, h);
    return {{0.0, r}, {width, r}};
  }
  auto x_of = [&](std::size_t j) { return j + 1 == n ? width : width * static_cast<double>(j) / (n - 1); };
  std::vector<Point> pts;
  pts.reserve(n + 4);
  pts.push_back({0.0, clamp_residual(v[0], base, h)});
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double a = v[j];
    const double b = v[j + 1];
    const double xa = x_of(j);
    const double xb = x_of(j + 1);
    double ts[2];
    int count = 0;
    for (double edge : {base, base + h}) {
      if ((a - edge) * (b - edge) < 0.0) ts[count++] = (edge - a) / (b - a);
    }
    if (count == 2 && ts[1] < ts[0]) std::swap(ts[0], ts[1]);
    for (int k = 0; k < count; ++k) {
      const double t = ts[k];
      pts.push_back({xa + t * (xb - xa), clamp_residual(a + t * (b - a), base, h)});
    }
    pts.push_back({xb, clamp_residual(b, base, h)});
  }
  return pts;
}

double to_pixel_y(double residual, double h, int height_px) { return height_px - residual / h * height_px; }

/// Closed area between a residual curve and the bottom edge.
FilledPolygon area_polygon(std::span<const Point> curve, double h, int height_px) {
  FilledPolygon poly;
  poly.points.reserve(curve.size() + 2);
  poly.points.push_back({curve.front().x, static_cast<double>(height_px)});
  for (const auto& p : curve) poly.points.push_back({p.x, to_pixel_y(p.y, h, height_px)});
  poly.points.push_back({curve.back().x, static_cast<double>(height_px)});
  return poly;
}

double trapezoid_mean(std::span<const Point> pts) {
  const double width = pts.back().x - pts.front().x;
  if (width <= 0.0) return pts.front().y;
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) area += 0.5 * (pts[i].y + pts[i + 1].y) * (pts[i + 1].x - pts[i].x);
  return area / width;
}

void require_slices(const TimeSeries& s, const BandSliceConfig& cfg) {
  cfg.validate();
  if (cfg.slices > static_cast<int>(s.size())) throw ConfigError("more slices than samples");
}

}  // namespace

void BandSliceConfig::validate() const {
  if (bands < 1) throw ConfigError("need at least one band");
  if (slices < 1) throw ConfigError("need at least one slice");
  if (!(domain.min < domain.max)) throw ConfigError("value domain requires min < max");
}

std::vector<BandResidual> band_decompose(const TimeSeries& s, int bands, const ValueDomain& domain) {
  if (bands < 1) throw ConfigError("need at least one band");
  const double h = domain.span() / bands;
  std::vector<BandResidual> out;
  out.reserve(static_cast<std::size_t>(bands));
  for (int b = 0; b < bands; ++b) {
    BandResidual br{b, {}};
    br.residuals.reserve(s.size());
    const double base = domain.min + b * h;
    for (double v : s) br.residuals.push_back(clamp_residual(v, base, h));
    out.push_back(std::move(br));
  }
  return out;
}

Footprint collapsed_footprint(int line_width, int line_height, int bands, int slices) {
  if (bands < 1 || slices < 1) throw ConfigError("need at least one band and one slice");
  return {(line_width + slices - 1) / slices, (line_height + bands - 1) / bands};
}

Footprint horizon_footprint(int shrunk_width, int line_height, int bands) {
  if (bands < 1) throw ConfigError("need at least one band");
  return {shrunk_width, (line_height + bands - 1) / bands};
}

SceneGraph build_line_graph(const TimeSeries& s, const ValueDomain& domain, int width_px, int height_px, Rgb color) {
  SceneGraph scene(width_px, height_px);
  const auto curve = residual_curve(s.values(), domain.min, domain.span(), width_px);
  scene.add(area_polygon(curve, domain.span(), height_px), 0, color, {Role::Fill, 0, 0});
  scene.finish();
  return scene;
}

SceneGraph build_cbp(const TimeSeries& s, const ValueDomain& domain, int interval_len, int width_px, int height_px,
                     const BoxplotStyle& style) {
  const auto stats = summary_stats(s, interval_len);
  SceneGraph scene(width_px, height_px);
  const double steps = static_cast<double>(s.size() - 1);
  auto x_of = [&](const IntervalStats& st) {
    return steps <= 0.0 ? 0.5 * width_px : 0.5 * (st.start_step + st.end_step) / steps * width_px;
  };
  auto y_of = [&](double v) { return height_px - (v - domain.min) / domain.span() * height_px; };

  auto band = [&](double IntervalStats::*lower, double IntervalStats::*upper) {
    FilledPolygon poly;
    for (const auto& st : stats) poly.points.push_back({x_of(st), y_of(st.*upper)});
    for (auto it = stats.rbegin(); it != stats.rend(); ++it) poly.points.push_back({x_of(*it), y_of((*it).*lower)});
    return poly;
  };

  scene.add(band(&IntervalStats::min, &IntervalStats::max), 0, style.range, {Role::Band, 0});
  scene.add(band(&IntervalStats::q1, &IntervalStats::q3), 1, style.quartiles, {Role::Band, 1});
  Polyline median;
  median.width = style.median_width;
  for (const auto& st : stats) median.points.push_back({x_of(st), y_of(st.median)});
  scene.add(std::move(median), 2, style.median, {Role::Contour, 2});
  scene.finish();
  return scene;
}

SceneGraph build_hg(const TimeSeries& s, int bands, const ValueDomain& domain, std::span<const Rgb> band_colors,
                    int width_px, int height_px) {
  if (bands < 1) throw ConfigError("need at least one band");
  if (band_colors.size() < static_cast<std::size_t>(bands)) throw ConfigError("one color per band required");
  SceneGraph scene(width_px, height_px);
  const double h = domain.span() / bands;
  for (int b = 0; b < bands; ++b) {
    const auto curve = residual_curve(s.values(), domain.min + b * h, h, width_px);
    scene.add(area_polygon(curve, h, height_px), b, band_colors[static_cast<std::size_t>(b)], {Role::Fill, b, 0});
  }
  scene.finish();
  return scene;
}

double CellCurve::value_at(double x) const {
  if (x <= points.front().x) return points.front().y;
  if (x >= points.back().x) return points.back().y;
  const auto it = std::upper_bound(points.begin(), points.end(), x, [](double v, const Point& p) { return v < p.x; });
  const Point& hi = *it;
  const Point& lo = *(it - 1);
  if (hi.x == lo.x) return hi.y;
  return lo.y + (hi.y - lo.y) * (x - lo.x) / (hi.x - lo.x);
}

std::vector<CellCurve> collapsed_cells(const TimeSeries& s, const BandSliceConfig& cfg, double width) {
  require_slices(s, cfg);
  const int steps = static_cast<int>(s.size());
  const double h = cfg.band_height();
  std::vector<CellCurve> cells;
  cells.reserve(static_cast<std::size_t>(cfg.bands * cfg.slices));
  for (int b = 0; b < cfg.bands; ++b) {
    for (int sl = 0; sl < cfg.slices; ++sl) {
      const auto range = slice_range(steps, cfg.slices, sl);
      const auto part = s.values().subspan(static_cast<std::size_t>(range.start_step),
                                           static_cast<std::size_t>(range.end_step - range.start_step + 1));
      cells.push_back({b, sl, residual_curve(part, cfg.domain.min + b * h, h, width)});
    }
  }
  return cells;
}

int front_rank(int slice, int slices, SliceOrdering ordering) noexcept {
  return ordering == SliceOrdering::FrontFirstSlice ? slices - 1 - slice : slice;
}

SceneGraph build_chg(const TimeSeries& s, const BandSliceConfig& cfg, const BivariateColorMap& cmap, int width_px,
                     int height_px) {
  const auto cells = collapsed_cells(s, cfg, width_px);
  const double h = cfg.band_height();
  const int fill_layers = cfg.bands * cfg.slices;
  SceneGraph scene(width_px, height_px);
  for (const auto& cell : cells) {
    const int z = front_rank(cell.slice, cfg.slices, cfg.ordering) * cfg.bands + cell.band;
    const Rgb color = cmap.at(cell.band, cell.slice);
    scene.add(area_polygon(cell.points, h, height_px), z, color, {Role::Fill, cell.band, cell.slice});

    // outline runs; stretches lying on the baseline carry no shape and are left out
    Polyline run;
    auto flush = [&] {
      if (run.points.size() >= 2) scene.add(run, fill_layers + z, color, {Role::Contour, cell.band, cell.slice});
      run.points.clear();
    };
    for (std::size_t i = 0; i + 1 < cell.points.size(); ++i) {
      const auto& a = cell.points[i];
      const auto& b = cell.points[i + 1];
      if (a.y > 0.0 || b.y > 0.0) {
        if (run.points.empty()) run.points.push_back({a.x, to_pixel_y(a.y, h, height_px)});
        run.points.push_back({b.x, to_pixel_y(b.y, h, height_px)});
      } else {
        flush();
      }
    }
    flush();
  }
  scene.finish();
  return scene;
}

Braid braid_cells(std::span<const CellCurve> cells) {
  Braid out;
  if (cells.empty()) return out;
  const double x_lo = cells.front().points.front().x;
  const double x_hi = cells.front().points.back().x;
  for (const auto& c : cells) {
    if (c.points.size() < 2 || std::abs(c.points.front().x - x_lo) > kMergeTolerance ||
        std::abs(c.points.back().x - x_hi) > kMergeTolerance) {
      throw ShapeError("braided cells must span the same x-range");
    }
  }

  auto merge_sorted = [](std::vector<double>& xs) {
    std::sort(xs.begin(), xs.end());
    std::vector<double> merged;
    for (double x : xs)
      if (merged.empty() || x - merged.back() > kMergeTolerance) merged.push_back(x);
    xs = std::move(merged);
  };

  std::vector<double> xs;
  for (const auto& c : cells)
    for (const auto& p : c.points) xs.push_back(p.x);
  merge_sorted(xs);

  const std::size_t n = cells.size();
  // values of every cell at every shared vertex position
  std::vector<std::vector<double>> at(xs.size(), std::vector<double>(n));
  for (std::size_t k = 0; k < xs.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) at[k][i] = cells[i].value_at(xs[k]);

  std::vector<double> hits;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = at[k][i] - at[k][j];
        if (k + 1 < xs.size()) {
          const double d_next = at[k + 1][i] - at[k + 1][j];
          if ((d > 0.0 && d_next < 0.0) || (d < 0.0 && d_next > 0.0))
            hits.push_back(xs[k] + (xs[k + 1] - xs[k]) * d / (d - d_next));
        }
        // touching: a tie that starts, ends or is isolated here
        if (d == 0.0 && k > 0 && k + 1 < xs.size()) {
          const double d_prev = at[k - 1][i] - at[k - 1][j];
          const double d_next = at[k + 1][i] - at[k + 1][j];
          if (d_prev != 0.0 || d_next != 0.0) hits.push_back(xs[k]);
        }
      }
    }
  }
  merge_sorted(hits);
  for (double x : hits)
    if (x - x_lo > kMergeTolerance && x_hi - x > kMergeTolerance) out.intersections.push_back(x);

  std::vector<double> bounds;
  bounds.push_back(x_lo);
  bounds.insert(bounds.end(), out.intersections.begin(), out.intersections.end());
  bounds.push_back(x_hi);

  std::vector<std::size_t> order(n);
  std::vector<CellSegment> pieces(n);
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    const double left = bounds[k];
    const double right = bounds[k + 1];
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = cells[i];
      CellSegment seg{c.band, c.slice, left, right, {}, 0.0, 0};
      seg.points.push_back({left, c.value_at(left)});
      for (const auto& p : c.points)
        if (p.x > left + kMergeTolerance && p.x < right - kMergeTolerance) seg.points.push_back(p);
      seg.points.push_back({right, c.value_at(right)});
      seg.mean_residual = trapezoid_mean(seg.points);
      pieces[i] = std::move(seg);
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto& pa = pieces[a];
      const auto& pb = pieces[b];
      if (pa.mean_residual != pb.mean_residual) return pa.mean_residual > pb.mean_residual;
      if (pa.band != pb.band) return pa.band < pb.band;
      return pa.slice < pb.slice;
    });
    for (std::size_t rank = 0; rank < n; ++rank) {
      auto& seg = pieces[order[rank]];
      seg.z = static_cast<int>(k * n + rank);
      out.segments.push_back(std::move(seg));
    }
  }
  return out;
}

SceneGraph build_bhg(const TimeSeries& s, const BandSliceConfig& cfg, const BivariateColorMap& cmap, int width_px,
                     int height_px) {
  const auto cells = collapsed_cells(s, cfg, width_px);
  const double h = cfg.band_height();
  const auto braid = braid_cells(cells);
  SceneGraph scene(width_px, height_px);
  for (const auto& seg : braid.segments)
    scene.add(area_polygon(seg.points, h, height_px), seg.z, cmap.at(seg.band, seg.slice),
              {Role::Segment, seg.band, seg.slice});
  scene.finish();
  return scene;
}

SceneGraph build_technique(const TimeSeries& s, const TechniqueStyle& style, int width_px, int height_px) {
  const auto& bs = style.bands;
  switch (style.technique) {
    case Technique::CBP: return build_cbp(s, bs.domain, style.interval_len, width_px, height_px, style.boxplot);
    case Technique::HG: return build_hg(s, bs.bands, bs.domain, style.horizon_colors, width_px, height_px);
    case Technique::CHG: return build_chg(s, bs, style.cmap, width_px, height_px);
    case Technique::BHG: return build_bhg(s, bs, style.cmap, width_px, height_px);
  }
  throw ConfigError("unknown technique");
}

}  // namespace compactvis
