#include "compactvis/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include <png.h>

#include "compactvis/datagen.hpp"
#include "compactvis/errors.hpp"
#include "compactvis/format.hpp"

namespace compactvis {

Image::Image(int w, int h, Rgb fill) : width(w), height(h), pixels(static_cast<std::size_t>(w * h), fill) {}

namespace {

struct Crossing {
  double x;
  int dir;
};

/// Calls `plot(x, y)` for every pixel center inside the polygon.
template <typename Plot>
void fill_polygon(std::span<const Point> pts, int width, int height, Plot&& plot) {
  if (pts.size() < 3) return;
  double ymin = pts[0].y, ymax = pts[0].y;
  for (const auto& p : pts) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const int row_begin = std::max(0, static_cast<int>(std::ceil(ymin - 0.5)));
  const int row_end = std::min(height, static_cast<int>(std::ceil(ymax - 0.5)));
  std::vector<Crossing> xs;
  for (int py = row_begin; py < row_end; ++py) {
    const double yc = py + 0.5;
    xs.clear();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Point& a = pts[i];
      const Point& b = pts[(i + 1) % pts.size()];
      if (a.y == b.y) continue;
      const bool down = b.y > a.y;
      const double y0 = down ? a.y : b.y;
      const double y1 = down ? b.y : a.y;
      if (yc < y0 || yc >= y1) continue;
      xs.push_back({a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y), down ? 1 : -1});
    }
    std::sort(xs.begin(), xs.end(), [](const Crossing& l, const Crossing& r) { return l.x < r.x; });
    int winding = 0;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      winding += xs[k].dir;
      if (winding == 0) continue;
      const int x_begin = std::max(0, static_cast<int>(std::ceil(xs[k].x - 0.5)));
      const int x_end = std::min(width, static_cast<int>(std::ceil(xs[k + 1].x - 0.5)));
      for (int px = x_begin; px < x_end; ++px) plot(px, py);
    }
  }
}

std::vector<Point> rect_points(double x, double y, double w, double h) {
  return {{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}};
}

/// Filled outlines covering a primitive, in scaled pixel coordinates.
std::vector<std::vector<Point>> coverage_polygons(const Shape& shape, double scale) {
  std::vector<std::vector<Point>> out;
  auto sc = [scale](Point p) { return Point{p.x * scale, p.y * scale}; };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FilledPolygon>) {
          std::vector<Point> poly;
          for (const auto& p : s.points) poly.push_back(sc(p));
          out.push_back(std::move(poly));
        } else if constexpr (std::is_same_v<T, Triangle>) {
          out.push_back({sc(s.points[0]), sc(s.points[1]), sc(s.points[2])});
        } else if constexpr (std::is_same_v<T, Polyline>) {
          const double half = 0.5 * s.width * scale;
          for (std::size_t i = 0; i + 1 < s.points.size(); ++i) {
            const Point a = sc(s.points[i]);
            const Point b = sc(s.points[i + 1]);
            const double dx = b.x - a.x, dy = b.y - a.y;
            const double len = std::hypot(dx, dy);
            if (len == 0.0) continue;
            const double nx = -dy / len * half, ny = dx / len * half;
            out.push_back({{a.x + nx, a.y + ny}, {b.x + nx, b.y + ny}, {b.x - nx, b.y - ny}, {a.x - nx, a.y - ny}});
          }
          // round joins, as an octagon around each interior vertex
          for (std::size_t i = 1; i + 1 < s.points.size(); ++i) {
            const Point c = sc(s.points[i]);
            std::vector<Point> join;
            for (int k = 0; k < 8; ++k) {
              const double t = (k + 0.5) * std::numbers::pi / 4.0;
              join.push_back({c.x + half * std::cos(t), c.y + half * std::sin(t)});
            }
            out.push_back(std::move(join));
          }
        } else if constexpr (std::is_same_v<T, Rect>) {
          const double x = s.x * scale, y = s.y * scale, w = s.w * scale, h = s.h * scale;
          if (s.filled) {
            out.push_back(rect_points(x, y, w, h));
          } else {
            const double t = std::min({s.stroke_width * scale, 0.5 * w, 0.5 * h});
            out.push_back(rect_points(x, y, w, t));
            out.push_back(rect_points(x, y + h - t, w, t));
            out.push_back(rect_points(x, y + t, t, h - 2 * t));
            out.push_back(rect_points(x + w - t, y + t, t, h - 2 * t));
          }
        }
      },
      shape);
  return out;
}

template <typename Plot>
void cover_scene(const SceneGraph& scene, int scale, Plot&& plot) {
  if (scale < 1) throw RangeError("raster scale must be at least 1");
  const int w = scene.width_px * scale;
  const int h = scene.height_px * scale;
  for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
    for (const auto& poly : coverage_polygons(scene.primitives[i].shape, scale))
      fill_polygon(poly, w, h, [&](int x, int y) { plot(i, x, y); });
  }
}

std::string points_attr(std::span<const Point> pts) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += format_fixed(pts[i].x, 3);
    out += ',';
    out += format_fixed(pts[i].y, 3);
  }
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string class_attr(const Tag& tag) {
  static constexpr const char* names[] = {"plain",  "fill",      "contour", "segment", "band",
                                          "marker", "highlight", "rule",    "legend",  "background"};
  std::string out = names[static_cast<int>(tag.role)];
  if (tag.band >= 0) out += " b" + std::to_string(tag.band);
  if (tag.slice >= 0) out += " s" + std::to_string(tag.slice);
  if (tag.cell >= 0) out += " c" + std::to_string(tag.cell);
  return out;
}

}  // namespace

Image rasterize(const SceneGraph& scene, int scale, Rgb background) {
  Image img(scene.width_px * scale, scene.height_px * scale, background);
  cover_scene(scene, scale, [&](std::size_t i, int x, int y) { img.at(x, y) = scene.primitives[i].color; });
  return img;
}

std::vector<int> rasterize_owners(const SceneGraph& scene, int scale) {
  const int w = scene.width_px * scale;
  std::vector<int> owners(static_cast<std::size_t>(w * scene.height_px * scale), -1);
  cover_scene(scene, scale,
              [&](std::size_t i, int x, int y) { owners[static_cast<std::size_t>(y * w + x)] = static_cast<int>(i); });
  return owners;
}

std::string emit_svg(const SceneGraph& scene) {
  const auto w = std::to_string(scene.width_px);
  const auto h = std::to_string(scene.height_px);
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + w + "\" height=\"" + h + "\" viewBox=\"0 0 " + w +
         " " + h + "\" shape-rendering=\"crispEdges\">\n";
  for (const auto& prim : scene.primitives) {
    const std::string color = prim.color.hex();
    const std::string cls = " class=\"" + class_attr(prim.tag) + "\"";
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, FilledPolygon>) {
            out += "<polygon" + cls + " points=\"" + points_attr(s.points) + "\" fill=\"" + color + "\"/>\n";
          } else if constexpr (std::is_same_v<T, Triangle>) {
            out += "<polygon" + cls + " points=\"" + points_attr(s.points) + "\" fill=\"" + color + "\"/>\n";
          } else if constexpr (std::is_same_v<T, Polyline>) {
            out += "<polyline" + cls + " points=\"" + points_attr(s.points) + "\" fill=\"none\" stroke=\"" + color +
                   "\" stroke-linejoin=\"round\" stroke-width=\"" + format_fixed(s.width, 3) + "\"/>\n";
          } else if constexpr (std::is_same_v<T, Rect>) {
            if (s.filled) {
              out += "<rect" + cls + " x=\"" + format_fixed(s.x, 3) + "\" y=\"" + format_fixed(s.y, 3) +
                     "\" width=\"" + format_fixed(s.w, 3) + "\" height=\"" + format_fixed(s.h, 3) + "\" fill=\"" +
                     color + "\"/>\n";
            } else {
              // inset by half the stroke so the outer edge matches the bounds
              const double half = 0.5 * s.stroke_width;
              out += "<rect" + cls + " x=\"" + format_fixed(s.x + half, 3) + "\" y=\"" + format_fixed(s.y + half, 3) +
                     "\" width=\"" + format_fixed(s.w - s.stroke_width, 3) + "\" height=\"" +
                     format_fixed(s.h - s.stroke_width, 3) + "\" fill=\"none\" stroke=\"" + color +
                     "\" stroke-width=\"" + format_fixed(s.stroke_width, 3) + "\"/>\n";
            }
          } else {
            out += "<text" + cls + " x=\"" + format_fixed(s.anchor.x, 3) + "\" y=\"" + format_fixed(s.anchor.y, 3) +
                   "\" font-family=\"sans-serif\" font-size=\"" + format_fixed(s.size, 3) + "\" fill=\"" + color +
                   "\">" + xml_escape(s.text) + "</text>\n";
          }
        },
        prim.shape);
  }
  out += "</svg>\n";
  return out;
}

std::vector<std::uint8_t> encode_png(const Image& image) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw FileError("png: cannot allocate writer");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw FileError("png: cannot allocate info");
  }
  std::vector<std::uint8_t> out;
  std::vector<png_bytep> rows(static_cast<std::size_t>(image.height));
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(image.width * image.height * 3));
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    raw[3 * i] = image.pixels[i].r;
    raw[3 * i + 1] = image.pixels[i].g;
    raw[3 * i + 2] = image.pixels[i].b;
  }
  for (int y = 0; y < image.height; ++y) rows[static_cast<std::size_t>(y)] = raw.data() + y * image.width * 3;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw FileError("png: encoding failed");
  }
  png_set_write_fn(
      png, &out,
      [](png_structp p, png_bytep data, png_size_t len) {
        auto* buf = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(p));
        buf->insert(buf->end(), data, data + len);
      },
      nullptr);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 9);
  png_set_rows(png, info, rows.data());
  png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void write_png(const Image& image, const std::filesystem::path& path) {
  const auto bytes = encode_png(image);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FileError("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw FileError("cannot write " + path.string());
}

void GridRenderSpec::validate() const {
  if (cell_px < 8) throw ConfigError("cell size must be at least 8 px");
  if (gap_px < 0 || marker_strip_px < 0) throw ConfigError("gap and marker strip must be non-negative");
  if (legend_swatch_px < 1) throw ConfigError("legend swatch must be at least 1 px");
}

namespace {

bool collapsed(Technique t) { return t == Technique::CHG || t == Technique::BHG; }

constexpr int kOverlayZ = 1 << 28;
const Rgb kNeutralMarker{0x33, 0x33, 0x33};
const Rgb kHighlight{0xff, 0x7f, 0x00};
const Rgb kRule{0x40, 0x40, 0x40};

}  // namespace

int legend_width(const TechniqueStyle& style, const GridRenderSpec& spec) {
  const int columns = collapsed(style.technique) ? style.bands.slices : 1;
  return spec.gap_px + columns * spec.legend_swatch_px;
}

CanvasSize grid_canvas_size(int rows, int cols, const TechniqueStyle& style, const GridRenderSpec& spec) {
  spec.validate();
  const int strip = spec.marker ? spec.marker_strip_px : 0;
  CanvasSize size{cols * spec.cell_px + (cols - 1) * spec.gap_px, rows * (spec.cell_px + strip) + (rows - 1) * spec.gap_px};
  if (spec.legend) size.width += legend_width(style, spec);
  return size;
}

int marker_column(int step, int steps, const TechniqueStyle& style, int cell_px) {
  if (step < 0 || step >= steps) throw RangeError("marker step " + std::to_string(step) + " out of range");
  if (!collapsed(style.technique)) {
    return static_cast<int>(std::lround(static_cast<double>(step) / (steps - 1) * (cell_px - 1)));
  }
  const int s = slice_of_step(steps, style.bands.slices, step);
  const auto range = slice_range(steps, style.bands.slices, s);
  const int len = range.end_step - range.start_step;
  if (len == 0) return (cell_px - 1) / 2;
  return static_cast<int>(std::lround(static_cast<double>(step - range.start_step) / len * (cell_px - 1)));
}

SceneGraph render_grid(const GridLayout& grid, const TechniqueStyle& style, const GridRenderSpec& spec) {
  const auto size = grid_canvas_size(grid.rows, grid.cols, style, spec);
  SceneGraph scene(size.width, size.height);
  const int strip = spec.marker ? spec.marker_strip_px : 0;
  const int col_pitch = spec.cell_px + spec.gap_px;
  const int row_pitch = spec.cell_px + strip + spec.gap_px;
  const int grid_width = grid.cols * spec.cell_px + (grid.cols - 1) * spec.gap_px;
  const int grid_height = size.height;

  if (spec.marker) {
    const auto& steps = spec.marker->steps;
    if (steps.size() != 1 && steps.size() != grid.size())
      throw ConfigError("marker needs one shared step or one step per graph");
  }
  if (spec.highlight && (*spec.highlight < 0 || *spec.highlight >= static_cast<int>(grid.size())))
    throw RangeError("highlighted graph outside the grid");

  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      const int idx = r * grid.cols + c;
      const auto& series = grid.cells[static_cast<std::size_t>(idx)];
      const double ox = c * col_pitch;
      const double oy = r * row_pitch;
      append_translated(scene, build_technique(series, style, spec.cell_px, spec.cell_px), ox, oy, idx);

      if (spec.marker) {
        const auto& steps = spec.marker->steps;
        const int step = steps.size() == 1 ? steps[0] : steps[static_cast<std::size_t>(idx)];
        const int n = static_cast<int>(series.size());
        const double apex = ox + marker_column(step, n, style, spec.cell_px) + 0.5;
        const double top = oy + spec.cell_px;
        const double bottom = top + strip;
        auto cx = [&](double x) { return std::clamp(x, 0.0, static_cast<double>(size.width)); };
        const Rgb color =
            collapsed(style.technique) ? style.cmap.slice_hue(slice_of_step(n, style.bands.slices, step)) : kNeutralMarker;
        scene.add(Triangle{{Point{cx(apex), top}, Point{cx(apex - 2.5), bottom}, Point{cx(apex + 2.5), bottom}}},
                  kOverlayZ, color, {Role::Marker, -1, -1, idx});
      }
    }
  }

  if (spec.highlight) {
    const int idx = *spec.highlight;
    const double g = std::min(2.0, 0.5 * spec.gap_px);
    const double x0 = std::max(0.0, (idx % grid.cols) * col_pitch - g);
    const double y0 = std::max(0.0, (idx / grid.cols) * row_pitch - g);
    const double x1 = std::min(static_cast<double>(grid_width), (idx % grid.cols) * col_pitch + spec.cell_px + g);
    const double y1 = std::min(static_cast<double>(size.height), (idx / grid.cols) * row_pitch + spec.cell_px + g);
    scene.add(Rect{x0, y0, x1 - x0, y1 - y0, false, 2.0}, kOverlayZ + 1, kHighlight, {Role::Highlight, -1, -1, idx});
  }

  if (spec.quadrant_rules && grid.quadrant_side) {
    const int qs = *grid.quadrant_side;
    for (int k = 1; k < grid.quadrants_per_side(); ++k) {
      const double x = k * qs * col_pitch - 0.5 * spec.gap_px - 0.5;
      const double y = k * qs * row_pitch - 0.5 * spec.gap_px - 0.5;
      scene.add(Rect{std::max(0.0, x), 0.0, 1.0, static_cast<double>(grid_height)}, kOverlayZ + 2, kRule, {Role::Rule});
      scene.add(Rect{0.0, std::max(0.0, y), static_cast<double>(grid_width), 1.0}, kOverlayZ + 2, kRule, {Role::Rule});
    }
  }

  if (spec.legend) {
    std::vector<std::vector<Rgb>> rows;  // top row first
    switch (style.technique) {
      case Technique::CBP:
        rows = {{style.boxplot.median}, {style.boxplot.quartiles}, {style.boxplot.range}};
        break;
      case Technique::HG:
        for (int b = style.bands.bands - 1; b >= 0; --b) rows.push_back({style.horizon_colors.at(static_cast<std::size_t>(b))});
        break;
      default:
        for (int b = style.bands.bands - 1; b >= 0; --b) {
          std::vector<Rgb> row;
          for (int s = 0; s < style.bands.slices; ++s) row.push_back(style.cmap.at(b, s));
          rows.push_back(std::move(row));
        }
    }
    const int sw = spec.legend_swatch_px;
    const int sh = std::max(1, std::min(sw, size.height / static_cast<int>(rows.size())));
    const double x0 = grid_width + spec.gap_px;
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < rows[r].size(); ++c)
        scene.add(Rect{x0 + static_cast<double>(c) * sw, static_cast<double>(r) * sh, static_cast<double>(sw),
                       static_cast<double>(sh)},
                  kOverlayZ + 3, rows[r][c], {Role::Legend});
  }

  scene.finish();
  return scene;
}

}  // namespace compactvis
