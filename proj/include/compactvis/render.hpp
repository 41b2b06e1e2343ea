#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "compactvis/core.hpp"
#include "compactvis/scene.hpp"
#include "compactvis/techniques.hpp"

namespace compactvis {

/// 8-bit RGB raster, row-major from the top-left pixel.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;

  Image() = default;
  Image(int w, int h, Rgb fill = {255, 255, 255});

  Rgb at(int x, int y) const { return pixels[static_cast<std::size_t>(y * width + x)]; }
  Rgb& at(int x, int y) { return pixels[static_cast<std::size_t>(y * width + x)]; }
};

/// Painter's algorithm without anti-aliasing. Polygons use non-zero winding
/// sampled at pixel centers with half-open edges (top-left ownership).
/// Text primitives are vector-only and skipped here.
Image rasterize(const SceneGraph& scene, int scale = 1, Rgb background = {255, 255, 255});

/// Same coverage as rasterize(), recording the index of the primitive that
/// owns each pixel (-1 for background).
std::vector<int> rasterize_owners(const SceneGraph& scene, int scale = 1);

/// SVG document, one element per primitive in z order, 3-decimal coordinates.
std::string emit_svg(const SceneGraph& scene);

std::vector<std::uint8_t> encode_png(const Image& image);
void write_png(const Image& image, const std::filesystem::path& path);

/// Marker beneath the graphs: one shared step or one step per cell.
struct MarkerSpec {
  std::vector<int> steps;
};

struct GridRenderSpec {
  int cell_px = 24;
  int gap_px = 4;
  int marker_strip_px = 5;
  std::optional<MarkerSpec> marker;
  std::optional<int> highlight;
  bool quadrant_rules = false;
  bool legend = false;
  int legend_swatch_px = 6;

  void validate() const;
};

struct CanvasSize {
  int width = 0;
  int height = 0;
  friend bool operator==(const CanvasSize&, const CanvasSize&) = default;
};

/// Legend panel width: a gap plus one swatch column per slice (CHG/BHG) or a
/// single column (CBP/HG).
int legend_width(const TechniqueStyle& style, const GridRenderSpec& spec);

/// rows * (cell + strip) + (rows - 1) * gap high; cols * cell + (cols - 1) * gap
/// wide, plus the legend panel. The strip is present only with markers.
CanvasSize grid_canvas_size(int rows, int cols, const TechniqueStyle& style, const GridRenderSpec& spec);

/// Pixel column of a marker's apex inside its cell. CBP and HG use the full
/// time axis; the collapsed techniques use the step's position in its slice.
int marker_column(int step, int steps, const TechniqueStyle& style, int cell_px);

/// Composes per-cell scenes plus markers, highlight box, quadrant rules and legend.
SceneGraph render_grid(const GridLayout& grid, const TechniqueStyle& style, const GridRenderSpec& spec);

}  // namespace compactvis
