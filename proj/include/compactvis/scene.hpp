#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace compactvis {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  std::string hex() const;
  static Rgb from_hex(const std::string& hex);

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Pixel coordinates, y grows downward.
struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct FilledPolygon {
  std::vector<Point> points;
};

struct Polyline {
  std::vector<Point> points;
  double width = 1.0;
};

struct Triangle {
  std::array<Point, 3> points;
};

/// Axis-aligned rectangle; stroked rectangles keep the stroke inside the bounds.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  bool filled = true;
  double stroke_width = 1.0;
};

struct Text {
  Point anchor;
  std::string text;
  double size = 6.0;
};

using Shape = std::variant<FilledPolygon, Polyline, Triangle, Rect, Text>;

enum class Role { Plain, Fill, Contour, Segment, Band, Marker, Highlight, Rule, Legend, Background };

/// What a primitive depicts. band/slice are -1 when not applicable.
struct Tag {
  Role role = Role::Plain;
  int band = -1;
  int slice = -1;
  int cell = -1;  ///< grid cell index in composed scenes
};

struct Primitive {
  Shape shape;
  int z = 0;
  Rgb color;
  Tag tag;
};

/// Renderer-independent drawing: primitives ascending by z.
struct SceneGraph {
  int width_px = 0;
  int height_px = 0;
  std::vector<Primitive> primitives;

  SceneGraph() = default;
  SceneGraph(int w, int h);

  void add(Shape shape, int z, Rgb color, Tag tag = {});

  /// Stable-sorts by z and checks every vertex lies inside the canvas.
  /// Throws RangeError otherwise.
  void finish();
};

/// Every vertex of a shape, including rectangle corners and the text anchor.
std::vector<Point> vertices_of(const Shape& shape);

/// Copies `part` into `into` shifted by (dx, dy); z and tags are preserved,
/// `cell` is overwritten when non-negative.
void append_translated(SceneGraph& into, const SceneGraph& part, double dx, double dy, int cell = -1);

}  // namespace compactvis
