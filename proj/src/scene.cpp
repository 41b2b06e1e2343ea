#include "compactvis/scene.hpp"

#include <algorithm>
#include <cstdio>

#include "compactvis/errors.hpp"

namespace compactvis {

std::string Rgb::hex() const {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

Rgb Rgb::from_hex(const std::string& hex) {
  unsigned r = 0, g = 0, b = 0;
  if (hex.size() != 7 || hex[0] != '#' || std::sscanf(hex.c_str() + 1, "%2x%2x%2x", &r, &g, &b) != 3) {
    throw ConfigError("bad color '" + hex + "', expected #rrggbb");
  }
  return {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)};
}

SceneGraph::SceneGraph(int w, int h) : width_px(w), height_px(h) {
  if (w < 1 || h < 1) throw ConfigError("scene size must be positive");
}

void SceneGraph::add(Shape shape, int z, Rgb color, Tag tag) {
  primitives.push_back({std::move(shape), z, color, tag});
}

std::vector<Point> vertices_of(const Shape& shape) {
  return std::visit(
      [](const auto& s) -> std::vector<Point> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FilledPolygon> || std::is_same_v<T, Polyline>) {
          return s.points;
        } else if constexpr (std::is_same_v<T, Triangle>) {
          return {s.points.begin(), s.points.end()};
        } else if constexpr (std::is_same_v<T, Rect>) {
          return {{s.x, s.y}, {s.x + s.w, s.y}, {s.x + s.w, s.y + s.h}, {s.x, s.y + s.h}};
        } else {
          return {s.anchor};
        }
      },
      shape);
}

void SceneGraph::finish() {
  std::stable_sort(primitives.begin(), primitives.end(),
                   [](const Primitive& a, const Primitive& b) { return a.z < b.z; });
  constexpr double eps = 1e-9;
  for (const auto& p : primitives) {
    for (const auto& v : vertices_of(p.shape)) {
      if (v.x < -eps || v.y < -eps || v.x > width_px + eps || v.y > height_px + eps) {
        throw RangeError("vertex (" + std::to_string(v.x) + ", " + std::to_string(v.y) + ") outside " +
                         std::to_string(width_px) + "x" + std::to_string(height_px) + " canvas");
      }
    }
  }
}

void append_translated(SceneGraph& into, const SceneGraph& part, double dx, double dy, int cell) {
  auto shift = [&](Point p) { return Point{p.x + dx, p.y + dy}; };
  for (const auto& prim : part.primitives) {
    Primitive copy = prim;
    std::visit(
        [&](auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, FilledPolygon> || std::is_same_v<T, Polyline>) {
            for (auto& p : s.points) p = shift(p);
          } else if constexpr (std::is_same_v<T, Triangle>) {
            for (auto& p : s.points) p = shift(p);
          } else if constexpr (std::is_same_v<T, Rect>) {
            s.x += dx;
            s.y += dy;
          } else {
            s.anchor = shift(s.anchor);
          }
        },
        copy.shape);
    if (cell >= 0) copy.tag.cell = cell;
    into.primitives.push_back(std::move(copy));
  }
}

}  // namespace compactvis
