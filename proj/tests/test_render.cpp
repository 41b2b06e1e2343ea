#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "compactvis/errors.hpp"
#include "compactvis/render.hpp"
#include "oracles.hpp"

using namespace compactvis;

namespace {

TimeSeries ts(std::vector<double> v) { return TimeSeries(std::move(v)); }

GridLayout random_grid(int rows, int cols, unsigned seed, int len = 72) {
  std::mt19937_64 gen(seed);
  std::vector<TimeSeries> cells;
  for (int i = 0; i < rows * cols; ++i) cells.emplace_back(oracle::random_values(gen, len));
  return GridLayout(rows, cols, std::move(cells));
}

TechniqueStyle style_for(Technique t) {
  TechniqueStyle s;
  s.technique = t;
  return s;
}

const Rgb kRed{255, 0, 0}, kBlue{0, 0, 255}, kWhite{255, 255, 255};

}  // namespace

TEST_CASE("scene graph bookkeeping") {
  SceneGraph s(10, 10);
  s.add(Rect{0, 0, 10, 10}, 5, kRed);
  s.add(Rect{0, 0, 5, 5}, 1, kBlue);
  s.finish();
  CHECK(s.primitives[0].z == 1);
  SceneGraph bad(10, 10);
  bad.add(Rect{0, 0, 11, 10}, 0, kRed);
  CHECK_THROWS_AS(bad.finish(), RangeError);
}

TEST_CASE("rasterizer") {
  SUBCASE("full canvas rectangle") {
    SceneGraph s(7, 5);
    s.add(Rect{0, 0, 7, 5}, 0, kRed);
    s.finish();
    const auto img = rasterize(s);
    CHECK(img.width == 7);
    CHECK(img.height == 5);
    for (const auto& p : img.pixels) CHECK(p == kRed);
    CHECK(rasterize(s, 3).width == 21);
  }
  SUBCASE("higher z wins") {
    SceneGraph s(10, 10);
    s.add(Rect{0, 0, 6, 6}, 2, kBlue);
    s.add(Rect{4, 4, 6, 6}, 1, kRed);
    s.finish();
    const auto img = rasterize(s);
    CHECK(img.at(5, 5) == kBlue);
    CHECK(img.at(8, 8) == kRed);
    CHECK(img.at(8, 1) == kWhite);
  }
  SUBCASE("half-open edges") {
    SceneGraph s(4, 4);
    s.add(Rect{1, 1, 2, 2}, 0, kRed);
    s.finish();
    const auto img = rasterize(s);
    int count = 0;
    for (const auto& p : img.pixels) count += p == kRed;
    CHECK(count == 4);
    CHECK(img.at(1, 1) == kRed);
    CHECK(img.at(3, 3) == kWhite);
  }
  SUBCASE("adjacent polygons neither overlap nor leave gaps") {
    SceneGraph s(10, 10);
    s.add(FilledPolygon{{{0, 0}, {10, 0}, {0, 10}}}, 0, kRed);
    s.add(FilledPolygon{{{10, 0}, {10, 10}, {0, 10}}}, 0, kBlue);
    s.finish();
    const auto owners = rasterize_owners(s);
    for (int o : owners) CHECK(o >= 0);
  }
  SUBCASE("stroked rectangle keeps its stroke inside") {
    SceneGraph s(10, 10);
    s.add(Rect{0, 0, 10, 10, false, 2.0}, 0, kRed);
    s.finish();
    const auto img = rasterize(s);
    CHECK(img.at(0, 0) == kRed);
    CHECK(img.at(1, 5) == kRed);
    CHECK(img.at(2, 5) == kWhite);
    CHECK(img.at(9, 9) == kRed);
  }
  SUBCASE("deterministic") {
    const auto g = random_grid(3, 3, 1);
    const auto scene = render_grid(g, style_for(Technique::BHG), {});
    CHECK(rasterize(scene).pixels == rasterize(scene).pixels);
    CHECK(encode_png(rasterize(scene)) == encode_png(rasterize(scene)));
  }
}

TEST_CASE("svg output") {
  SUBCASE("empty scene") {
    SceneGraph s(24, 24);
    s.finish();
    const auto svg = emit_svg(s);
    CHECK(svg.find("width=\"24\"") != std::string::npos);
    CHECK(svg.find("height=\"24\"") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
  }
  SUBCASE("triangles are three-point polygons") {
    SceneGraph s(10, 10);
    s.add(Triangle{{Point{5, 0}, Point{0, 10}, Point{10, 10}}}, 0, kRed, {Role::Marker});
    s.finish();
    CHECK(emit_svg(s).find("<polygon class=\"marker\" points=\"5.000,0.000 0.000,10.000 10.000,10.000\" "
                           "fill=\"#ff0000\"/>") != std::string::npos);
  }
  SUBCASE("text is escaped") {
    SceneGraph s(10, 10);
    s.add(Text{{1, 5}, "a<b&c"}, 0, kRed);
    s.finish();
    CHECK(emit_svg(s).find("a&lt;b&amp;c") != std::string::npos);
  }
  SUBCASE("same scene twice") {
    const auto g = random_grid(3, 3, 2);
    GridRenderSpec spec;
    spec.marker = MarkerSpec{{40}};
    spec.legend = true;
    CHECK(emit_svg(render_grid(g, style_for(Technique::CHG), spec)) ==
          emit_svg(render_grid(g, style_for(Technique::CHG), spec)));
  }
  SUBCASE("elements follow z order") {
    SceneGraph s(10, 10);
    s.add(Rect{0, 0, 1, 1}, 3, kRed, {Role::Legend});
    s.add(Rect{0, 0, 1, 1}, 1, kRed, {Role::Rule});
    s.finish();
    const auto svg = emit_svg(s);
    CHECK(svg.find("class=\"rule\"") < svg.find("class=\"legend\""));
  }
}

TEST_CASE("png encoding") {
  Image img(3, 2, kBlue);
  const auto png = encode_png(img);
  REQUIRE(png.size() > 8);
  CHECK(png[1] == 'P');
  CHECK(png[2] == 'N');
  CHECK(png[3] == 'G');
  // IHDR width and height, big endian
  CHECK(png[19] == 3);
  CHECK(png[23] == 2);
  CHECK(png[24] == 8);  // bit depth
  CHECK(png[25] == 2);  // RGB
}

TEST_CASE("single stimulus sizes") {
  const auto s = ts(std::vector<double>(72, 50.0));
  for (auto t : kAllTechniques) {
    const auto scene = build_technique(s, style_for(t), 24, 24);
    const auto img = rasterize(scene);
    CHECK(img.width == 24);
    CHECK(img.height == 24);
  }
}

TEST_CASE("grid canvas arithmetic") {
  GridRenderSpec spec;
  const auto style = style_for(Technique::CHG);
  CHECK(grid_canvas_size(3, 3, style, spec) == CanvasSize{80, 80});
  spec.marker = MarkerSpec{{10}};
  CHECK(grid_canvas_size(3, 3, style, spec) == CanvasSize{80, 95});
  spec.legend = true;
  CHECK(grid_canvas_size(3, 3, style, spec) == CanvasSize{80 + 4 + 18, 95});
  CHECK(grid_canvas_size(3, 3, style_for(Technique::HG), spec).width == 80 + 4 + 6);
  CHECK(grid_canvas_size(1, 2, style, spec) == CanvasSize{52 + 22, 29});

  const auto g = random_grid(9, 9, 3);
  GridRenderSpec plain;
  for (int cell : {8, 18, 24}) {
    for (int gap : {0, 4}) {
      plain.cell_px = cell;
      plain.gap_px = gap;
      const auto scene = render_grid(g, style, plain);
      CHECK(scene.width_px == 9 * cell + 8 * gap);
      CHECK(scene.height_px == 9 * cell + 8 * gap);
    }
  }
  plain.cell_px = 7;
  CHECK_THROWS_AS(render_grid(g, style, plain), ConfigError);
}

TEST_CASE("markers") {
  const auto g = random_grid(3, 3, 4);
  GridRenderSpec spec;
  spec.marker = MarkerSpec{{40}};
  SUBCASE("collapsed techniques color the marker by slice") {
    const auto style = style_for(Technique::CHG);
    const auto scene = render_grid(g, style, spec);
    int markers = 0;
    for (const auto& p : scene.primitives) {
      if (p.tag.role != Role::Marker) continue;
      ++markers;
      CHECK(p.color == style.cmap.slice_hue(1));
      // step 40 is sample 16 of 24 in slice 1
      const auto& tri = std::get<Triangle>(p.shape);
      const double local = tri.points[0].x - (p.tag.cell % 3) * 28;
      CHECK(local == doctest::Approx(std::lround(16.0 / 23 * 23) + 0.5));
    }
    CHECK(markers == 9);
  }
  SUBCASE("full-axis techniques use a neutral marker at the global position") {
    const auto scene = render_grid(g, style_for(Technique::HG), spec);
    for (const auto& p : scene.primitives) {
      if (p.tag.role != Role::Marker) continue;
      CHECK(p.color == Rgb{0x33, 0x33, 0x33});
      const auto& tri = std::get<Triangle>(p.shape);
      const double local = tri.points[0].x - (p.tag.cell % 3) * 28;
      CHECK(local == doctest::Approx(std::lround(40.0 / 71 * 23) + 0.5));
    }
  }
  SUBCASE("marker apex columns") {
    for (int step = 0; step < 72; ++step)
      CHECK(marker_column(step, 72, style_for(Technique::CBP), 24) == std::lround(step / 71.0 * 23));
    CHECK(marker_column(0, 72, style_for(Technique::BHG), 24) == 0);
    CHECK(marker_column(23, 72, style_for(Technique::BHG), 24) == 23);
    CHECK(marker_column(24, 72, style_for(Technique::BHG), 24) == 0);
    CHECK_THROWS_AS(marker_column(72, 72, style_for(Technique::HG), 24), RangeError);
  }
  SUBCASE("per-graph markers need one step per graph") {
    spec.marker = MarkerSpec{{1, 2}};
    CHECK_THROWS_AS(render_grid(g, style_for(Technique::HG), spec), ConfigError);
  }
}

TEST_CASE("highlight and quadrant rules") {
  GridRenderSpec spec;
  spec.highlight = 4;
  const auto scene = render_grid(random_grid(3, 3, 5), style_for(Technique::CBP), spec);
  int found = 0;
  for (const auto& p : scene.primitives) {
    if (p.tag.role != Role::Highlight) continue;
    ++found;
    const auto& r = std::get<Rect>(p.shape);
    CHECK_FALSE(r.filled);
    CHECK(r.x < 28);
    CHECK(r.x + r.w > 52);
    CHECK(r.y < 28);
    CHECK(r.y + r.h > 52);
  }
  CHECK(found == 1);
  spec.highlight = 9;
  CHECK_THROWS_AS(render_grid(random_grid(3, 3, 5), style_for(Technique::CBP), spec), RangeError);

  std::mt19937_64 gen(6);
  std::vector<TimeSeries> cells;
  for (int i = 0; i < 81; ++i) cells.emplace_back(oracle::random_values(gen, 72));
  GridRenderSpec rules;
  rules.quadrant_rules = true;
  const auto q = render_grid(GridLayout::square(9, cells, 3), style_for(Technique::HG), rules);
  int rule_count = 0;
  for (const auto& p : q.primitives) rule_count += p.tag.role == Role::Rule;
  CHECK(rule_count == 4);
}
