// compactvis: render single stimuli, build study bundles, score result logs.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "compactvis/bundle.hpp"
#include "compactvis/datagen.hpp"
#include "compactvis/errors.hpp"
#include "compactvis/render.hpp"
#include "compactvis/techniques.hpp"

namespace fs = std::filesystem;
using namespace compactvis;

namespace {

struct RenderArgs {
  std::string input;
  int row = 0;
  std::string technique = "chg";
  int bands = 3;
  int slices = 3;
  int interval = 3;
  std::string ordering = "front_first";
  std::string colormap = "seq_qual";
  int size = 24;
  std::string out;
  std::string format;
  int scale = 1;
};

struct BundleArgs {
  std::string config;
  std::uint64_t seed = 42;
  int participants = 4;
  std::string out;
};

struct ScoreArgs {
  std::string bundle;
  std::vector<std::string> logs;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw FileError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes through a temporary name so a failure never leaves a partial file.
void publish(const fs::path& path, const std::string& bytes) {
  const fs::path tmp = path.string() + ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw FileError("write failed: " + path.string());
    }
  }
  fs::rename(tmp, path);
}

int run_render(const RenderArgs& a) {
  const auto series = series_from_csv(slurp(a.input));
  if (a.row < 0 || a.row >= static_cast<int>(series.size()))
    throw RangeError("row " + std::to_string(a.row) + " not in input (" + std::to_string(series.size()) + " rows)");
  const auto& s = series[static_cast<std::size_t>(a.row)];

  TechniqueStyle style;
  style.technique = parse_technique(a.technique);
  style.bands = BandSliceConfig{a.bands, a.slices, ValueDomain{}, parse_ordering(a.ordering)};
  style.bands.validate();
  s.validate(style.bands.domain, TimeDomain(static_cast<int>(s.size())));
  style.interval_len = a.interval;
  style.cmap = make_colormap(parse_color_family(a.colormap), a.bands, a.slices);
  style.horizon_colors = sequential_scheme(a.bands);

  const auto scene = build_technique(s, style, a.size, a.size);
  std::string format = a.format;
  if (format.empty()) format = fs::path(a.out).extension() == ".png" ? "png" : "svg";
  std::string bytes;
  if (format == "svg") {
    bytes = emit_svg(scene);
  } else if (format == "png") {
    const auto png = encode_png(rasterize(scene, a.scale));
    bytes.assign(png.begin(), png.end());
  } else {
    throw ConfigError("unknown format '" + format + "'");
  }
  publish(a.out, bytes);
  return 0;
}

int run_bundle(const BundleArgs& a) {
  const StudyConfig cfg = a.config.empty() ? StudyConfig{} : load_study_config(a.config);
  const auto summary = build_bundle(cfg, a.seed, a.participants, a.out);
  std::cout << "participants " << summary.participants << ", conditions " << summary.conditions << ", datasets "
            << summary.datasets << ", stimulus files " << summary.stimuli << "\n";
  return 0;
}

int run_score(const ScoreArgs& a) {
  std::vector<nlohmann::json> logs;
  for (const auto& path : a.logs) logs.push_back(read_json(path));
  const auto report = score_logs(a.bundle, logs);
  const auto csv = report.to_csv();
  if (a.out.empty() || a.out == "-")
    std::cout << csv;
  else
    publish(a.out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compact time series visualizations: stimuli, study bundles and scoring"};
  app.require_subcommand(1);

  RenderArgs ra;
  auto* render = app.add_subcommand("render", "Render one series with one technique");
  render->add_option("--input", ra.input, "CSV file, one series per row")->required()->check(CLI::ExistingFile);
  render->add_option("--row", ra.row, "Row of the input to draw")->capture_default_str();
  render->add_option("--technique", ra.technique, "cbp, hg, chg or bhg")
      ->capture_default_str()
      ->transform(CLI::IsMember({"CBP", "HG", "CHG", "BHG"}, CLI::ignore_case));
  render->add_option("--bands", ra.bands)->capture_default_str()->check(CLI::PositiveNumber);
  render->add_option("--slices", ra.slices)->capture_default_str()->check(CLI::PositiveNumber);
  render->add_option("--interval", ra.interval, "Aggregation interval of compact boxplots")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  render->add_option("--ordering", ra.ordering)
      ->capture_default_str()
      ->check(CLI::IsMember({"front_first", "front_last"}));
  render->add_option("--colormap", ra.colormap)
      ->capture_default_str()
      ->check(CLI::IsMember({"seq_seq", "seq_qual", "seq_div", "div_div"}));
  render->add_option("--size", ra.size, "Graph side in pixels")->capture_default_str()->check(CLI::PositiveNumber);
  render->add_option("--out", ra.out, "Output file")->required();
  render->add_option("--format", ra.format, "svg or png; default from the output extension")
      ->check(CLI::IsMember({"svg", "png"}));
  render->add_option("--scale", ra.scale, "PNG pixels per unit")->capture_default_str()->check(CLI::Range(1, 64));

  BundleArgs ba;
  auto* bundle = app.add_subcommand("bundle", "Build a study bundle");
  bundle->add_option("--config", ba.config, "Study config JSON")->check(CLI::ExistingFile);
  bundle->add_option("--seed", ba.seed)->capture_default_str();
  bundle->add_option("--participants", ba.participants)->capture_default_str()->check(CLI::PositiveNumber);
  bundle->add_option("--out", ba.out, "Bundle directory")->required();

  ScoreArgs sa;
  auto* score = app.add_subcommand("score", "Score result logs against a bundle");
  score->add_option("--bundle", sa.bundle)->required()->check(CLI::ExistingDirectory);
  score->add_option("--log", sa.logs, "Result log JSON (repeatable)")->required()->check(CLI::ExistingFile);
  score->add_option("--out", sa.out, "CSV report; stdout if omitted");

  CLI11_PARSE(app, argc, argv);

  try {
    if (render->parsed()) return run_render(ra);
    if (bundle->parsed()) return run_bundle(ba);
    if (score->parsed()) return run_score(sa);
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
