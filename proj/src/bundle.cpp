#include "compactvis/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "compactvis/errors.hpp"
#include "compactvis/format.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace compactvis {

namespace {

// Labels folded into the bundle seed; see derive_seed().
constexpr std::uint64_t kConditionStream = 1;
constexpr std::uint64_t kDrawStream = 2;
constexpr std::uint64_t kTrainingStream = 3;

constexpr int kSchema = 1;

std::string hex(Rgb c) { return c.hex(); }

Rgb rgb_from(const json& j, const char* key) {
  try {
    return Rgb::from_hex(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad color for '") + key + "': " + e.what());
  }
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

void write_bytes(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FileError("write failed: " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_bytes(path, j.dump(2) + "\n"); }

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw FileError("cannot create " + dir.string() + ": " + ec.message());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

IntervalKind t08_kind(int repetition) { return static_cast<IntervalKind>(repetition % 3); }

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string technique_blurb(Technique t) {
  switch (t) {
    case Technique::CBP:
      return "Compact boxplot: every 3 time steps are summarized. The light band spans minimum to maximum, "
             "the darker band the middle half of the values, and the line is the median.";
    case Technique::HG:
      return "Horizon graph: the value range is cut into bands that are layered on top of each other. "
             "Darker colors mean higher values.";
    case Technique::CHG:
      return "Collapsed horizon graph: the horizon graph is additionally cut into time slices that are stacked. "
             "Hue tells the slice, shade tells the band. Hidden parts are shown by contour lines.";
    case Technique::BHG:
      return "Braided collapsed horizon graph: like the collapsed horizon graph, but wherever slices overlap, "
             "the smaller value is drawn in front so every point in time stays visible.";
  }
  return {};
}

// Stimulus files for one dataset, written next to each other.
int write_stimulus(const GridLayout& grid, TaskId task, Technique tech, const TaskParams& params,
                   const StudyConfig& cfg, const fs::path& dir, const std::string& stem) {
  const auto scene = render_grid(grid, cfg.style(tech), stimulus_spec(task, tech, params, cfg));
  write_bytes(dir / (stem + ".svg"), emit_svg(scene));
  const auto png = encode_png(rasterize(scene, cfg.png_scale));
  write_bytes(dir / (stem + ".png"), std::string_view(reinterpret_cast<const char*>(png.data()), png.size()));
  return 2;
}

json trial_key_to_json(const TrialSpec& t, const TimeDomain& td) {
  return {{"task", to_string(t.task)},
          {"technique", to_string(t.technique)},
          {"repetition", t.repetition},
          {"dataset", t.dataset.stem},
          {"answer_type", to_string(t.answer_type)},
          {"params", params_to_json(t.params, td)},
          {"key", answer_to_json(t.key)}};
}

}  // namespace

std::string_view to_string(SliceOrdering o) noexcept {
  return o == SliceOrdering::FrontFirstSlice ? "front_first" : "front_last";
}

SliceOrdering parse_ordering(std::string_view s) {
  if (s == "front_first") return SliceOrdering::FrontFirstSlice;
  if (s == "front_last") return SliceOrdering::FrontLastSlice;
  throw ConfigError("unknown slice ordering '" + std::string(s) + "'");
}

std::string_view to_string(ColorFamily f) noexcept {
  switch (f) {
    case ColorFamily::SeqSeq: return "seq_seq";
    case ColorFamily::SeqQual: return "seq_qual";
    case ColorFamily::SeqDiv: return "seq_div";
    case ColorFamily::DivDiv: return "div_div";
  }
  return "";
}

ColorFamily parse_color_family(std::string_view s) {
  for (auto f : {ColorFamily::SeqSeq, ColorFamily::SeqQual, ColorFamily::SeqDiv, ColorFamily::DivDiv})
    if (to_string(f) == s) return f;
  throw ConfigError("unknown color family '" + std::string(s) + "'");
}

IntervalKind parse_interval_kind(std::string_view s) {
  for (auto k : {IntervalKind::FullSpan, IntervalKind::SliceAligned, IntervalKind::Arbitrary})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown interval kind '" + std::string(s) + "'");
}

int StudyConfig::cell_px() const {
  const auto collapsed = collapsed_footprint(line_graph_px, line_graph_px, bands, slices);
  const auto horizon = horizon_footprint(collapsed.width, line_graph_px, bands);
  if (collapsed.width != collapsed.height)
    throw ConfigError("collapsed footprint " + std::to_string(collapsed.width) + "x" +
                      std::to_string(collapsed.height) + " is not square");
  if (!(horizon == collapsed)) throw ConfigError("horizon and collapsed footprints differ");
  return collapsed.width;
}

TechniqueStyle StudyConfig::style(Technique t) const {
  TechniqueStyle s;
  s.technique = t;
  s.bands = BandSliceConfig{bands, slices, generator.domain, ordering};
  s.interval_len = interval_len;
  s.cmap = make_colormap(colormap, bands, slices, palette);
  s.horizon_colors = sequential_scheme(bands, palette);
  return s;
}

void StudyConfig::validate() const {
  generator.validate();
  BandSliceConfig{bands, slices, generator.domain, ordering}.validate();
  if (interval_len < 1) throw ConfigError("interval_len must be positive");
  if (slices > generator.length) throw ConfigError("more slices than samples");
  if (tasks.slices != slices) throw ConfigError("task slices must match rendering slices");
  if (std::ceil(tasks.threshold_min) > std::floor(tasks.threshold_max))
    throw ConfigError("threshold range contains no integer");
  if (tasks.rules.min_qualifying < 1 || tasks.rules.max_qualifying < tasks.rules.min_qualifying)
    throw ConfigError("bad qualifying range");
  if (tasks.interval_fraction <= 0.0 || tasks.interval_fraction > 1.0)
    throw ConfigError("interval_fraction must lie in (0, 1]");
  if (tasks.range_tolerance <= 0.0) throw ConfigError("range_tolerance must be positive");
  if (tasks.max_attempts < 1) throw ConfigError("max_attempts must be positive");
  if (candidates < 1) throw ConfigError("candidates must be positive");
  if (png_scale < 1) throw ConfigError("png_scale must be positive");
  if (gap_px < 0 || marker_strip_px < 0) throw ConfigError("negative spacing");
  (void)cell_px();
  (void)make_colormap(colormap, bands, slices, palette);
}

StudyConfig study_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  StudyConfig c;
  if (j.contains("generator")) {
    const auto& g = j["generator"];
    read_opt(g, "seed", c.generator.seed);
    read_opt(g, "length", c.generator.length);
    read_opt(g, "walk_step_sigma", c.generator.walk_step_sigma);
    read_opt(g, "smooth_window", c.generator.smooth_window);
    read_opt(g, "alpha_prev", c.generator.alpha_prev);
    if (g.contains("domain")) {
      double lo = c.generator.domain.min, hi = c.generator.domain.max;
      read_opt(g["domain"], "min", lo);
      read_opt(g["domain"], "max", hi);
      c.generator.domain = ValueDomain(lo, hi);
    }
  }
  if (j.contains("tasks")) {
    const auto& t = j["tasks"];
    read_opt(t, "min_qualifying", c.tasks.rules.min_qualifying);
    read_opt(t, "max_qualifying", c.tasks.rules.max_qualifying);
    read_opt(t, "threshold_min", c.tasks.threshold_min);
    read_opt(t, "threshold_max", c.tasks.threshold_max);
    read_opt(t, "interval_fraction", c.tasks.interval_fraction);
    read_opt(t, "range_tolerance", c.tasks.range_tolerance);
    read_opt(t, "max_attempts", c.tasks.max_attempts);
  }
  read_opt(j, "bands", c.bands);
  read_opt(j, "slices", c.slices);
  c.tasks.slices = c.slices;
  read_opt(j, "interval_len", c.interval_len);
  if (j.contains("ordering")) c.ordering = parse_ordering(j["ordering"].get<std::string>());
  if (j.contains("colormap")) c.colormap = parse_color_family(j["colormap"].get<std::string>());
  if (j.contains("palette")) {
    const auto& p = j["palette"];
    if (p.contains("qualitative")) {
      c.palette.qualitative.clear();
      for (const auto& h : p["qualitative"]) c.palette.qualitative.push_back(rgb_from(h, "qualitative"));
    }
    const std::pair<const char*, Rgb*> singles[] = {
        {"seq_start", &c.palette.seq_start},       {"seq_end", &c.palette.seq_end},
        {"div_low", &c.palette.div_low},           {"div_mid", &c.palette.div_mid},
        {"div_high", &c.palette.div_high},         {"vertical_low", &c.palette.vertical_low},
        {"vertical_high", &c.palette.vertical_high}, {"horizon", &c.palette.horizon}};
    for (const auto& [key, dst] : singles)
      if (p.contains(key)) *dst = rgb_from(p[key], key);
  }
  read_opt(j, "line_graph_px", c.line_graph_px);
  read_opt(j, "gap_px", c.gap_px);
  read_opt(j, "marker_strip_px", c.marker_strip_px);
  read_opt(j, "legend", c.legend);
  read_opt(j, "png_scale", c.png_scale);
  read_opt(j, "candidates", c.candidates);
  c.validate();
  return c;
}

json study_config_to_json(const StudyConfig& c) {
  json qual = json::array();
  for (auto q : c.palette.qualitative) qual.push_back(hex(q));
  return {{"generator",
           {{"seed", c.generator.seed},
            {"length", c.generator.length},
            {"walk_step_sigma", c.generator.walk_step_sigma},
            {"smooth_window", c.generator.smooth_window},
            {"alpha_prev", c.generator.alpha_prev},
            {"domain", {{"min", c.generator.domain.min}, {"max", c.generator.domain.max}}}}},
          {"tasks",
           {{"min_qualifying", c.tasks.rules.min_qualifying},
            {"max_qualifying", c.tasks.rules.max_qualifying},
            {"threshold_min", c.tasks.threshold_min},
            {"threshold_max", c.tasks.threshold_max},
            {"interval_fraction", c.tasks.interval_fraction},
            {"range_tolerance", c.tasks.range_tolerance},
            {"max_attempts", c.tasks.max_attempts}}},
          {"bands", c.bands},
          {"slices", c.slices},
          {"interval_len", c.interval_len},
          {"ordering", to_string(c.ordering)},
          {"colormap", to_string(c.colormap)},
          {"palette",
           {{"qualitative", qual},
            {"seq_start", hex(c.palette.seq_start)},
            {"seq_end", hex(c.palette.seq_end)},
            {"div_low", hex(c.palette.div_low)},
            {"div_mid", hex(c.palette.div_mid)},
            {"div_high", hex(c.palette.div_high)},
            {"vertical_low", hex(c.palette.vertical_low)},
            {"vertical_high", hex(c.palette.vertical_high)},
            {"horizon", hex(c.palette.horizon)}}},
          {"line_graph_px", c.line_graph_px},
          {"gap_px", c.gap_px},
          {"marker_strip_px", c.marker_strip_px},
          {"legend", c.legend},
          {"png_scale", c.png_scale},
          {"candidates", c.candidates}};
}

StudyConfig load_study_config(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return study_config_from_json(j);
}

std::array<Technique, 4> technique_order(int participant) {
  if (participant < 0) throw RangeError("negative participant index");
  // Williams design: every technique precedes every other exactly once.
  static constexpr int kRows[4][4] = {{0, 1, 3, 2}, {1, 2, 0, 3}, {2, 3, 1, 0}, {3, 0, 2, 1}};
  std::array<Technique, 4> out{};
  for (int k = 0; k < 4; ++k) out[static_cast<std::size_t>(k)] = kAllTechniques[static_cast<std::size_t>(kRows[participant % 4][k])];
  return out;
}

GridRenderSpec stimulus_spec(TaskId task, Technique tech, const TaskParams& params, const StudyConfig& cfg) {
  (void)tech;
  GridRenderSpec spec;
  spec.cell_px = cfg.cell_px();
  spec.gap_px = cfg.gap_px;
  spec.marker_strip_px = cfg.marker_strip_px;
  if (!params.marker_steps.empty()) spec.marker = MarkerSpec{params.marker_steps};
  spec.highlight = params.highlighted;
  spec.quadrant_rules = task_shape(task).quadrant_side.has_value();
  spec.legend = cfg.legend;
  return spec;
}

std::string task_prompt(TaskId task, const TaskParams& p, const TimeDomain& td) {
  auto at = [&](int step) { return clock_label(step, td); };
  auto span = [&](const TimeInterval& iv) { return at(iv.start_step) + " and " + at(iv.end_step); };
  switch (task) {
    case TaskId::T01:
      return "Select the graph with the highest value at the marked time (" + at(p.marker_steps.at(0)) + ").";
    case TaskId::T02: return "Select the graph with the highest increase from the first to the last time step.";
    case TaskId::T03: return "Select the graph with the highest decrease from the first to the last time step.";
    case TaskId::T04:
      return "Select the graph with the higher value at its marked time (left " + at(p.marker_steps.at(0)) +
             ", right " + at(p.marker_steps.at(1)) + ").";
    case TaskId::T05:
      return "Estimate the difference between the value of the left graph at " + at(p.marker_steps.at(0)) +
             " and the value of the right graph at " + at(p.marker_steps.at(1)) + ".";
    case TaskId::T06: return "Set the slider to the time of the maximum value of the highlighted graph.";
    case TaskId::T07:
      return "Select all graphs that rise above " + format_shortest(p.threshold.value()) + " between " +
             span(p.interval.value()) + ".";
    case TaskId::T08:
      return "Select the quadrant with the highest average increase between " + span(p.interval.value()) + ".";
    case TaskId::T09:
      return "Do all values of the highlighted graph stay within " + format_shortest(p.tolerance.value()) +
             " of its first value?";
    case TaskId::T10: return "Select the quadrant whose graphs are most similar to each other.";
  }
  return {};
}

std::string condition_stem(TaskId task, int repetition, Technique tech, int candidate) {
  return std::string(to_string(task)) + "_" + std::to_string(repetition) + "_" + std::string(to_string(tech)) + "_" +
         std::to_string(candidate);
}

int conditions_per_participant() noexcept {
  int n = 0;
  for (auto tech : kAllTechniques)
    for (auto task : kAllTasks)
      if (task_runs_with(task, tech)) n += repetitions_of(task);
  return n;
}

json answer_to_json(const Answer& a) {
  json j{{"type", to_string(answer_type_of(a))}};
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SingleGraphAnswer>) j["index"] = v.index;
        else if constexpr (std::is_same_v<T, MultiGraphAnswer>) j["indices"] = v.indices;
        else if constexpr (std::is_same_v<T, ValueAnswer>) j["value"] = v.value;
        else if constexpr (std::is_same_v<T, TimeSliderAnswer>) j["step"] = v.step;
        else if constexpr (std::is_same_v<T, YesNoAnswer>) j["yes"] = v.yes;
        else j["quadrant"] = {{"row", v.quadrant.row}, {"col", v.quadrant.col}};
      },
      a);
  return j;
}

Answer answer_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ValidationError({"answer must be an object"});
    switch (parse_answer_type(j.at("type").get<std::string>())) {
      case AnswerType::SingleGraph: return SingleGraphAnswer{j.at("index").get<int>()};
      case AnswerType::MultiGraph: {
        auto idx = j.at("indices").get<std::vector<int>>();
        if (std::set<int>(idx.begin(), idx.end()).size() != idx.size())
          throw ValidationError({"duplicate graph in multi-graph answer"});
        return MultiGraphAnswer{std::move(idx)};
      }
      case AnswerType::ValueInput: {
        const double v = j.at("value").get<double>();
        if (!std::isfinite(v)) throw ValidationError({"value answer is not finite"});
        return ValueAnswer{v};
      }
      case AnswerType::TimeSlider: return TimeSliderAnswer{j.at("step").get<int>()};
      case AnswerType::YesNo: return YesNoAnswer{j.at("yes").get<bool>()};
      case AnswerType::Quadrant:
        return QuadrantAnswer{{j.at("quadrant").at("row").get<int>(), j.at("quadrant").at("col").get<int>()}};
    }
  } catch (const json::exception& e) {
    throw ValidationError({std::string("malformed answer: ") + e.what()});
  } catch (const ConfigError& e) {
    throw ValidationError({e.what()});
  }
  throw ValidationError({"malformed answer"});
}

json params_to_json(const TaskParams& p, const TimeDomain& td) {
  json j = json::object();
  if (!p.marker_steps.empty()) {
    j["marker_steps"] = p.marker_steps;
    json labels = json::array();
    for (int s : p.marker_steps) labels.push_back(clock_label(s, td));
    j["marker_labels"] = labels;
  }
  if (p.threshold) j["threshold"] = *p.threshold;
  if (p.interval)
    j["interval"] = {{"start_step", p.interval->start_step},
                     {"end_step", p.interval->end_step},
                     {"start_label", clock_label(p.interval->start_step, td)},
                     {"end_label", clock_label(p.interval->end_step, td)}};
  if (p.interval_kind) j["interval_kind"] = to_string(*p.interval_kind);
  if (p.highlighted) j["highlighted"] = *p.highlighted;
  if (p.tolerance) j["tolerance"] = *p.tolerance;
  if (p.quadrant_side) j["quadrant_side"] = *p.quadrant_side;
  return j;
}

TaskParams params_from_json(const json& j) {
  TaskParams p;
  if (j.contains("marker_steps")) p.marker_steps = j["marker_steps"].get<std::vector<int>>();
  if (j.contains("threshold")) p.threshold = j["threshold"].get<double>();
  if (j.contains("interval"))
    p.interval = TimeInterval{j["interval"].at("start_step").get<int>(), j["interval"].at("end_step").get<int>()};
  if (j.contains("interval_kind")) p.interval_kind = parse_interval_kind(j["interval_kind"].get<std::string>());
  if (j.contains("highlighted")) p.highlighted = j["highlighted"].get<int>();
  if (j.contains("tolerance")) p.tolerance = j["tolerance"].get<double>();
  if (j.contains("quadrant_side")) p.quadrant_side = j["quadrant_side"].get<int>();
  return p;
}

BundleSummary build_bundle(const StudyConfig& cfg, std::uint64_t seed, int participants, const fs::path& out_dir) {
  cfg.validate();
  if (participants < 1) throw ConfigError("need at least one participant");
  const TimeDomain td(cfg.generator.length);

  const fs::path ui = out_dir / "ui";
  const fs::path priv = out_dir / "private";
  make_dirs(ui / "stimuli");
  make_dirs(ui / "training");
  make_dirs(priv / "datasets");

  BundleSummary summary;
  summary.participants = participants;

  // Every (technique, task, repetition) gets its candidate datasets once;
  // participants differ only in which candidate they are shown.
  json keys = json::object();
  json conditions = json::array();
  for (auto tech : kAllTechniques) {
    for (auto task : kAllTasks) {
      if (!task_runs_with(task, tech)) continue;
      for (int rep = 0; rep < repetitions_of(task); ++rep) {
        ++summary.conditions;
        TaskConfig tc = cfg.tasks;
        if (task == TaskId::T08) tc.interval_kind = t08_kind(rep);
        json stems = json::array();
        for (int cand = 0; cand < cfg.candidates; ++cand) {
          Rng rng(derive_seed(seed, {kConditionStream, static_cast<std::uint64_t>(task),
                                     static_cast<std::uint64_t>(tech), static_cast<std::uint64_t>(rep),
                                     static_cast<std::uint64_t>(cand)}));
          TaskDataset ds;
          try {
            ds = generate_task_dataset(task, cfg.generator, tc, rng);
          } catch (const GenerationError& e) {
            throw GenerationError(std::string(to_string(task)) + ": " + e.what());
          }
          const std::string stem = condition_stem(task, rep, tech, cand);
          write_bytes(priv / "datasets" / (stem + ".csv"), dataset_to_csv(ds.grid));
          write_bytes(priv / "datasets" / (stem + ".json"), dataset_manifest(ds.grid, cfg.generator, seed));
          ++summary.datasets;
          summary.stimuli += write_stimulus(ds.grid, task, tech, ds.params, cfg, ui / "stimuli", stem);

          TrialSpec spec{stem, task, tech, rep, {stem, cand}, ds.params, answer_type_of(task), ds.key};
          keys[stem] = trial_key_to_json(spec, td);
          keys[stem]["prompt"] = task_prompt(task, ds.params, td);
          stems.push_back(stem);
        }
        conditions.push_back({{"task", to_string(task)},
                              {"technique", to_string(tech)},
                              {"repetition", rep},
                              {"candidates", stems}});
      }
    }
  }

  json training = json::array();
  for (auto tech : kAllTechniques) {
    for (auto task : kAllTasks) {
      if (!task_runs_with(task, tech)) continue;
      TaskConfig tc = cfg.tasks;
      Rng rng(derive_seed(seed, {kTrainingStream, static_cast<std::uint64_t>(task), static_cast<std::uint64_t>(tech)}));
      const auto ds = generate_task_dataset(task, cfg.generator, tc, rng);
      const std::string stem = std::string(to_string(task)) + "_" + std::string(to_string(tech)) + "_train";
      summary.stimuli += write_stimulus(ds.grid, task, tech, ds.params, cfg, ui / "training", stem);
      training.push_back({{"task", to_string(task)},
                          {"technique", to_string(tech)},
                          {"prompt", task_prompt(task, ds.params, td)},
                          {"params", params_to_json(ds.params, td)},
                          {"answer_type", to_string(answer_type_of(task))},
                          {"rows", ds.grid.rows},
                          {"cols", ds.grid.cols},
                          {"key", answer_to_json(ds.key)},
                          {"stimulus", {{"svg", "training/" + stem + ".svg"}, {"png", "training/" + stem + ".png"}}}});
    }
  }

  json people = json::array();
  json draws = json::object();
  for (int p = 0; p < participants; ++p) {
    const std::string pid = "P" + std::to_string(p + 1);
    const auto order = technique_order(p);
    json order_names = json::array();
    json trials = json::array();
    json drawn = json::object();
    for (auto tech : order) {
      order_names.push_back(to_string(tech));
      for (auto task : kAllTasks) {
        if (!task_runs_with(task, tech)) continue;
        for (int rep = 0; rep < repetitions_of(task); ++rep) {
          Rng rng(derive_seed(seed, {kDrawStream, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(task),
                                     static_cast<std::uint64_t>(tech), static_cast<std::uint64_t>(rep)}));
          const int cand = rng.uniform_int(0, cfg.candidates - 1);
          const std::string stem = condition_stem(task, rep, tech, cand);
          const auto& key = keys[stem];
          const auto shape = task_shape(task);
          trials.push_back({{"trial_id", stem},
                            {"task", to_string(task)},
                            {"technique", to_string(tech)},
                            {"repetition", rep},
                            {"prompt", key["prompt"]},
                            {"params", key["params"]},
                            {"answer_type", key["answer_type"]},
                            {"rows", shape.rows},
                            {"cols", shape.cols},
                            {"stimulus", {{"svg", "stimuli/" + stem + ".svg"}, {"png", "stimuli/" + stem + ".png"}}}});
          drawn[stem] = cand;
        }
      }
    }
    people.push_back({{"id", pid}, {"technique_order", order_names}, {"trials", trials}});
    draws[pid] = drawn;
  }

  json techniques = json::object();
  for (auto tech : kAllTechniques) techniques[std::string(to_string(tech))] = {{"explanation", technique_blurb(tech)}};

  const json manifest{{"schema", kSchema},
                      {"seed", seed},
                      {"participant_count", participants},
                      {"conditions_per_participant", conditions_per_participant()},
                      {"config", study_config_to_json(cfg)},
                      {"likert", {{"min", 1}, {"max", 7}}},
                      {"time_axis", {{"steps", td.steps}, {"hours", td.hours_span}}},
                      {"techniques", techniques},
                      {"training", training},
                      {"participants", people}};
  write_json(ui / "manifest.json", manifest);
  write_json(priv / "keys.json", {{"schema", kSchema},
                                  {"seed", seed},
                                  {"trials", keys},
                                  {"conditions", conditions},
                                  {"draws", draws}});
  return summary;
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw FileError(path.string() + ": " + e.what());
  }
}

json perfect_log(const fs::path& bundle_dir, const std::string& participant) {
  const json manifest = read_json(bundle_dir / "ui" / "manifest.json");
  const json keys = read_json(bundle_dir / "private" / "keys.json");
  const json* person = nullptr;
  for (const auto& p : manifest.at("participants"))
    if (p.at("id") == participant) person = &p;
  if (!person) throw RangeError("no participant '" + participant + "' in bundle");

  json trials = json::array();
  std::set<std::pair<std::string, std::string>> rated;
  json ratings = json::array();
  std::int64_t clock = 0;
  int i = 0;
  for (const auto& t : person->at("trials")) {
    const std::string id = t.at("trial_id");
    const std::int64_t start = clock + 1000;
    const std::int64_t end = start + 2000 + 500 * (i++ % 4);
    clock = end;
    trials.push_back({{"trial_id", id},
                      {"skipped", false},
                      {"answer", keys.at("trials").at(id).at("key")},
                      {"start_ms", start},
                      {"end_ms", end},
                      {"training_rounds", 1}});
    const std::pair<std::string, std::string> cell{t.at("task"), t.at("technique")};
    if (rated.insert(cell).second)
      ratings.push_back({{"task", cell.first}, {"technique", cell.second}, {"confidence", 4}, {"difficulty", 4}});
  }
  return {{"schema", kSchema},
          {"participant", participant},
          {"demographics", json::object()},
          {"trials", trials},
          {"ratings", ratings}};
}

MetricsReport score_logs(const fs::path& bundle_dir, const std::vector<json>& logs) {
  const json manifest = read_json(bundle_dir / "ui" / "manifest.json");
  const json keys = read_json(bundle_dir / "private" / "keys.json");
  const TimeDomain td(manifest.at("time_axis").at("steps").get<int>(), manifest.at("time_axis").at("hours").get<double>());
  const auto& key_trials = keys.at("trials");

  std::map<std::string, std::set<std::string>> assigned;
  for (const auto& p : manifest.at("participants"))
    for (const auto& t : p.at("trials")) assigned[p.at("id")].insert(t.at("trial_id").get<std::string>());

  std::map<std::string, GridLayout> grids;
  auto grid_for = [&](const std::string& stem, TaskId task) -> const GridLayout& {
    auto it = grids.find(stem);
    if (it != grids.end()) return it->second;
    const auto shape = task_shape(task);
    auto grid = dataset_from_csv(read_text(bundle_dir / "private" / "datasets" / (stem + ".csv")), shape.rows,
                                 shape.cols, shape.quadrant_side);
    return grids.emplace(stem, std::move(grid)).first->second;
  };

  struct Acc {
    int skipped = 0;
    std::vector<double> times, errors, gaps;
  };
  std::map<std::tuple<std::string, TaskId, Technique>, Acc> acc;
  std::vector<std::string> problems;

  for (std::size_t li = 0; li < logs.size(); ++li) {
    const auto& log = logs[li];
    const std::string where = "log " + std::to_string(li);
    if (!log.is_object() || log.value("schema", 0) != kSchema) {
      problems.push_back(where + ": missing or unsupported schema");
      continue;
    }
    if (!log.contains("participant") || !log["participant"].is_string()) {
      problems.push_back(where + ": missing participant id");
      continue;
    }
    const std::string pid = log["participant"];
    const auto person = assigned.find(pid);
    if (person == assigned.end()) problems.push_back(where + ": unknown participant '" + pid + "'");

    std::set<std::string> seen;
    const json trials = log.value("trials", json::array());
    for (std::size_t ti = 0; ti < trials.size(); ++ti) {
      const auto& rec = trials[ti];
      const std::string at = where + " trial " + std::to_string(ti);
      try {
        const std::string id = rec.at("trial_id");
        if (!key_trials.contains(id)) {
          problems.push_back(at + ": unknown trial id '" + id + "'");
          continue;
        }
        if (person != assigned.end() && !person->second.count(id))
          problems.push_back(at + ": trial '" + id + "' is not assigned to " + pid);
        if (!seen.insert(id).second) problems.push_back(at + ": trial '" + id + "' answered twice");
        const auto start = rec.at("start_ms").get<std::int64_t>();
        const auto end = rec.at("end_ms").get<std::int64_t>();
        if (end < start) problems.push_back(at + ": end_ms before start_ms");
        if (rec.contains("training_rounds") && rec["training_rounds"].get<int>() < 0)
          problems.push_back(at + ": negative training_rounds");

        const auto& k = key_trials[id];
        TrialSpec spec;
        spec.trial_id = id;
        spec.task = parse_task(k.at("task").get<std::string>());
        spec.technique = parse_technique(k.at("technique").get<std::string>());
        spec.repetition = k.at("repetition");
        spec.dataset.stem = k.at("dataset");
        spec.params = params_from_json(k.at("params"));
        spec.answer_type = parse_answer_type(k.at("answer_type").get<std::string>());
        spec.key = answer_from_json(k.at("key"));

        std::optional<Answer> answer;
        if (!rec.value("skipped", false)) {
          answer = answer_from_json(rec.at("answer"));
          if (answer_type_of(*answer) != spec.answer_type) {
            problems.push_back(at + ": answer type " + std::string(to_string(answer_type_of(*answer))) +
                               " does not match " + std::string(to_string(spec.answer_type)));
            continue;
          }
        }
        const auto score = score_trial(spec, grid_for(spec.dataset.stem, spec.task), answer, td);
        auto& a = acc[{pid, spec.task, spec.technique}];
        if (score.skipped) {
          ++a.skipped;
        } else {
          a.times.push_back(static_cast<double>(end - start) / 1000.0);
          a.errors.push_back(score.error);
          if (score.dtw_cost_gap) a.gaps.push_back(*score.dtw_cost_gap);
        }
      } catch (const ValidationError& e) {
        for (const auto& p : e.problems()) problems.push_back(at + ": " + p);
      } catch (const json::exception& e) {
        problems.push_back(at + ": malformed record (" + e.what() + ")");
      }
    }

    for (const auto& r : log.value("ratings", json::array())) {
      try {
        parse_task(r.at("task").get<std::string>());
        parse_technique(r.at("technique").get<std::string>());
      } catch (const std::exception& e) {
        problems.push_back(where + ": bad rating entry (" + e.what() + ")");
      }
      for (const char* field : {"confidence", "difficulty"}) {
        const auto v = r.value(field, json());
        if (!v.is_number_integer() || v.get<int>() < 1 || v.get<int>() > 7)
          problems.push_back(where + ": " + field + " rating must be an integer from 1 to 7");
      }
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));

  MetricsReport report;
  std::map<std::pair<TaskId, Technique>, std::vector<const Observation*>> groups;
  for (const auto& [k, a] : acc) {
    Observation o;
    o.participant = std::get<0>(k);
    o.task = std::get<1>(k);
    o.technique = std::get<2>(k);
    o.scored = static_cast<int>(a.errors.size());
    o.skipped = a.skipped;
    if (o.scored > 0) {
      o.mean_time_s = mean_of(a.times);
      o.mean_error = mean_of(a.errors);
    }
    if (!a.gaps.empty()) o.mean_dtw_gap = mean_of(a.gaps);
    report.observations.push_back(std::move(o));
  }
  for (const auto& o : report.observations) groups[{o.task, o.technique}].push_back(&o);
  for (const auto& [k, obs] : groups) {
    Aggregate g;
    g.task = k.first;
    g.technique = k.second;
    std::vector<double> times, errors, gaps;
    for (const auto* o : obs) {
      g.skipped += o->skipped;
      if (o->mean_error) {
        times.push_back(*o->mean_time_s);
        errors.push_back(*o->mean_error);
      }
      if (o->mean_dtw_gap) gaps.push_back(*o->mean_dtw_gap);
    }
    g.count = static_cast<int>(errors.size());
    if (g.count > 0) {
      g.mean_time_s = mean_of(times);
      g.median_time_s = median_of(times);
      g.mean_error = mean_of(errors);
      g.median_error = median_of(errors);
    }
    if (!gaps.empty()) g.mean_dtw_gap = mean_of(gaps);
    report.aggregates.push_back(g);
  }
  return report;
}

MetricsReport score_log(const fs::path& bundle_dir, const fs::path& log_path) {
  return score_logs(bundle_dir, {read_json(log_path)});
}

std::string MetricsReport::to_csv() const {
  auto opt = [](const std::optional<double>& v) { return v ? format_shortest(*v) : std::string(); };
  std::string out =
      "level,participant,task,technique,count,skipped,mean_time_s,median_time_s,mean_error,median_error,mean_dtw_gap\n";
  for (const auto& o : observations)
    out += "participant," + o.participant + "," + std::string(to_string(o.task)) + "," +
           std::string(to_string(o.technique)) + "," + std::to_string(o.scored) + "," + std::to_string(o.skipped) +
           "," + opt(o.mean_time_s) + ",," + opt(o.mean_error) + ",," + opt(o.mean_dtw_gap) + "\n";
  for (const auto& g : aggregates) {
    const bool any = g.count > 0;
    out += "aggregate,," + std::string(to_string(g.task)) + "," + std::string(to_string(g.technique)) + "," +
           std::to_string(g.count) + "," + std::to_string(g.skipped) + "," +
           (any ? format_shortest(g.mean_time_s) : "") + "," + (any ? format_shortest(g.median_time_s) : "") + "," +
           (any ? format_shortest(g.mean_error) : "") + "," + (any ? format_shortest(g.median_error) : "") + "," +
           opt(g.mean_dtw_gap) + "\n";
  }
  return out;
}

}  // namespace compactvis
