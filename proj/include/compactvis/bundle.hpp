#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "compactvis/colormap.hpp"
#include "compactvis/datagen.hpp"
#include "compactvis/render.hpp"
#include "compactvis/study.hpp"
#include "compactvis/techniques.hpp"

namespace compactvis {

std::string_view to_string(SliceOrdering o) noexcept;
SliceOrdering parse_ordering(std::string_view s);
std::string_view to_string(ColorFamily f) noexcept;
ColorFamily parse_color_family(std::string_view s);
IntervalKind parse_interval_kind(std::string_view s);

/// Everything a bundle build depends on besides seed and participant count.
struct StudyConfig {
  GenConfig generator;
  TaskConfig tasks;
  int bands = 3;
  int slices = 3;
  int interval_len = 3;
  SliceOrdering ordering = SliceOrdering::FrontFirstSlice;
  ColorFamily colormap = ColorFamily::SeqQual;
  PaletteConfig palette;
  /// Side of the uncompressed line graph; stimuli are its collapsed footprint.
  int line_graph_px = 72;
  int gap_px = 4;
  int marker_strip_px = 5;
  bool legend = true;
  int png_scale = 1;
  /// Candidate datasets generated per repetition.
  int candidates = 3;

  /// Per-graph footprint shared by all four techniques. Throws ConfigError
  /// if the techniques would disagree or the footprint is not square.
  int cell_px() const;
  TechniqueStyle style(Technique t) const;
  void validate() const;
};

StudyConfig study_config_from_json(const nlohmann::json& j);
nlohmann::json study_config_to_json(const StudyConfig& cfg);
/// Reads a JSON config; missing keys keep their defaults.
StudyConfig load_study_config(const std::filesystem::path& path);

/// Balanced 4x4 Latin square (Williams design) over the four techniques.
std::array<Technique, 4> technique_order(int participant);

/// Grid render settings for one task's stimulus.
GridRenderSpec stimulus_spec(TaskId task, Technique tech, const TaskParams& params, const StudyConfig& cfg);

/// Participant-facing instruction text.
std::string task_prompt(TaskId task, const TaskParams& params, const TimeDomain& td);

/// `<task>_<rep>_<technique>_<dataset>`, the stem shared by stimuli and datasets.
std::string condition_stem(TaskId task, int repetition, Technique tech, int candidate);

/// Scored conditions per participant: every task with every technique it
/// runs with, times its repetitions.
int conditions_per_participant() noexcept;

nlohmann::json answer_to_json(const Answer& a);
/// Throws ValidationError when the JSON does not encode an answer.
Answer answer_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const TaskParams& p, const TimeDomain& td);
TaskParams params_from_json(const nlohmann::json& j);

struct BundleSummary {
  int participants = 0;
  int conditions = 0;  ///< distinct (task, technique, repetition)
  int datasets = 0;
  int stimuli = 0;
};

/// Writes a complete study bundle to `out_dir`:
///   ui/manifest.json, ui/stimuli/, ui/training/   participant-visible payload
///   private/keys.json, private/datasets/           answer keys and raw data
BundleSummary build_bundle(const StudyConfig& cfg, std::uint64_t seed, int participants,
                           const std::filesystem::path& out_dir);

/// Result log answering every trial of a participant with its key.
nlohmann::json perfect_log(const std::filesystem::path& bundle_dir, const std::string& participant);

struct Observation {
  std::string participant;
  TaskId task = TaskId::T01;
  Technique technique = Technique::CBP;
  int scored = 0;
  int skipped = 0;
  /// Means over non-skipped repetitions; empty when every repetition was skipped.
  std::optional<double> mean_time_s;
  std::optional<double> mean_error;
  std::optional<double> mean_dtw_gap;
};

struct Aggregate {
  TaskId task = TaskId::T01;
  Technique technique = Technique::CBP;
  int count = 0;  ///< observations with at least one scored repetition
  int skipped = 0;
  double mean_time_s = 0.0;
  double median_time_s = 0.0;
  double mean_error = 0.0;
  double median_error = 0.0;
  std::optional<double> mean_dtw_gap;
};

struct MetricsReport {
  std::vector<Observation> observations;
  std::vector<Aggregate> aggregates;

  std::string to_csv() const;
};

/// Scores result logs against a bundle. Throws ValidationError listing
/// every offending record.
MetricsReport score_logs(const std::filesystem::path& bundle_dir, const std::vector<nlohmann::json>& logs);
MetricsReport score_log(const std::filesystem::path& bundle_dir, const std::filesystem::path& log_path);

nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace compactvis
