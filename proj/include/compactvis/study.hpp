#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "compactvis/core.hpp"

namespace compactvis {

enum class TaskId { T01, T02, T03, T04, T05, T06, T07, T08, T09, T10 };
enum class Technique { CBP, HG, CHG, BHG };
enum class AnswerType { SingleGraph, MultiGraph, ValueInput, TimeSlider, YesNo, Quadrant };

inline constexpr std::array<TaskId, 10> kAllTasks{TaskId::T01, TaskId::T02, TaskId::T03, TaskId::T04,
                                                  TaskId::T05, TaskId::T06, TaskId::T07, TaskId::T08,
                                                  TaskId::T09, TaskId::T10};
inline constexpr std::array<Technique, 4> kAllTechniques{Technique::CBP, Technique::HG, Technique::CHG,
                                                         Technique::BHG};

std::string_view to_string(TaskId t) noexcept;
std::string_view to_string(Technique t) noexcept;
std::string_view to_string(AnswerType t) noexcept;
TaskId parse_task(std::string_view s);
Technique parse_technique(std::string_view s);
AnswerType parse_answer_type(std::string_view s);

AnswerType answer_type_of(TaskId t) noexcept;

/// Grid shape a task is shown on (1x2, 3x3, 5x5 or 9x9 with 3x3 quadrants).
struct TaskShape {
  int rows;
  int cols;
  std::optional<int> quadrant_side;
};
TaskShape task_shape(TaskId t) noexcept;

/// Repetitions per (task, technique): T08 has three, every other task two.
int repetitions_of(TaskId t) noexcept;
/// T03 is only run with collapsed horizon graphs.
bool task_runs_with(TaskId t, Technique tech) noexcept;

/// Which interval a T08 repetition queries.
enum class IntervalKind { FullSpan, SliceAligned, Arbitrary };
std::string_view to_string(IntervalKind k) noexcept;

/// Everything shown to the participant besides the stimulus.
struct TaskParams {
  /// One shared step (T01) or one step per graph (T04, T05).
  std::vector<int> marker_steps;
  std::optional<double> threshold;
  std::optional<TimeInterval> interval;
  std::optional<IntervalKind> interval_kind;
  std::optional<int> highlighted;
  std::optional<double> tolerance;
  std::optional<int> quadrant_side;

  friend bool operator==(const TaskParams&, const TaskParams&) = default;
};

struct SingleGraphAnswer {
  int index = 0;
  friend bool operator==(const SingleGraphAnswer&, const SingleGraphAnswer&) = default;
};
struct MultiGraphAnswer {
  std::vector<int> indices;
  friend bool operator==(const MultiGraphAnswer&, const MultiGraphAnswer&) = default;
};
struct ValueAnswer {
  double value = 0.0;
  friend bool operator==(const ValueAnswer&, const ValueAnswer&) = default;
};
struct TimeSliderAnswer {
  int step = 0;
  friend bool operator==(const TimeSliderAnswer&, const TimeSliderAnswer&) = default;
};
struct YesNoAnswer {
  bool yes = false;
  friend bool operator==(const YesNoAnswer&, const YesNoAnswer&) = default;
};
struct QuadrantAnswer {
  QuadrantId quadrant;
  friend bool operator==(const QuadrantAnswer&, const QuadrantAnswer&) = default;
};

/// Alternatives are declared in AnswerType order.
using Answer =
    std::variant<SingleGraphAnswer, MultiGraphAnswer, ValueAnswer, TimeSliderAnswer, YesNoAnswer, QuadrantAnswer>;

inline AnswerType answer_type_of(const Answer& a) noexcept { return static_cast<AnswerType>(a.index()); }

/// A generated dataset together with its task parameters and answer key.
struct TaskDataset {
  TaskId task = TaskId::T01;
  GridLayout grid;
  TaskParams params;
  Answer key;
  int attempts = 1;
};

struct DatasetRef {
  std::string stem;  ///< file stem shared by the dataset and its stimuli
  int candidate = 0;  ///< which of the candidate datasets was drawn
};

struct TrialSpec {
  std::string trial_id;
  TaskId task = TaskId::T01;
  Technique technique = Technique::CBP;
  int repetition = 0;
  DatasetRef dataset;
  TaskParams params;
  AnswerType answer_type = AnswerType::SingleGraph;
  Answer key;
};

}  // namespace compactvis
