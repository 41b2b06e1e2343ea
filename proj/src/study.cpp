#include "compactvis/study.hpp"

#include <string>

#include "compactvis/errors.hpp"

namespace compactvis {

namespace {

constexpr std::array<std::string_view, 10> kTaskNames{"T01", "T02", "T03", "T04", "T05",
                                                      "T06", "T07", "T08", "T09", "T10"};
constexpr std::array<std::string_view, 4> kTechniqueNames{"CBP", "HG", "CHG", "BHG"};
constexpr std::array<std::string_view, 6> kAnswerTypeNames{"single_graph", "multi_graph", "value_input",
                                                           "time_slider",  "yes_no",      "quadrant"};

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view s, const std::array<std::string_view, N>& names, const char* what) {
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == s) return static_cast<Enum>(i);
  throw ConfigError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(TaskId t) noexcept { return kTaskNames[static_cast<std::size_t>(t)]; }
std::string_view to_string(Technique t) noexcept { return kTechniqueNames[static_cast<std::size_t>(t)]; }
std::string_view to_string(AnswerType t) noexcept { return kAnswerTypeNames[static_cast<std::size_t>(t)]; }

std::string_view to_string(IntervalKind k) noexcept {
  switch (k) {
    case IntervalKind::FullSpan: return "full_span";
    case IntervalKind::SliceAligned: return "slice_aligned";
    case IntervalKind::Arbitrary: return "arbitrary";
  }
  return "";
}

TaskId parse_task(std::string_view s) { return parse_enum<TaskId>(s, kTaskNames, "task"); }
Technique parse_technique(std::string_view s) { return parse_enum<Technique>(s, kTechniqueNames, "technique"); }
AnswerType parse_answer_type(std::string_view s) { return parse_enum<AnswerType>(s, kAnswerTypeNames, "answer type"); }

AnswerType answer_type_of(TaskId t) noexcept {
  switch (t) {
    case TaskId::T01:
    case TaskId::T02:
    case TaskId::T03:
    case TaskId::T04: return AnswerType::SingleGraph;
    case TaskId::T05: return AnswerType::ValueInput;
    case TaskId::T06: return AnswerType::TimeSlider;
    case TaskId::T07: return AnswerType::MultiGraph;
    case TaskId::T09: return AnswerType::YesNo;
    case TaskId::T08:
    case TaskId::T10: return AnswerType::Quadrant;
  }
  return AnswerType::SingleGraph;
}

TaskShape task_shape(TaskId t) noexcept {
  switch (t) {
    case TaskId::T04:
    case TaskId::T05: return {1, 2, std::nullopt};
    case TaskId::T07:
    case TaskId::T09: return {5, 5, std::nullopt};
    case TaskId::T08:
    case TaskId::T10: return {9, 9, 3};
    default: return {3, 3, std::nullopt};
  }
}

int repetitions_of(TaskId t) noexcept { return t == TaskId::T08 ? 3 : 2; }

bool task_runs_with(TaskId t, Technique tech) noexcept { return t != TaskId::T03 || tech == Technique::CHG; }

}  // namespace compactvis
