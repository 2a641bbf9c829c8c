#include <array>

#include "pypal/intent/intent.hpp"

namespace pypal::intent {

namespace {

constexpr std::array<std::string_view, kIntentCount> kIntentNames = {
    "general_conversation",     "ask_submission",      "video_variable",
    "video_data_types",         "video_arith_operation", "video_comparison",
    "video_functions",          "video_return_values", "video_none",
    "exercise_variable",        "exercise_data_types", "exercise_arith_operation",
    "exercise_comparison",      "exercise_function",   "exercise_return_values",
    "exercise_none",
};

constexpr std::array<std::string_view, 4> kMainNames = {"general", "submit", "video-request",
                                                        "exercise-request"};

constexpr std::array<std::string_view, 7> kSubNames = {
    "variables", "data_types", "arithmetic", "comparison", "functions", "return_values", "none"};

constexpr int kVideoBase = static_cast<int>(Intent::video_variable);
constexpr int kExerciseBase = static_cast<int>(Intent::exercise_variable);

}  // namespace

std::string_view to_string(Intent i) noexcept { return kIntentNames[static_cast<std::size_t>(i)]; }
std::string_view to_string(MainIntent m) noexcept { return kMainNames[static_cast<std::size_t>(m)]; }
std::string_view to_string(SubIntent s) noexcept { return kSubNames[static_cast<std::size_t>(s)]; }

Intent intent_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kIntentNames.size(); ++i) {
    if (kIntentNames[i] == name) return kAllIntents[i];
  }
  throw Error("unknown intent label '" + std::string(name) + "'");
}

MainIntent main_intent_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kMainNames.size(); ++i) {
    if (kMainNames[i] == name) return kAllMainIntents[i];
  }
  throw Error("unknown main intent '" + std::string(name) + "'");
}

SubIntent sub_intent_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kSubNames.size(); ++i) {
    if (kSubNames[i] == name) return kAllSubIntents[i];
  }
  throw Error("unknown sub-intent '" + std::string(name) + "'");
}

MainIntent main_intent(Intent i) noexcept {
  const int n = static_cast<int>(i);
  if (i == Intent::general_conversation) return MainIntent::general;
  if (i == Intent::ask_submission) return MainIntent::submit;
  return n < kExerciseBase ? MainIntent::video_request : MainIntent::exercise_request;
}

std::optional<SubIntent> sub_intent(Intent i) noexcept {
  const int n = static_cast<int>(i);
  if (n < kVideoBase) return std::nullopt;
  return static_cast<SubIntent>(n < kExerciseBase ? n - kVideoBase : n - kExerciseBase);
}

Intent compose(MainIntent m, std::optional<SubIntent> s) {
  const bool request = m == MainIntent::video_request || m == MainIntent::exercise_request;
  if (request != s.has_value()) {
    throw Error("cannot compose main intent '" + std::string(to_string(m)) + "' with " +
                (s ? "sub-intent '" + std::string(to_string(*s)) + "'" : std::string("no sub-intent")));
  }
  switch (m) {
    case MainIntent::general: return Intent::general_conversation;
    case MainIntent::submit: return Intent::ask_submission;
    case MainIntent::video_request: return static_cast<Intent>(kVideoBase + static_cast<int>(*s));
    case MainIntent::exercise_request: return static_cast<Intent>(kExerciseBase + static_cast<int>(*s));
  }
  return Intent::general_conversation;
}

std::string_view to_string(ModelKind k) noexcept { return k == ModelKind::flat ? "flat" : "hierarchical"; }

}  // namespace pypal::intent
