#include "pypal/service/service.hpp"

namespace pypal::service {

namespace {

template <class T>
nlohmann::json or_null(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

nlohmann::json diagnostic_to_json(const diag::Diagnostic& d) {
  return {
      {"category", diag::to_string(d.category)},
      {"pattern_id", d.pattern_id},
      {"line", d.line},
      {"subject", or_null(d.subject)},
      {"message", d.raw_message},
      {"headline", d.headline},
      {"suggestions", d.suggestions},
  };
}

nlohmann::json grade_report_to_json(const grading::GradeReport& r) {
  return {
      {"status", grading::to_string(r.status)},
      {"feedback", r.feedback},
      {"diagnostic", r.diagnostic ? diagnostic_to_json(*r.diagnostic) : nlohmann::json(nullptr)},
      {"actual_output", or_null(r.actual_output)},
      {"expected_output", or_null(r.expected_output)},
  };
}

nlohmann::json exercise_to_json(const grading::Exercise& ex) {
  return {
      {"id", ex.id},
      {"title", ex.title},
      {"topic", ex.topic},
      {"prompt", ex.prompt},
      {"mode", ex.mode == grading::TestMode::function_mode ? "function" : "stdout"},
      {"test", ex.shown_test_description},
  };
}

nlohmann::json reply_to_json(const dialogue::Reply& r) {
  nlohmann::json out = std::visit(
      overloaded{
          [](const dialogue::TextReply& t) { return nlohmann::json{{"text", t.text}}; },
          [](const dialogue::TutorialLink& t) {
            return nlohmann::json{{"topic", t.topic}, {"title", t.title}, {"url", t.url}};
          },
          [](const dialogue::ExercisePrompt& p) { return nlohmann::json{{"exercise", exercise_to_json(p.exercise)}}; },
          [](const dialogue::GradeFeedback& g) {
            return nlohmann::json{{"exercise_id", g.exercise_id}, {"report", grade_report_to_json(g.report)}};
          },
          [](const dialogue::Clarification& c) {
            return nlohmann::json{{"question", c.question}, {"options", c.options}};
          },
      },
      r);
  out["kind"] = dialogue::to_string(dialogue::kind_of(r));
  return out;
}

nlohmann::json state_summary(const dialogue::SessionState& s) {
  return {
      {"session_id", s.session_id},
      {"pending", dialogue::to_string(s.pending)},
      {"pending_exercise_id",
       s.pending_exercise_id.empty() ? nlohmann::json(nullptr) : nlohmann::json(s.pending_exercise_id)},
      {"last_exercise_id", or_null(s.last_exercise_id)},
      {"last_tutorial_topic", or_null(s.last_tutorial_topic)},
  };
}

}  // namespace pypal::service
