#include "pypal/dialogue/dialogue.hpp"

namespace pypal::dialogue {

namespace {

using intent::Intent;
using intent::MainIntent;

constexpr std::string_view kUnknownExercise =
    "Sorry, I can no longer find that exercise. Please ask me for an exercise again.";

void reset(SessionState& s) {
  s.pending = PendingKind::idle;
  s.pending_exercise_id.clear();
  s.confirm_reprompts = 0;
}

Clarification confirm_question(const grading::Exercise& ex) {
  return {"Is this submission for your most recent exercise, \"" + ex.title + "\"?", {"yes", "no"}};
}

}  // namespace

DialogueEngine::DialogueEngine(const intent::IntentModel& model, const std::vector<grading::Exercise>& bank,
                               const TutorialRepository& tutorials, const TransitionTable& transitions,
                               const ChatRules& chat, exec::Limits limits)
    : model_(model), bank_(bank), tutorials_(tutorials), transitions_(transitions), chat_(chat), limits_(limits) {}

std::string DialogueEngine::topic_list() const {
  std::string out;
  for (auto topic : grading::kTopics) {
    std::string title(topic);
    if (auto it = tutorials_.all().find(topic); it != tutorials_.all().end()) title = it->second.title;
    out += "\n- " + title;
  }
  return out;
}

HandleResult DialogueEngine::handle_message(const SessionState& state, std::string_view text) const {
  if (state.pending == PendingKind::awaiting_submission_confirm &&
      (transitions_.is_affirmative(text) || transitions_.is_negative(text))) {
    return route(state, text, Intent::general_conversation);
  }
  return route(state, text, model_.predict(text).label);
}

HandleResult DialogueEngine::route(const SessionState& state, std::string_view text, Intent intent) const {
  if (state.pending == PendingKind::awaiting_submission_confirm) {
    const bool yes = transitions_.is_affirmative(text);
    const bool no = transitions_.is_negative(text);
    if (yes || no) {
      HandleResult r;
      r.state = state;
      const auto* ex = grading::find_exercise(bank_, state.pending_exercise_id);
      if (ex == nullptr) {
        reset(r.state);
        r.replies.emplace_back(TextReply{std::string(kUnknownExercise)});
      } else if (yes) {
        r.state.pending = PendingKind::awaiting_code;
        r.state.confirm_reprompts = 0;
        r.replies.emplace_back(TextReply{"Great! Please send your code for \"" + ex->title + "\" in your next message."});
      } else {
        reset(r.state);
        r.replies.emplace_back(TextReply{"No problem. Ask me for an exercise or a video whenever you are ready."});
      }
      return r;
    }
  }
  const Transition& t = transitions_.lookup(state.pending, intent);
  return run(t.action, t.next, state, text, intent);
}

HandleResult DialogueEngine::run(Action action, PendingKind next, const SessionState& state, std::string_view text,
                                 Intent intent) const {
  HandleResult r;
  r.state = state;
  r.intent = intent;
  r.action = action;
  const auto sub = intent::sub_intent(intent);

  switch (action) {
    case Action::chat:
      r.replies.emplace_back(TextReply{chat_.respond(text)});
      break;

    case Action::send_tutorial:
      try {
        const Tutorial& t = tutorials_.get(intent::to_string(*sub));
        r.replies.emplace_back(TutorialLink{t.topic, t.title, t.url});
        r.state.last_tutorial_topic = t.topic;
      } catch (const UnknownTopic&) {
        r.replies.emplace_back(TextReply{"Sorry, that video is not available right now. I have videos on:" + topic_list()});
      }
      break;

    case Action::send_exercise:
      try {
        const grading::Exercise& ex = get_exercise(bank_, intent::to_string(*sub));
        r.replies.emplace_back(ExercisePrompt{ex});
        r.state.last_exercise_id = ex.id;
      } catch (const UnknownTopic&) {
        r.replies.emplace_back(
            TextReply{"Sorry, that exercise is not available right now. I have exercises on:" + topic_list()});
      }
      break;

    case Action::list_topics: {
      const bool video = intent::main_intent(intent) == MainIntent::video_request;
      r.replies.emplace_back(TextReply{std::string("Sorry, I don't have ") + (video ? "a video" : "an exercise") +
                                       " on that topic yet. I can help with:" + topic_list()});
      break;
    }

    case Action::confirm_submission: {
      const grading::Exercise* ex =
          state.last_exercise_id ? grading::find_exercise(bank_, *state.last_exercise_id) : nullptr;
      if (ex != nullptr) {
        r.state.pending = next;
        r.state.pending_exercise_id = ex->id;
        r.state.confirm_reprompts = 0;
        r.replies.emplace_back(confirm_question(*ex));
      } else if (state.last_exercise_id) {
        reset(r.state);
        r.state.last_exercise_id.reset();
        r.replies.emplace_back(TextReply{std::string(kUnknownExercise)});
      } else {
        Clarification c{"Which exercise would you like to submit? Ask me for the exercise first, then tell me when "
                        "you are ready to submit.",
                        {}};
        for (const auto& e : bank_) c.options.push_back(e.title);
        r.replies.emplace_back(std::move(c));
      }
      break;
    }

    case Action::reprompt_confirm: {
      const grading::Exercise* ex = grading::find_exercise(bank_, state.pending_exercise_id);
      if (ex == nullptr) {
        reset(r.state);
        r.replies.emplace_back(TextReply{std::string(kUnknownExercise)});
      } else if (state.confirm_reprompts < 1) {
        r.state.pending = next;
        r.state.confirm_reprompts = state.confirm_reprompts + 1;
        Clarification c = confirm_question(*ex);
        c.question = "Please answer yes or no. " + c.question;
        r.replies.emplace_back(std::move(c));
      } else {
        reset(r.state);
        r.replies.emplace_back(TextReply{"I didn't catch a yes or no, so I've cancelled the submission. Tell me "
                                         "when you are ready to submit."});
      }
      break;
    }

    case Action::grade_code: {
      const grading::Exercise* ex = grading::find_exercise(bank_, state.pending_exercise_id);
      reset(r.state);
      if (ex == nullptr) {
        r.replies.emplace_back(TextReply{std::string(kUnknownExercise)});
        break;
      }
      r.replies.emplace_back(
          GradeFeedback{ex->id, grading::grade_submission(*ex, text, diag::default_templates(), limits_)});
      r.state.last_exercise_id = ex->id;
      break;
    }
  }
  return r;
}

std::optional<GradeFeedback> DialogueEngine::submit(SessionState& state, std::string_view exercise_id,
                                                    std::string_view code) const {
  const grading::Exercise* ex = grading::find_exercise(bank_, exercise_id);
  if (ex == nullptr) return std::nullopt;
  state.last_exercise_id = ex->id;
  return GradeFeedback{ex->id, grading::grade_submission(*ex, code, diag::default_templates(), limits_)};
}

}  // namespace pypal::dialogue
