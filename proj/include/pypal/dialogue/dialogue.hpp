#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pypal/error.hpp"
#include "pypal/exec/interpreter.hpp"
#include "pypal/grading/grading.hpp"
#include "pypal/intent/intent.hpp"

namespace pypal::dialogue {

struct UnknownTopic : Error {
  using Error::Error;
};

enum class PendingKind { idle, awaiting_submission_confirm, awaiting_code };

inline constexpr PendingKind kAllPendingKinds[] = {PendingKind::idle, PendingKind::awaiting_submission_confirm,
                                                   PendingKind::awaiting_code};

std::string_view to_string(PendingKind k) noexcept;
PendingKind pending_from_string(std::string_view name);

struct SessionState {
  std::string session_id;
  std::optional<std::string> last_exercise_id;
  std::optional<std::string> last_tutorial_topic;
  PendingKind pending = PendingKind::idle;
  std::string pending_exercise_id;  // set unless pending is idle
  int confirm_reprompts = 0;        // clarifications re-asked while awaiting confirmation

  bool operator==(const SessionState&) const = default;
};

// ---- replies --------------------------------------------------------------

struct TextReply {
  std::string text;
};

struct TutorialLink {
  std::string topic;
  std::string title;
  std::string url;
};

struct ExercisePrompt {
  grading::Exercise exercise;
};

struct GradeFeedback {
  std::string exercise_id;
  grading::GradeReport report;
};

struct Clarification {
  std::string question;
  std::vector<std::string> options;
};

using Reply = std::variant<TextReply, TutorialLink, ExercisePrompt, GradeFeedback, Clarification>;

enum class ReplyKind { text, tutorial_link, exercise_prompt, grade_feedback, clarification };
inline constexpr ReplyKind kAllReplyKinds[] = {ReplyKind::text, ReplyKind::tutorial_link,
                                               ReplyKind::exercise_prompt, ReplyKind::grade_feedback,
                                               ReplyKind::clarification};

ReplyKind kind_of(const Reply& r) noexcept;
std::string_view to_string(ReplyKind k) noexcept;

// ---- content repositories -------------------------------------------------

struct Tutorial {
  std::string topic;
  std::string title;
  std::string url;
};

class TutorialRepository {
 public:
  static TutorialRepository from_json(std::string_view text);
  static TutorialRepository load(const std::string& path);

  /// Throws UnknownTopic.
  const Tutorial& get(std::string_view topic) const;
  const std::map<std::string, Tutorial, std::less<>>& all() const { return tutorials_; }

 private:
  std::map<std::string, Tutorial, std::less<>> tutorials_;
};

/// The bank exercise whose topic is `topic`. Throws UnknownTopic.
const grading::Exercise& get_exercise(const std::vector<grading::Exercise>& bank, std::string_view topic);

// ---- transition table -----------------------------------------------------

enum class Action { chat, send_tutorial, send_exercise, list_topics, confirm_submission, reprompt_confirm, grade_code };

std::string_view to_string(Action a) noexcept;

struct Transition {
  Action action = Action::chat;
  PendingKind next = PendingKind::idle;
};

/// One row per (pending, intent) pair plus the confirmation keyword sets.
class TransitionTable {
 public:
  /// Throws pypal::Error for missing or duplicate rows and unknown names.
  static TransitionTable from_json(std::string_view text);
  static TransitionTable load(const std::string& path);

  const Transition& lookup(PendingKind pending, intent::Intent intent) const;
  std::size_t row_count() const { return rows_.size(); }

  bool is_affirmative(std::string_view text) const;
  bool is_negative(std::string_view text) const;

 private:
  std::map<std::pair<PendingKind, intent::Intent>, Transition> rows_;
  std::vector<std::string> affirmative_;
  std::vector<std::string> negative_;
};

/// The table compiled in from data/tables/transitions.json.
const TransitionTable& default_transitions();

// ---- fallback chat --------------------------------------------------------

class ChatRules {
 public:
  static ChatRules from_json(std::string_view text);

  /// Picks the first rule with a keyword present in the text (keywords are
  /// token sequences), otherwise the default rule. Among a rule's responses
  /// the choice is a hash of the normalized text.
  std::string respond(std::string_view text) const;
  /// Id of the rule respond() would use.
  std::string match(std::string_view text) const;

 private:
  struct Rule {
    std::string id;
    std::vector<std::vector<std::string>> keywords;
    std::vector<std::string> responses;
  };
  std::vector<Rule> rules_;
  std::size_t default_index_ = 0;
};

const ChatRules& default_chat_rules();

std::string fallback_chat(std::string_view text);

// ---- the handler ----------------------------------------------------------

struct HandleResult {
  std::vector<Reply> replies;
  SessionState state;
  std::optional<intent::Intent> intent;  // absent when a yes/no answer short-circuits classification
  std::optional<Action> action;
};

/// Routes one student message. Holds references; the referenced objects
/// must outlive the engine. Safe to call concurrently for different states.
class DialogueEngine {
 public:
  DialogueEngine(const intent::IntentModel& model, const std::vector<grading::Exercise>& bank,
                 const TutorialRepository& tutorials, const TransitionTable& transitions = default_transitions(),
                 const ChatRules& chat = default_chat_rules(), exec::Limits limits = {});

  HandleResult handle_message(const SessionState& state, std::string_view text) const;

  /// handle_message with the classifier's answer supplied by the caller.
  HandleResult route(const SessionState& state, std::string_view text, intent::Intent intent) const;

  /// Grades `code` against `exercise_id` outside the chat flow and records
  /// the exercise as the most recent one.
  std::optional<GradeFeedback> submit(SessionState& state, std::string_view exercise_id, std::string_view code) const;

  const std::vector<grading::Exercise>& bank() const { return bank_; }
  const TutorialRepository& tutorials() const { return tutorials_; }

 private:
  HandleResult run(Action action, PendingKind next, const SessionState& state, std::string_view text,
                   intent::Intent intent) const;
  std::string topic_list() const;

  const intent::IntentModel& model_;
  const std::vector<grading::Exercise>& bank_;
  const TutorialRepository& tutorials_;
  const TransitionTable& transitions_;
  const ChatRules& chat_;
  exec::Limits limits_;
};

}  // namespace pypal::dialogue
