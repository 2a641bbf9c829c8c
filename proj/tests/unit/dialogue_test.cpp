#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pypal/dialogue/dialogue.hpp"

using namespace pypal;
using namespace pypal::dialogue;
using intent::Intent;

namespace {

const std::string kData = PYPAL_DATA_DIR;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Fixture {
  intent::IntentModel model =
      intent::IntentModel::train_flat(intent::stratified_split(intent::generate_corpus(1, 50), 1).train);
  std::vector<grading::Exercise> bank = grading::load_bank(kData + "/bank");
  TutorialRepository tutorials = TutorialRepository::load(kData + "/tutorials.json");
  DialogueEngine engine{model, bank, tutorials};
};

const Fixture& fx() {
  static const Fixture f;
  return f;
}

SessionState fresh() {
  SessionState s;
  s.session_id = "s1";
  return s;
}

SessionState with_pending(PendingKind k, std::string exercise = "return_values") {
  SessionState s = fresh();
  s.last_exercise_id = exercise;
  s.pending = k;
  if (k != PendingKind::idle) s.pending_exercise_id = exercise;
  return s;
}

template <class T>
const T& only(const HandleResult& r) {
  REQUIRE(r.replies.size() == 1);
  REQUIRE(std::holds_alternative<T>(r.replies[0]));
  return std::get<T>(r.replies[0]);
}

}  // namespace

TEST_CASE("tutorial repository") {
  const auto& repo = fx().tutorials;
  CHECK(repo.all().size() == 6);
  for (auto topic : grading::kTopics) CHECK_FALSE(repo.get(topic).url.empty());
  CHECK(repo.get("variables").title == "Creating and Using Variables");
  CHECK_THROWS_AS(repo.get("recursion"), UnknownTopic);
  CHECK_THROWS_AS(TutorialRepository::from_json(R"({"format":"pypal-tutorials","version":1,
      "tutorials":{"loops":{"title":"t","url":"u"}}})"),
                  Error);
}

TEST_CASE("exercise lookup by topic") {
  CHECK(get_exercise(fx().bank, "arithmetic").title == "Practice Basic Arithmetic Operations");
  CHECK(get_exercise(fx().bank, "comparison").title == "Comparing Values with Comparison Operators");
  CHECK_THROWS_AS(get_exercise(fx().bank, "loops"), UnknownTopic);
}

TEST_CASE("fallback chat rules") {
  const auto& rules = default_chat_rules();
  CHECK(rules.match("hello") == "greeting");
  CHECK(rules.match("How can I stay motivated while learning to code?") == "encouragement");
  CHECK(rules.match("qwxz zzkp") == "capabilities");
  CHECK(rules.match("thank you so much") == "thanks");
  CHECK(rules.match("Hi, what can you do?") == "capabilities");
  CHECK(fallback_chat("hello") == fallback_chat("Hello!"));
  CHECK_FALSE(fallback_chat("qwxz").empty());
}

TEST_CASE("transition table covers every pending state and intent exactly once") {
  const auto& table = default_transitions();
  CHECK(table.row_count() == 48);
  auto doc = slurp(kData + "/tables/transitions.json");
  auto dup = doc;
  const std::string row = R"({
      "pending": "idle",
      "intent": "general_conversation",
      "action": "chat",
      "next": "idle"
    },)";
  dup.insert(dup.find("\"rows\": [") + 9, row);
  CHECK_THROWS_WITH_AS(TransitionTable::from_json(dup), doctest::Contains("duplicate"), Error);
  auto missing = doc;
  const auto at = missing.find(R"("intent": "exercise_none")");
  const auto start = missing.rfind('{', at);
  const auto end = missing.find('}', at);
  missing.erase(start, end - start + 2);
  CHECK_THROWS_WITH_AS(TransitionTable::from_json(missing), doctest::Contains("no transition"), Error);
}

TEST_CASE("every (pending, intent) pair has one well-formed outcome") {
  const auto& engine = fx().engine;
  for (PendingKind pending : kAllPendingKinds) {
    for (Intent i : intent::kAllIntents) {
      CAPTURE(to_string(pending));
      CAPTURE(intent::to_string(i));
      const SessionState before = with_pending(pending);
      const auto r = engine.route(before, "print(1)", i);
      CHECK(r.replies.size() == 1);
      REQUIRE(r.action.has_value());
      CHECK(*r.action == default_transitions().lookup(pending, i).action);
      CHECK(r.state.session_id == before.session_id);
      CHECK((r.state.pending == PendingKind::idle) == r.state.pending_exercise_id.empty());
      if (r.state.pending != PendingKind::idle) CHECK(grading::find_exercise(fx().bank, r.state.pending_exercise_id));
      if (pending == PendingKind::idle) {
        CHECK(r.state.pending != PendingKind::awaiting_code);
      }
      if (pending == PendingKind::awaiting_code) {
        CHECK(r.state.pending == PendingKind::idle);
        CHECK(kind_of(r.replies[0]) == ReplyKind::grade_feedback);
      }
      if (pending == PendingKind::awaiting_submission_confirm) {
        CHECK(r.state.pending == PendingKind::awaiting_submission_confirm);
        CHECK(kind_of(r.replies[0]) == ReplyKind::clarification);
      }
      for (const auto& reply : r.replies) {
        if (auto* link = std::get_if<TutorialLink>(&reply)) CHECK(fx().tutorials.get(link->topic).url == link->url);
        if (auto* p = std::get_if<ExercisePrompt>(&reply)) CHECK(grading::find_exercise(fx().bank, p->exercise.id));
      }
    }
  }
}

TEST_CASE("requests for videos and exercises") {
  const auto& engine = fx().engine;
  auto r = engine.handle_message(fresh(), "Can you show me a video on Python variables?");
  const auto& link = only<TutorialLink>(r);
  CHECK(link.topic == "variables");
  CHECK(link.url == fx().tutorials.get("variables").url);
  CHECK(r.state.last_tutorial_topic == std::optional<std::string>("variables"));

  r = engine.handle_message(fresh(), "I'd like to practice basic arithmetic in Python.");
  CHECK(only<ExercisePrompt>(r).exercise.id == "arithmetic");
  CHECK(r.state.last_exercise_id == std::optional<std::string>("arithmetic"));

  r = engine.handle_message(fresh(), "Is there a video explaining the difference between global and local variables in Python?");
  const auto& text = only<TextReply>(r).text;
  for (const auto& [topic, t] : fx().tutorials.all()) CHECK(text.find(t.title) != std::string::npos);
  CHECK(r.state == fresh());

  r = engine.handle_message(fresh(), "How can I stay motivated while learning to code?");
  CHECK(only<TextReply>(r).text == default_chat_rules().respond("How can I stay motivated while learning to code?"));
}

TEST_CASE("confirm, code, feedback") {
  const auto& engine = fx().engine;
  SessionState s = fresh();
  s.last_exercise_id = "return_values";

  auto r = engine.handle_message(s, "I've finished the exercise and I'm ready to submit.");
  const auto& q = only<Clarification>(r);
  CHECK(q.question.find("most recent exercise") != std::string::npos);
  CHECK(q.question.find("Working with Function Return Values") != std::string::npos);
  CHECK(r.state.pending == PendingKind::awaiting_submission_confirm);
  CHECK(r.state.pending_exercise_id == "return_values");

  r = engine.handle_message(r.state, "yes");
  only<TextReply>(r);
  CHECK(r.state.pending == PendingKind::awaiting_code);

  r = engine.handle_message(r.state, slurp(kData + "/fixtures/average_undefined_name.py"));
  const auto& fb = only<GradeFeedback>(r);
  CHECK(fb.exercise_id == "return_values");
  CHECK(fb.report.status == grading::GradeStatus::runtime_error);
  CHECK(fb.report.feedback == slurp(kData + "/fixtures/average_undefined_name.feedback.txt"));
  CHECK(r.state.pending == PendingKind::idle);
  CHECK(r.state.pending_exercise_id.empty());
}

TEST_CASE("declining and unclear confirmations") {
  const auto& engine = fx().engine;
  auto awaiting = with_pending(PendingKind::awaiting_submission_confirm);

  auto r = engine.handle_message(awaiting, "no");
  CHECK(r.state.pending == PendingKind::idle);
  CHECK(r.state.last_exercise_id == std::optional<std::string>("return_values"));

  r = engine.handle_message(awaiting, "maybe later");
  only<Clarification>(r);
  CHECK(r.state.pending == PendingKind::awaiting_submission_confirm);
  CHECK(r.state.confirm_reprompts == 1);
  r = engine.handle_message(r.state, "hmm");
  only<TextReply>(r);
  CHECK(r.state.pending == PendingKind::idle);

  r = engine.handle_message(awaiting, "maybe");
  r = engine.handle_message(r.state, "Sure, go ahead");
  CHECK(r.state.pending == PendingKind::awaiting_code);
  CHECK(r.state.confirm_reprompts == 0);
}

TEST_CASE("submission without a recent exercise asks which one") {
  auto r = fx().engine.handle_message(fresh(), "I've finished the exercise and I'm ready to submit.");
  const auto& q = only<Clarification>(r);
  CHECK(q.options.size() == 6);
  CHECK(r.state.pending == PendingKind::idle);
}

TEST_CASE("exercises removed from the bank reset the session") {
  std::vector<grading::Exercise> small(fx().bank.begin(), fx().bank.begin() + 1);
  DialogueEngine engine(fx().model, small, fx().tutorials);
  auto r = engine.handle_message(with_pending(PendingKind::awaiting_code, "return_values"), "print(8)");
  CHECK(only<TextReply>(r).text.find("Sorry") != std::string::npos);
  CHECK(r.state.pending == PendingKind::idle);
  r = engine.handle_message(with_pending(PendingKind::awaiting_submission_confirm, "return_values"), "yes");
  CHECK(r.state.pending == PendingKind::idle);
  auto idle = fresh();
  idle.last_exercise_id = "return_values";
  r = engine.route(idle, "submit", Intent::ask_submission);
  CHECK(r.state.pending == PendingKind::idle);
  CHECK(only<TextReply>(r).text.find("Sorry") != std::string::npos);
}

TEST_CASE("identical idle messages give identical replies") {
  const auto& engine = fx().engine;
  for (const auto& q : intent::example_queries()) {
    auto a = engine.handle_message(fresh(), q.text);
    auto b = engine.handle_message(fresh(), q.text);
    CHECK(a.state == b.state);
    REQUIRE(a.replies.size() == b.replies.size());
    for (std::size_t i = 0; i < a.replies.size(); ++i) CHECK(kind_of(a.replies[i]) == kind_of(b.replies[i]));
    if (auto* t = std::get_if<TextReply>(&a.replies[0])) CHECK(t->text == std::get<TextReply>(b.replies[0]).text);
  }
}

TEST_CASE("direct submission") {
  SessionState s = fresh();
  auto fb = fx().engine.submit(s, "functions", slurp(kData + "/solutions/functions.py"));
  REQUIRE(fb);
  CHECK(fb->report.status == grading::GradeStatus::passed);
  CHECK(s.last_exercise_id == std::optional<std::string>("functions"));
  CHECK_FALSE(fx().engine.submit(s, "nope", "x = 1").has_value());
}
