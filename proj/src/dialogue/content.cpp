#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pypal/dialogue/dialogue.hpp"

namespace pypal::dialogue {

std::string_view to_string(PendingKind k) noexcept {
  switch (k) {
    case PendingKind::idle: return "idle";
    case PendingKind::awaiting_submission_confirm: return "awaiting_submission_confirm";
    case PendingKind::awaiting_code: return "awaiting_code";
  }
  return "idle";
}

PendingKind pending_from_string(std::string_view name) {
  for (PendingKind k : kAllPendingKinds) {
    if (to_string(k) == name) return k;
  }
  throw Error("unknown pending state '" + std::string(name) + "'");
}

ReplyKind kind_of(const Reply& r) noexcept { return static_cast<ReplyKind>(r.index()); }

std::string_view to_string(ReplyKind k) noexcept {
  switch (k) {
    case ReplyKind::text: return "text";
    case ReplyKind::tutorial_link: return "tutorial-link";
    case ReplyKind::exercise_prompt: return "exercise-prompt";
    case ReplyKind::grade_feedback: return "grade-feedback";
    case ReplyKind::clarification: return "clarification";
  }
  return "text";
}

TutorialRepository TutorialRepository::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("tutorial map is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "pypal-tutorials" || doc.value("version", 0) != 1) {
    throw Error("tutorial map must have format \"pypal-tutorials\" and version 1");
  }
  if (!doc.contains("tutorials") || !doc["tutorials"].is_object()) throw Error("tutorial map lacks 'tutorials'");
  TutorialRepository repo;
  for (const auto& [topic, entry] : doc["tutorials"].items()) {
    if (std::find(std::begin(grading::kTopics), std::end(grading::kTopics), topic) == std::end(grading::kTopics)) {
      throw Error("tutorial map names unknown topic '" + topic + "'");
    }
    if (!entry.is_object() || !entry.contains("url") || !entry["url"].is_string() || !entry.contains("title") ||
        !entry["title"].is_string()) {
      throw Error("tutorial '" + topic + "' needs string fields 'title' and 'url'");
    }
    repo.tutorials_[topic] = {topic, entry["title"].get<std::string>(), entry["url"].get<std::string>()};
  }
  return repo;
}

TutorialRepository TutorialRepository::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read tutorial map " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return from_json(text.str());
}

const Tutorial& TutorialRepository::get(std::string_view topic) const {
  auto it = tutorials_.find(topic);
  if (it == tutorials_.end()) throw UnknownTopic("no tutorial for topic '" + std::string(topic) + "'");
  return it->second;
}

const grading::Exercise& get_exercise(const std::vector<grading::Exercise>& bank, std::string_view topic) {
  for (const auto& ex : bank) {
    if (ex.topic == topic) return ex;
  }
  throw UnknownTopic("no exercise for topic '" + std::string(topic) + "'");
}

}  // namespace pypal::dialogue
