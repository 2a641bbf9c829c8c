#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pypal/dialogue/dialogue.hpp"

namespace pypal::dialogue {

namespace detail {
extern const std::string_view kEmbeddedTransitions;
extern const std::string_view kEmbeddedChatRules;
}  // namespace detail

namespace {

using nlohmann::json;
using intent::Intent;
using intent::MainIntent;

constexpr Action kAllActions[] = {Action::chat,        Action::send_tutorial,      Action::send_exercise,
                                  Action::list_topics, Action::confirm_submission, Action::reprompt_confirm,
                                  Action::grade_code};

Action action_from_string(std::string_view name) {
  for (Action a : kAllActions) {
    if (to_string(a) == name) return a;
  }
  throw Error("unknown action '" + std::string(name) + "'");
}

json parse_table(std::string_view text, const char* format) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string(format) + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != format || doc.value("version", 0) != 1) {
    throw Error(std::string("expected format \"") + format + "\" version 1");
  }
  return doc;
}

std::vector<std::string> string_list(const json& doc, const char* field) {
  if (!doc.contains(field) || !doc[field].is_array()) throw Error(std::string("missing list '") + field + "'");
  std::vector<std::string> out;
  for (const auto& v : doc[field]) {
    if (!v.is_string()) throw Error(std::string("'") + field + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

void check_row(PendingKind pending, Intent intent, const Transition& t) {
  const MainIntent main = intent::main_intent(intent);
  const auto sub = intent::sub_intent(intent);
  const bool request = main == MainIntent::video_request || main == MainIntent::exercise_request;
  bool ok = true;
  switch (t.action) {
    case Action::send_tutorial:
      ok = main == MainIntent::video_request && sub != intent::SubIntent::none;
      break;
    case Action::send_exercise:
      ok = main == MainIntent::exercise_request && sub != intent::SubIntent::none;
      break;
    case Action::list_topics:
      ok = request;
      break;
    case Action::reprompt_confirm:
      ok = pending == PendingKind::awaiting_submission_confirm;
      break;
    case Action::grade_code:
      ok = pending == PendingKind::awaiting_code;
      break;
    default:
      break;
  }
  const PendingKind expected_next = t.action == Action::confirm_submission || t.action == Action::reprompt_confirm
                                        ? PendingKind::awaiting_submission_confirm
                                        : PendingKind::idle;
  if (!ok || t.next != expected_next) {
    throw Error("transition (" + std::string(to_string(pending)) + ", " + std::string(intent::to_string(intent)) +
                ") -> " + std::string(to_string(t.action)) + "/" + std::string(to_string(t.next)) +
                " is inconsistent");
  }
}

bool contains_sequence(const std::vector<std::string>& tokens, const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > tokens.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= tokens.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) return true;
  }
  return false;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string_view to_string(Action a) noexcept {
  switch (a) {
    case Action::chat: return "chat";
    case Action::send_tutorial: return "send_tutorial";
    case Action::send_exercise: return "send_exercise";
    case Action::list_topics: return "list_topics";
    case Action::confirm_submission: return "confirm_submission";
    case Action::reprompt_confirm: return "reprompt_confirm";
    case Action::grade_code: return "grade_code";
  }
  return "chat";
}

TransitionTable TransitionTable::from_json(std::string_view text) {
  const json doc = parse_table(text, "pypal-transitions");
  TransitionTable table;
  table.affirmative_ = string_list(doc, "affirmative");
  table.negative_ = string_list(doc, "negative");
  for (const auto& word : table.affirmative_) {
    if (std::find(table.negative_.begin(), table.negative_.end(), word) != table.negative_.end()) {
      throw Error("'" + word + "' is both affirmative and negative");
    }
  }
  if (!doc.contains("rows") || !doc["rows"].is_array()) throw Error("transition table lacks 'rows'");
  for (const auto& row : doc["rows"]) {
    if (!row.is_object()) throw Error("transition rows must be objects");
    const PendingKind pending = pending_from_string(row.value("pending", ""));
    const Intent intent = intent::intent_from_string(row.value("intent", ""));
    Transition t{action_from_string(row.value("action", "")), pending_from_string(row.value("next", ""))};
    check_row(pending, intent, t);
    if (!table.rows_.emplace(std::pair{pending, intent}, t).second) {
      throw Error("duplicate transition for (" + std::string(to_string(pending)) + ", " +
                  std::string(intent::to_string(intent)) + ")");
    }
  }
  for (PendingKind p : kAllPendingKinds) {
    for (Intent i : intent::kAllIntents) {
      if (!table.rows_.count({p, i})) {
        throw Error("no transition for (" + std::string(to_string(p)) + ", " + std::string(intent::to_string(i)) +
                    ")");
      }
    }
  }
  return table;
}

TransitionTable TransitionTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read transition table " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return from_json(text.str());
}

const Transition& TransitionTable::lookup(PendingKind pending, Intent intent) const {
  return rows_.at({pending, intent});
}

bool TransitionTable::is_affirmative(std::string_view text) const {
  const auto tokens = intent::tokenize_query(text);
  if (tokens.empty() || is_negative(text)) return false;
  return std::find(affirmative_.begin(), affirmative_.end(), tokens.front()) != affirmative_.end();
}

bool TransitionTable::is_negative(std::string_view text) const {
  const auto tokens = intent::tokenize_query(text);
  if (tokens.empty()) return false;
  return std::find(negative_.begin(), negative_.end(), tokens.front()) != negative_.end();
}

const TransitionTable& default_transitions() {
  static const TransitionTable table = TransitionTable::from_json(detail::kEmbeddedTransitions);
  return table;
}

ChatRules ChatRules::from_json(std::string_view text) {
  const json doc = parse_table(text, "pypal-chat-rules");
  ChatRules rules;
  if (!doc.contains("rules") || !doc["rules"].is_array()) throw Error("chat rules lack 'rules'");
  std::set<std::string> ids;
  for (const auto& r : doc["rules"]) {
    Rule rule;
    rule.id = r.value("id", "");
    if (rule.id.empty() || !ids.insert(rule.id).second) throw Error("chat rule ids must be unique and non-empty");
    for (const auto& k : string_list(r, "keywords")) rule.keywords.push_back(intent::tokenize_query(k));
    rule.responses = string_list(r, "responses");
    if (rule.responses.empty()) throw Error("chat rule '" + rule.id + "' has no responses");
    rules.rules_.push_back(std::move(rule));
  }
  const std::string fallback = doc.value("default", "");
  auto it = std::find_if(rules.rules_.begin(), rules.rules_.end(), [&](const Rule& r) { return r.id == fallback; });
  if (it == rules.rules_.end()) throw Error("chat rules name an unknown default '" + fallback + "'");
  rules.default_index_ = static_cast<std::size_t>(it - rules.rules_.begin());
  return rules;
}

std::string ChatRules::match(std::string_view text) const {
  const auto tokens = intent::tokenize_query(text);
  for (const auto& rule : rules_) {
    for (const auto& k : rule.keywords) {
      if (contains_sequence(tokens, k)) return rule.id;
    }
  }
  return rules_[default_index_].id;
}

std::string ChatRules::respond(std::string_view text) const {
  const std::string id = match(text);
  const Rule& rule = *std::find_if(rules_.begin(), rules_.end(), [&](const Rule& r) { return r.id == id; });
  std::string normalized;
  for (const auto& t : intent::tokenize_query(text)) normalized += t + " ";
  return rule.responses[fnv1a(normalized) % rule.responses.size()];
}

const ChatRules& default_chat_rules() {
  static const ChatRules rules = ChatRules::from_json(detail::kEmbeddedChatRules);
  return rules;
}

std::string fallback_chat(std::string_view text) { return default_chat_rules().respond(text); }

}  // namespace pypal::dialogue
