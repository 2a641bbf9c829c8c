#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pypal/diag/diagnostic.hpp"
#include "pypal/error.hpp"

namespace pypal::diag {

namespace detail {
extern const std::string_view kEmbeddedTemplates;
}

namespace {

constexpr std::string_view kFormatTag = "pypal-feedback-templates";
constexpr int kFormatVersion = 1;

std::string substitute(std::string text, const TemplateSlots& slots) {
  const std::pair<std::string_view, std::string> pairs[] = {
      {"{subject}", slots.subject.value_or("")},
      {"{line}", std::to_string(slots.line)},
      {"{candidate}", slots.candidate},
      {"{detail}", slots.detail},
  };
  for (const auto& [key, value] : pairs) {
    std::size_t at = 0;
    while ((at = text.find(key, at)) != std::string::npos) {
      text.replace(at, key.size(), value);
      at += value.size();
    }
  }
  return text;
}

}  // namespace

std::string_view to_string(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::undefined_name: return "undefined-name";
    case ErrorCategory::typographical: return "typographical";
    case ErrorCategory::use_before_assignment: return "use-before-assignment";
    case ErrorCategory::data_type_or_value: return "data-type-or-value";
    case ErrorCategory::function_related: return "function-related";
    case ErrorCategory::indentation: return "indentation";
    case ErrorCategory::logical_or_semantic: return "logical-or-semantic";
    case ErrorCategory::fallback: return "fallback";
  }
  return "fallback";
}

ErrorCategory category_from_string(std::string_view name) {
  for (ErrorCategory c : kAllCategories) {
    if (to_string(c) == name) return c;
  }
  throw Error("unknown error category '" + std::string(name) + "'");
}

TemplateTable TemplateTable::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("feedback template table is not valid JSON: ") + e.what());
  }
  if (doc.value("format", "") != kFormatTag || doc.value("version", 0) != kFormatVersion) {
    throw Error("feedback template table has the wrong format tag or version");
  }
  TemplateTable table;
  for (const auto& entry : doc.at("templates")) {
    FeedbackTemplate t;
    try {
      t.id = entry.at("id").get<std::string>();
      t.category = category_from_string(entry.at("category").get<std::string>());
      t.headline = entry.at("headline").get<std::string>();
      t.suggestions = entry.at("suggestions").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("feedback template entry is malformed: ") + e.what());
    }
    if (t.id == kFallbackPattern || t.category == ErrorCategory::fallback) {
      throw Error("template '" + t.id + "' uses the reserved fallback pattern or category");
    }
    if (t.suggestions.empty()) throw Error("template '" + t.id + "' has no suggestions");
    const std::string id = t.id;
    if (!table.templates_.emplace(id, std::move(t)).second) {
      throw Error("duplicate feedback template '" + id + "'");
    }
  }
  return table;
}

TemplateTable TemplateTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read feedback template table " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

const FeedbackTemplate* TemplateTable::find(std::string_view pattern_id) const {
  auto it = templates_.find(pattern_id);
  return it == templates_.end() ? nullptr : &it->second;
}

Diagnostic TemplateTable::instantiate(std::string_view pattern_id, const TemplateSlots& slots,
                                      std::string raw_message) const {
  const FeedbackTemplate* t = find(pattern_id);
  if (!t) throw Error("no feedback template for pattern '" + std::string(pattern_id) + "'");
  Diagnostic d;
  d.category = t->category;
  d.pattern_id = t->id;
  d.line = slots.line;
  d.subject = slots.subject;
  d.raw_message = std::move(raw_message);
  d.headline = substitute(t->headline, slots);
  for (const auto& s : t->suggestions) d.suggestions.push_back(substitute(s, slots));
  return d;
}

const TemplateTable& default_templates() {
  static const TemplateTable table = TemplateTable::from_json(detail::kEmbeddedTemplates);
  return table;
}

Diagnostic make_fallback(std::string raw_message, int line) {
  Diagnostic d;
  d.category = ErrorCategory::fallback;
  d.pattern_id = std::string(kFallbackPattern);
  d.line = line;
  d.raw_message = std::move(raw_message);
  return d;
}

std::string render_feedback(const Diagnostic& d) {
  if (d.category == ErrorCategory::fallback) {
    return d.raw_message + " (line " + std::to_string(d.line) + ")";
  }
  std::string out = "Error: " + d.headline + "\nLocation: line " + std::to_string(d.line) +
                    "\nThe error can be from:";
  for (std::size_t i = 0; i < d.suggestions.size(); ++i) {
    out += "\n" + std::to_string(i + 1) + ". " + d.suggestions[i];
  }
  return out;
}

}  // namespace pypal::diag
