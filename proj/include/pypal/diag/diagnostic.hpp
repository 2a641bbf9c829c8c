#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pypal/exec/interpreter.hpp"
#include "pypal/lang/ast.hpp"
#include "pypal/lang/parse_error.hpp"

namespace pypal::diag {

enum class ErrorCategory {
  undefined_name,
  typographical,
  use_before_assignment,
  data_type_or_value,
  function_related,
  indentation,
  logical_or_semantic,
  fallback,
};

inline constexpr ErrorCategory kAllCategories[] = {
    ErrorCategory::undefined_name,       ErrorCategory::typographical,
    ErrorCategory::use_before_assignment, ErrorCategory::data_type_or_value,
    ErrorCategory::function_related,     ErrorCategory::indentation,
    ErrorCategory::logical_or_semantic,  ErrorCategory::fallback,
};

std::string_view to_string(ErrorCategory c) noexcept;
/// Inverse of to_string; throws pypal::Error on an unknown name.
ErrorCategory category_from_string(std::string_view name);

inline constexpr std::string_view kFallbackPattern = "fallback";

struct Diagnostic {
  ErrorCategory category = ErrorCategory::fallback;
  std::string pattern_id;
  int line = 0;
  std::optional<std::string> subject;
  std::string raw_message;  // the interpreter's or parser's own message
  std::string headline;     // instantiated template headline; empty for fallback
  std::vector<std::string> suggestions;
};

struct FeedbackTemplate {
  std::string id;
  ErrorCategory category = ErrorCategory::fallback;
  std::string headline;
  std::vector<std::string> suggestions;
};

/// Values substituted into `{subject}`, `{line}`, `{candidate}` and `{detail}`.
struct TemplateSlots {
  std::optional<std::string> subject;
  int line = 0;
  std::string candidate;
  std::string detail;
};

/// pattern-id -> template. Immutable once built.
class TemplateTable {
 public:
  /// Parses the JSON table format; throws pypal::Error naming the problem.
  static TemplateTable from_json(std::string_view text);
  static TemplateTable load(const std::string& path);

  const FeedbackTemplate* find(std::string_view pattern_id) const;
  const std::map<std::string, FeedbackTemplate, std::less<>>& all() const { return templates_; }

  /// Fills in a template. Throws pypal::Error for an unknown pattern-id.
  Diagnostic instantiate(std::string_view pattern_id, const TemplateSlots& slots,
                         std::string raw_message) const;

 private:
  std::map<std::string, FeedbackTemplate, std::less<>> templates_;
};

/// The table shipped with the library (compiled in from
/// data/tables/feedback_templates.json).
const TemplateTable& default_templates();

Diagnostic make_fallback(std::string raw_message, int line);

Diagnostic classify_parse_error(const lang::ParseError& err, std::string_view source,
                                const TemplateTable& table = default_templates());

Diagnostic classify_runtime_error(const exec::RuntimeError& err, const lang::Program& program,
                                  const TemplateTable& table = default_templates());

/// Static findings in source order: calls left as bare names and top-level
/// reads that precede the only binding of a name.
std::vector<Diagnostic> lint_program(const lang::Program& program,
                                     const TemplateTable& table = default_templates());

/// Fallback: "<raw> (line n)". Otherwise the headline, location and the
/// numbered suggestion list, without a trailing newline.
std::string render_feedback(const Diagnostic& d);

/// Edit distance with unit costs.
std::size_t levenshtein(std::string_view a, std::string_view b);

}  // namespace pypal::diag
