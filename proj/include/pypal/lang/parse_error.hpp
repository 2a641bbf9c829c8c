#pragma once

#include <string>
#include <string_view>

namespace pypal::lang {

enum class ParseErrorKind {
  missing_colon,
  unterminated_string,
  missing_operator,
  invalid_assign_target,
  unmatched_paren,
  bad_indent,
  generic,
};

inline constexpr ParseErrorKind kAllParseErrorKinds[] = {
    ParseErrorKind::missing_colon,   ParseErrorKind::unterminated_string,
    ParseErrorKind::missing_operator, ParseErrorKind::invalid_assign_target,
    ParseErrorKind::unmatched_paren, ParseErrorKind::bad_indent,
    ParseErrorKind::generic,
};

std::string_view to_string(ParseErrorKind kind) noexcept;

struct ParseError {
  ParseErrorKind kind = ParseErrorKind::generic;
  int line = 1;
  int column = 1;
  std::string detail;
  std::string offending_lexeme;

  bool operator==(const ParseError&) const = default;
};

/// "SyntaxError" or "IndentationError", the class CPython would raise.
std::string_view python_exception_name(const ParseError& err) noexcept;

/// The message CPython would print, e.g. "SyntaxError: expected ':'".
std::string raw_message(const ParseError& err);

}  // namespace pypal::lang
