#pragma once

#include <string>
#include <string_view>

namespace pypal::lang {

enum class TokenKind {
  name,
  int_literal,
  float_literal,
  string_literal,
  fstring_literal,
  op,
  assign,
  delimiter,
  newline,
  indent,
  dedent,
  eof,
};

std::string_view to_string(TokenKind kind) noexcept;

/// A lexical token. String and f-string lexemes keep their quotes and prefix
/// exactly as written; the parser decodes them.
struct Token {
  TokenKind kind = TokenKind::eof;
  std::string lexeme;
  int line = 1;
  int column = 1;

  bool operator==(const Token&) const = default;
};

/// Python keywords. `True`, `False` and `None` are keywords too but are
/// parsed as literals.
bool is_keyword(std::string_view word) noexcept;

}  // namespace pypal::lang
