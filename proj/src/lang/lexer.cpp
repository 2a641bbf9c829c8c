#include "pypal/lang/lexer.hpp"

#include "lexer_internal.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <cctype>
#include <string>

namespace pypal::lang {

std::string_view to_string(TokenKind kind) noexcept {
  switch (kind) {
    case TokenKind::name: return "name";
    case TokenKind::int_literal: return "int-literal";
    case TokenKind::float_literal: return "float-literal";
    case TokenKind::string_literal: return "string-literal";
    case TokenKind::fstring_literal: return "fstring-literal";
    case TokenKind::op: return "operator";
    case TokenKind::assign: return "assign";
    case TokenKind::delimiter: return "delimiter";
    case TokenKind::newline: return "newline";
    case TokenKind::indent: return "indent";
    case TokenKind::dedent: return "dedent";
    case TokenKind::eof: return "eof";
  }
  return "unknown";
}

bool is_keyword(std::string_view word) noexcept {
  static constexpr std::array<std::string_view, 35> kKeywords = {
      "False",  "None",   "True",    "and",      "as",       "assert", "async",
      "await",  "break",  "class",   "continue", "def",      "del",    "elif",
      "else",   "except", "finally", "for",      "from",     "global", "if",
      "import", "in",     "is",      "lambda",   "nonlocal", "not",    "or",
      "pass",   "raise",  "return",  "try",      "while",    "with",   "yield"};
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::string_view to_string(ParseErrorKind kind) noexcept {
  switch (kind) {
    case ParseErrorKind::missing_colon: return "missing-colon";
    case ParseErrorKind::unterminated_string: return "unterminated-string";
    case ParseErrorKind::missing_operator: return "missing-operator";
    case ParseErrorKind::invalid_assign_target: return "invalid-assign-target";
    case ParseErrorKind::unmatched_paren: return "unmatched-paren";
    case ParseErrorKind::bad_indent: return "bad-indent";
    case ParseErrorKind::generic: return "generic";
  }
  return "generic";
}

std::string_view python_exception_name(const ParseError& err) noexcept {
  return err.kind == ParseErrorKind::bad_indent ? "IndentationError" : "SyntaxError";
}

std::string raw_message(const ParseError& err) {
  return std::string(python_exception_name(err)) + ": " + err.detail;
}

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }

ParseError make_error(ParseErrorKind kind, int line, int column, std::string detail,
                      std::string lexeme = {}) {
  return ParseError{kind, line, column, std::move(detail), std::move(lexeme)};
}

class Lexer {
 public:
  explicit Lexer(std::string_view source) : source_(source) {}

  detail::PartialTokens run() {
    std::vector<int> indents{0};
    int line_no = 0;
    int last_line = 1;
    int last_col = 1;
    std::size_t pos = 0;
    while (pos < source_.size()) {
      std::size_t end = source_.find('\n', pos);
      if (end == std::string_view::npos) end = source_.size();
      std::string_view line = source_.substr(pos, end - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      pos = end + 1;
      ++line_no;
      last_line = line_no;
      last_col = static_cast<int>(line.size()) + 1;

      int width = 0;
      std::size_t i = 0;
      for (; i < line.size(); ++i) {
        if (line[i] == ' ') {
          ++width;
        } else if (line[i] == '\t') {
          width = (width / kTabWidth + 1) * kTabWidth;
        } else if (line[i] == '\f') {
          width = 0;
        } else {
          break;
        }
      }
      if (i == line.size() || line[i] == '#') continue;  // blank or comment-only

      const int first_col = static_cast<int>(i) + 1;
      if (width > indents.back()) {
        indents.push_back(width);
        tokens_.push_back({TokenKind::indent, std::string(line.substr(0, i)), line_no, 1});
      } else if (width < indents.back()) {
        while (width < indents.back()) {
          indents.pop_back();
          tokens_.push_back({TokenKind::dedent, "", line_no, first_col});
        }
        if (width != indents.back()) {
          return fail(make_error(ParseErrorKind::bad_indent, line_no, first_col,
                                 "unindent does not match any outer indentation level"));
        }
      }

      if (auto err = scan_line(line, i, line_no)) return fail(std::move(*err));
      tokens_.push_back({TokenKind::newline, "", line_no, static_cast<int>(line.size()) + 1});
    }
    while (indents.size() > 1) {
      indents.pop_back();
      tokens_.push_back({TokenKind::dedent, "", last_line, last_col});
    }
    tokens_.push_back({TokenKind::eof, "", last_line, last_col});
    return {std::move(tokens_), std::nullopt};
  }

 private:
  detail::PartialTokens fail(ParseError err) { return {std::move(tokens_), std::move(err)}; }

  std::optional<ParseError> scan_line(std::string_view line, std::size_t i, int line_no) {
    while (i < line.size()) {
      const char c = line[i];
      const int col = static_cast<int>(i) + 1;
      if (c == ' ' || c == '\t' || c == '\f') {
        ++i;
        continue;
      }
      if (c == '#') break;

      if (is_ident_start(c)) {
        std::size_t j = i;
        while (j < line.size() && is_ident_char(line[j])) ++j;
        std::string_view word = line.substr(i, j - i);
        if (j < line.size() && (line[j] == '"' || line[j] == '\'')) {
          if (word == "f" || word == "F") {
            auto err = scan_string(line, j, line_no, col, TokenKind::fstring_literal, i);
            if (err) return err;
            i = next_;
            continue;
          }
          static constexpr std::array<std::string_view, 4> kOtherPrefixes = {"r", "b", "u", "rb"};
          std::string lower(word);
          std::transform(lower.begin(), lower.end(), lower.begin(),
                         [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
          if (std::find(kOtherPrefixes.begin(), kOtherPrefixes.end(), lower) !=
                  kOtherPrefixes.end() ||
              lower == "br" || lower == "fr" || lower == "rf") {
            return make_error(ParseErrorKind::generic, line_no, col,
                              "string prefix '" + std::string(word) + "' is not supported",
                              std::string(word));
          }
        }
        tokens_.push_back({TokenKind::name, std::string(word), line_no, col});
        i = j;
        continue;
      }

      if (is_digit(c) || (c == '.' && i + 1 < line.size() && is_digit(line[i + 1]))) {
        if (auto err = scan_number(line, i, line_no)) return err;
        i = next_;
        continue;
      }

      if (c == '"' || c == '\'') {
        if (auto err = scan_string(line, i, line_no, col, TokenKind::string_literal, i)) {
          return err;
        }
        i = next_;
        continue;
      }

      auto two = line.substr(i, 2);
      auto three = line.substr(i, 3);
      if (three == "**=" || three == "//=") {
        tokens_.push_back({TokenKind::assign, std::string(three), line_no, col});
        i += 3;
        continue;
      }
      if (two == "+=" || two == "-=" || two == "*=" || two == "/=" || two == "%=") {
        tokens_.push_back({TokenKind::assign, std::string(two), line_no, col});
        i += 2;
        continue;
      }
      if (two == "**" || two == "//" || two == "==" || two == "!=" || two == "<=" ||
          two == ">=") {
        tokens_.push_back({TokenKind::op, std::string(two), line_no, col});
        i += 2;
        continue;
      }
      if (c == '+' || c == '-' || c == '*' || c == '/' || c == '%' || c == '<' || c == '>') {
        tokens_.push_back({TokenKind::op, std::string(1, c), line_no, col});
        ++i;
        continue;
      }
      if (c == '=') {
        tokens_.push_back({TokenKind::assign, "=", line_no, col});
        ++i;
        continue;
      }
      if (c == '(' || c == ')' || c == ',' || c == ':') {
        tokens_.push_back({TokenKind::delimiter, std::string(1, c), line_no, col});
        ++i;
        continue;
      }

      std::string shown(1, c);
      if (static_cast<unsigned char>(c) >= 0x80) {
        return make_error(ParseErrorKind::generic, line_no, col,
                          "invalid non-printable or non-ASCII character in identifier", shown);
      }
      std::string detail;
      switch (c) {
        case '[': case ']': case '{': case '}':
          detail = "invalid syntax ('" + shown + "': lists, sets and dictionaries are not supported)";
          break;
        case '.':
          detail = "invalid syntax ('.': attribute access is not supported)";
          break;
        case '\\':
          detail = "unexpected character after line continuation character";
          break;
        default:
          detail = "invalid character '" + shown + "'";
      }
      return make_error(ParseErrorKind::generic, line_no, col, std::move(detail), shown);
    }
    return std::nullopt;
  }

  std::optional<ParseError> scan_number(std::string_view line, std::size_t i, int line_no) {
    const int col = static_cast<int>(i) + 1;
    std::size_t j = i;
    bool is_float = false;
    while (j < line.size() && is_digit(line[j])) ++j;
    if (j < line.size() && line[j] == '.') {
      is_float = true;
      ++j;
      while (j < line.size() && is_digit(line[j])) ++j;
    }
    if (j < line.size() && (line[j] == 'e' || line[j] == 'E')) {
      std::size_t k = j + 1;
      if (k < line.size() && (line[k] == '+' || line[k] == '-')) ++k;
      if (k < line.size() && is_digit(line[k])) {
        is_float = true;
        j = k;
        while (j < line.size() && is_digit(line[j])) ++j;
      }
    }
    std::string lexeme(line.substr(i, j - i));
    if (j < line.size() && (is_ident_char(line[j]) || line[j] == '.')) {
      return make_error(ParseErrorKind::generic, line_no, col, "invalid decimal literal",
                        lexeme + line[j]);
    }
    if (!is_float && lexeme.size() > 1 && lexeme[0] == '0' &&
        lexeme.find_first_not_of('0') != std::string::npos) {
      return make_error(ParseErrorKind::generic, line_no, col,
                        "leading zeros in decimal integer literals are not permitted", lexeme);
    }
    tokens_.push_back(
        {is_float ? TokenKind::float_literal : TokenKind::int_literal, lexeme, line_no, col});
    next_ = j;
    return std::nullopt;
  }

  // `quote_at` is the opening quote; `start` is where the lexeme begins
  // (the prefix for f-strings).
  std::optional<ParseError> scan_string(std::string_view line, std::size_t quote_at, int line_no,
                                        int col, TokenKind kind, std::size_t start) {
    const char quote = line[quote_at];
    if (line.substr(quote_at, 3) == std::string(3, quote)) {
      return make_error(ParseErrorKind::generic, line_no, col,
                        "triple-quoted strings are not supported",
                        std::string(line.substr(start, quote_at - start + 3)));
    }
    std::size_t j = quote_at + 1;
    while (j < line.size() && line[j] != quote) {
      if (line[j] == '\\') ++j;
      ++j;
    }
    if (j >= line.size()) {
      return make_error(ParseErrorKind::unterminated_string, line_no,
                        static_cast<int>(quote_at) + 1,
                        "unterminated string literal (detected at line " +
                            std::to_string(line_no) + ")",
                        std::string(line.substr(start)));
    }
    tokens_.push_back({kind, std::string(line.substr(start, j + 1 - start)), line_no, col});
    next_ = j + 1;
    return std::nullopt;
  }

  std::string_view source_;
  std::vector<Token> tokens_;
  std::size_t next_ = 0;
};

}  // namespace

namespace detail {
PartialTokens tokenize_partial(std::string_view source) { return Lexer(source).run(); }
}  // namespace detail

Result<std::vector<Token>, ParseError> tokenize(std::string_view source) {
  auto partial = Lexer(source).run();
  if (partial.error) return std::move(*partial.error);
  return std::move(partial.tokens);
}

}  // namespace pypal::lang
