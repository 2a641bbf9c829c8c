#include "pypal/lang/parser.hpp"

#include <charconv>
#include <cstdlib>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "lexer_internal.hpp"

namespace pypal::lang {
namespace {

struct Failure {
  ParseError error;
};

bool is_literal_keyword(std::string_view word) {
  return word == "True" || word == "False" || word == "None";
}

bool is_atom_start(const Token& t) {
  switch (t.kind) {
    case TokenKind::int_literal:
    case TokenKind::float_literal:
    case TokenKind::string_literal:
    case TokenKind::fstring_literal:
      return true;
    case TokenKind::name:
      return !is_keyword(t.lexeme) || is_literal_keyword(t.lexeme);
    default:
      return false;
  }
}

std::string decode_escapes(std::string_view body) {
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '\\' || i + 1 == body.size()) {
      out.push_back(body[i]);
      continue;
    }
    const char e = body[++i];
    switch (e) {
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case 'r': out.push_back('\r'); break;
      case '0': out.push_back('\0'); break;
      case 'a': out.push_back('\a'); break;
      case 'b': out.push_back('\b'); break;
      case 'f': out.push_back('\f'); break;
      case 'v': out.push_back('\v'); break;
      case '\\': out.push_back('\\'); break;
      case '\'': out.push_back('\''); break;
      case '"': out.push_back('"'); break;
      default:
        out.push_back('\\');
        out.push_back(e);
    }
  }
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto ident_start = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  if (!ident_start(s[0])) return false;
  for (char c : s) {
    if (!ident_start(c) && !(c >= '0' && c <= '9')) return false;
  }
  return true;
}

class Parser {
 public:
  Parser(std::span<const Token> tokens, std::optional<ParseError> lex_error)
      : tokens_(tokens), lex_error_(std::move(lex_error)) {}

  Program run() {
    Program program;
    while (peek().kind != TokenKind::eof) {
      if (peek().kind == TokenKind::dedent) {
        advance();
        continue;
      }
      program.statements.push_back(statement());
    }
    if (deferred_) throw Failure{*deferred_};
    return program;
  }

 private:
  // --- token access -------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t at = pos_ + ahead;
    if (lex_error_ && at >= tokens_.size()) throw Failure{*lex_error_};
    return tokens_[std::min(at, tokens_.size() - 1)];
  }

  const Token& advance() {
    const Token& t = peek();
    if (pos_ < tokens_.size()) ++pos_;
    return t;
  }

  const Token& previous() const { return tokens_[pos_ == 0 ? 0 : pos_ - 1]; }

  bool at(TokenKind kind, std::string_view lexeme) const {
    const Token& t = peek();
    return t.kind == kind && t.lexeme == lexeme;
  }
  bool at_delim(std::string_view d) const { return at(TokenKind::delimiter, d); }
  bool at_op(std::string_view o) const { return at(TokenKind::op, o); }
  bool at_end_of_line() const {
    auto k = peek().kind;
    return k == TokenKind::newline || k == TokenKind::eof;
  }

  [[noreturn]] static void fail(ParseErrorKind kind, const Token& at, std::string detail) {
    throw Failure{ParseError{kind, at.line, at.column, std::move(detail), at.lexeme}};
  }

  void defer(ParseErrorKind kind, const Token& at, std::string detail) {
    if (!deferred_) deferred_ = ParseError{kind, at.line, at.column, std::move(detail), at.lexeme};
  }

  // Reports why the token after a complete expression cannot follow it.
  [[noreturn]] void fail_after_expression(const Token* open_paren) {
    const Token& t = peek();
    if (is_atom_start(t)) {
      fail(ParseErrorKind::missing_operator, t,
           "invalid syntax (missing operator between '" + previous().lexeme + "' and '" +
               t.lexeme + "')");
    }
    if (open_paren && (t.kind == TokenKind::newline || t.kind == TokenKind::eof)) {
      fail(ParseErrorKind::unmatched_paren, *open_paren, "'(' was never closed");
    }
    if (!open_paren && at_delim(")")) {
      fail(ParseErrorKind::unmatched_paren, t, "unmatched ')'");
    }
    if (open_paren && t.kind == TokenKind::assign) {
      fail(ParseErrorKind::generic, t, "invalid syntax (keyword arguments are not supported)");
    }
    if (t.kind == TokenKind::name && is_keyword(t.lexeme)) {
      fail(ParseErrorKind::generic, t,
           "invalid syntax ('" + t.lexeme + "' is not supported here)");
    }
    fail(ParseErrorKind::generic, t, "invalid syntax");
  }

  // --- statements ---------------------------------------------------------

  Stmt statement() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::indent:
        fail(ParseErrorKind::bad_indent, peek(1).kind == TokenKind::eof ? t : peek(1),
             "unexpected indent");
      case TokenKind::delimiter:
        if (t.lexeme == ")") fail(ParseErrorKind::unmatched_paren, t, "unmatched ')'");
        break;
      case TokenKind::name:
        if (t.lexeme == "def") return function_def();
        if (t.lexeme == "return") return return_statement();
        if (is_keyword(t.lexeme) && !is_literal_keyword(t.lexeme)) {
          fail(ParseErrorKind::generic, t,
               "invalid syntax ('" + t.lexeme + "' statements are not supported)");
        }
        break;
      default:
        break;
    }
    return simple_statement();
  }

  Stmt simple_statement() {
    const Token& start = peek();
    Stmt stmt;
    stmt.line = start.line;
    ExprPtr expr = expression();

    if (peek().kind == TokenKind::assign) {
      const Token& op = peek();
      auto* target = std::get_if<Name>(&expr->node);
      if (!target) {
        fail(ParseErrorKind::invalid_assign_target, start, assign_target_message(*expr, op));
      }
      advance();
      ExprPtr value = expression();
      if (peek().kind == TokenKind::assign) {
        fail(ParseErrorKind::generic, peek(),
             "invalid syntax (multiple assignment is not supported)");
      }
      if (op.lexeme != "=") value = desugar_augmented(op, *target, std::move(value));
      stmt.node = Assignment{target->id, std::move(value)};
    } else if (auto* call = std::get_if<Call>(&expr->node); call && call->callee == "print") {
      stmt.node = Print{std::move(call->args)};
    } else {
      stmt.node = ExprStmt{std::move(expr)};
    }
    end_of_statement();
    return stmt;
  }

  static std::string assign_target_message(const Expr& expr, const Token& op) {
    std::string what = "expression";
    if (std::holds_alternative<Call>(expr.node)) {
      what = "function call";
    } else if (std::holds_alternative<Compare>(expr.node)) {
      what = "comparison";
    } else if (std::holds_alternative<IntLit>(expr.node) ||
               std::holds_alternative<FloatLit>(expr.node) ||
               std::holds_alternative<StrLit>(expr.node) ||
               std::holds_alternative<BoolLit>(expr.node) ||
               std::holds_alternative<NoneLit>(expr.node)) {
      what = "literal";
    } else if (std::holds_alternative<FString>(expr.node)) {
      what = "f-string expression";
    }
    if (op.lexeme != "=") return "'" + what + "' is an illegal expression for augmented assignment";
    if (what == "comparison") return "cannot assign to comparison";
    return "cannot assign to " + what + " here. Maybe you meant '==' instead of '='?";
  }

  static ExprPtr desugar_augmented(const Token& op, const Name& target, ExprPtr value) {
    static const std::pair<std::string_view, BinaryOperator> kOps[] = {
        {"+=", BinaryOperator::add},       {"-=", BinaryOperator::sub},
        {"*=", BinaryOperator::mul},       {"/=", BinaryOperator::div},
        {"//=", BinaryOperator::floordiv}, {"%=", BinaryOperator::mod},
        {"**=", BinaryOperator::pow}};
    BinaryOperator bop = BinaryOperator::add;
    for (const auto& [text, o] : kOps) {
      if (op.lexeme == text) bop = o;
    }
    auto lhs = std::make_unique<Expr>(Expr{Name{target.id}, op.line, op.column});
    return std::make_unique<Expr>(
        Expr{BinaryOp{bop, std::move(lhs), std::move(value)}, op.line, op.column});
  }

  void end_of_statement() {
    if (peek().kind == TokenKind::newline) {
      advance();
      return;
    }
    if (peek().kind == TokenKind::eof) return;
    fail_after_expression(nullptr);
  }

  Stmt return_statement() {
    const Token& kw = advance();
    if (function_depth_ == 0) defer(ParseErrorKind::generic, kw, "'return' outside function");
    Stmt stmt;
    stmt.line = kw.line;
    Return ret;
    if (!at_end_of_line()) ret.value = expression();
    stmt.node = std::move(ret);
    end_of_statement();
    return stmt;
  }

  Stmt function_def() {
    const Token& kw = advance();
    Stmt stmt;
    stmt.line = kw.line;
    auto def = std::make_shared<FunctionDef>();

    const Token& name = peek();
    if (name.kind != TokenKind::name || is_keyword(name.lexeme)) {
      fail(ParseErrorKind::generic, name, "invalid syntax (expected a function name after 'def')");
    }
    def->name = advance().lexeme;

    if (!at_delim("(")) fail(ParseErrorKind::generic, peek(), "expected '('");
    const Token& open = advance();
    std::set<std::string> seen;
    while (!at_delim(")")) {
      const Token& p = peek();
      if (p.kind == TokenKind::newline || p.kind == TokenKind::eof) {
        fail(ParseErrorKind::unmatched_paren, open, "'(' was never closed");
      }
      if (p.kind != TokenKind::name || is_keyword(p.lexeme)) {
        fail(ParseErrorKind::generic, p, "invalid syntax (parameters must be plain names)");
      }
      advance();
      if (!seen.insert(p.lexeme).second) {
        defer(ParseErrorKind::generic, p,
              "duplicate argument '" + p.lexeme + "' in function definition");
      }
      def->params.push_back(p.lexeme);
      if (at_delim(",")) {
        advance();
        continue;
      }
      if (!at_delim(")")) fail_after_expression(&open);
    }
    advance();  // ')'

    if (!at_delim(":")) fail(ParseErrorKind::missing_colon, peek(), "expected ':'");
    advance();

    ++function_depth_;
    if (peek().kind == TokenKind::newline) {
      advance();
      if (peek().kind != TokenKind::indent) {
        fail(ParseErrorKind::bad_indent, peek(),
             "expected an indented block after function definition on line " +
                 std::to_string(kw.line));
      }
      advance();
      while (peek().kind != TokenKind::dedent && peek().kind != TokenKind::eof) {
        def->body.push_back(statement());
      }
      if (peek().kind == TokenKind::dedent) advance();
    } else if (peek().kind == TokenKind::eof) {
      fail(ParseErrorKind::bad_indent, peek(),
           "expected an indented block after function definition on line " +
               std::to_string(kw.line));
    } else {
      def->body.push_back(statement());
    }
    --function_depth_;

    stmt.node = std::shared_ptr<const FunctionDef>(std::move(def));
    return stmt;
  }

  // --- expressions --------------------------------------------------------

  static ExprPtr make(const Token& at, auto node) {
    return std::make_unique<Expr>(Expr{std::move(node), at.line, at.column});
  }

  ExprPtr expression() { return comparison(); }

  ExprPtr comparison() {
    ExprPtr lhs = additive();
    static const std::pair<std::string_view, CompareOperator> kOps[] = {
        {"==", CompareOperator::eq}, {"!=", CompareOperator::ne}, {"<", CompareOperator::lt},
        {"<=", CompareOperator::le}, {">", CompareOperator::gt},  {">=", CompareOperator::ge}};
    auto match = [&]() -> std::optional<CompareOperator> {
      if (peek().kind != TokenKind::op) return std::nullopt;
      for (const auto& [text, op] : kOps) {
        if (peek().lexeme == text) return op;
      }
      return std::nullopt;
    };
    auto op = match();
    if (!op) return lhs;
    const Token& op_tok = advance();
    ExprPtr rhs = additive();
    if (match()) {
      fail(ParseErrorKind::generic, peek(),
           "invalid syntax (chained comparisons are not supported)");
    }
    const int line = lhs->line;
    const int column = lhs->column;
    (void)op_tok;
    return std::make_unique<Expr>(Expr{Compare{*op, std::move(lhs), std::move(rhs)}, line, column});
  }

  ExprPtr additive() {
    ExprPtr lhs = term();
    while (at_op("+") || at_op("-")) {
      auto op = advance().lexeme == "+" ? BinaryOperator::add : BinaryOperator::sub;
      ExprPtr rhs = term();
      lhs = binary(op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    while (at_op("*") || at_op("/") || at_op("//") || at_op("%")) {
      const std::string& text = advance().lexeme;
      BinaryOperator op = text == "*"    ? BinaryOperator::mul
                          : text == "/"  ? BinaryOperator::div
                          : text == "//" ? BinaryOperator::floordiv
                                         : BinaryOperator::mod;
      ExprPtr rhs = unary();
      lhs = binary(op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  static ExprPtr binary(BinaryOperator op, ExprPtr lhs, ExprPtr rhs) {
    const int line = lhs->line;
    const int column = lhs->column;
    return std::make_unique<Expr>(Expr{BinaryOp{op, std::move(lhs), std::move(rhs)}, line, column});
  }

  ExprPtr unary() {
    if (at_op("-") || at_op("+")) {
      const Token& t = advance();
      ExprPtr operand = unary();
      return make(t, UnaryOp{t.lexeme == "-" ? UnaryOperator::neg : UnaryOperator::pos,
                             std::move(operand)});
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (at_op("**")) {
      advance();
      ExprPtr exponent = unary();
      return binary(BinaryOperator::pow, std::move(base), std::move(exponent));
    }
    return base;
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::int_literal: {
        advance();
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
        if (ec != std::errc{}) {
          fail(ParseErrorKind::generic, t,
               "integer literal is too large (values beyond 64-bit are not supported)");
        }
        return make(t, IntLit{v});
      }
      case TokenKind::float_literal: {
        advance();
        double v = 0;
        std::string text = t.lexeme;
        if (text.front() == '.') text.insert(text.begin(), '0');
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec == std::errc::result_out_of_range) v = std::strtod(text.c_str(), nullptr);
        return make(t, FloatLit{v});
      }
      case TokenKind::string_literal: {
        advance();
        std::string_view body(t.lexeme);
        body = body.substr(1, body.size() - 2);
        return make(t, StrLit{decode_escapes(body)});
      }
      case TokenKind::fstring_literal:
        advance();
        return make(t, fstring(t));
      case TokenKind::name: {
        if (t.lexeme == "True" || t.lexeme == "False") {
          advance();
          return make(t, BoolLit{t.lexeme == "True"});
        }
        if (t.lexeme == "None") {
          advance();
          return make(t, NoneLit{});
        }
        if (is_keyword(t.lexeme)) {
          fail(ParseErrorKind::generic, t,
               "invalid syntax ('" + t.lexeme + "' is not supported here)");
        }
        advance();
        if (at_delim("(")) return call(t);
        return make(t, Name{t.lexeme});
      }
      case TokenKind::delimiter:
        if (t.lexeme == "(") {
          const Token& open = advance();
          if (at_delim(")")) {
            fail(ParseErrorKind::generic, peek(), "invalid syntax (tuples are not supported)");
          }
          if (at_end_of_line()) {
            fail(ParseErrorKind::unmatched_paren, open, "'(' was never closed");
          }
          ++paren_depth_;
          ExprPtr inner = expression();
          if (!at_delim(")")) fail_after_expression(&open);
          advance();
          --paren_depth_;
          return inner;
        }
        if (t.lexeme == ")" && paren_depth_ == 0) {
          fail(ParseErrorKind::unmatched_paren, t, "unmatched ')'");
        }
        break;
      default:
        break;
    }
    fail(ParseErrorKind::generic, t, "invalid syntax");
  }

  ExprPtr call(const Token& callee) {
    const Token& open = advance();
    ++paren_depth_;
    Call node{callee.lexeme, {}};
    while (!at_delim(")")) {
      if (at_end_of_line()) fail(ParseErrorKind::unmatched_paren, open, "'(' was never closed");
      node.args.push_back(expression());
      if (at_delim(",")) {
        advance();
        continue;
      }
      if (!at_delim(")")) fail_after_expression(&open);
    }
    advance();
    --paren_depth_;
    return make(callee, std::move(node));
  }

  FString fstring(const Token& t) {
    std::string_view raw(t.lexeme);
    raw = raw.substr(2, raw.size() - 3);  // strip f" and "
    FString out;
    std::string text;
    auto flush = [&]() {
      if (!text.empty()) out.parts.push_back({false, decode_escapes(text)});
      text.clear();
    };
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const char c = raw[i];
      if (c == '{' && i + 1 < raw.size() && raw[i + 1] == '{') {
        text.push_back('{');
        ++i;
      } else if (c == '}' && i + 1 < raw.size() && raw[i + 1] == '}') {
        text.push_back('}');
        ++i;
      } else if (c == '{') {
        const std::size_t close = raw.find('}', i + 1);
        if (close == std::string_view::npos) {
          fail(ParseErrorKind::generic, t, "f-string: expecting '}'");
        }
        std::string_view slot = raw.substr(i + 1, close - i - 1);
        while (!slot.empty() && slot.front() == ' ') slot.remove_prefix(1);
        while (!slot.empty() && slot.back() == ' ') slot.remove_suffix(1);
        if (slot.empty()) fail(ParseErrorKind::generic, t, "f-string: empty expression not allowed");
        if (!is_identifier(slot) || is_keyword(slot)) {
          fail(ParseErrorKind::generic, t,
               "f-string: only variable names are supported inside {} (found '" +
                   std::string(slot) + "')");
        }
        flush();
        out.parts.push_back({true, std::string(slot)});
        i = close;
      } else if (c == '}') {
        fail(ParseErrorKind::generic, t, "f-string: single '}' is not allowed");
      } else {
        text.push_back(c);
      }
    }
    flush();
    return out;
  }

  std::span<const Token> tokens_;
  std::optional<ParseError> lex_error_;
  std::optional<ParseError> deferred_;
  std::size_t pos_ = 0;
  int function_depth_ = 0;
  int paren_depth_ = 0;
};

}  // namespace

Result<Program, ParseError> parse(std::span<const Token> tokens) {
  if (tokens.empty() || tokens.back().kind != TokenKind::eof) {
    return ParseError{ParseErrorKind::generic, 1, 1, "token stream does not end with eof", ""};
  }
  try {
    return Parser(tokens, std::nullopt).run();
  } catch (const Failure& f) {
    return f.error;
  }
}

Result<Program, ParseError> parse_source(std::string_view source) {
  auto lexed = detail::tokenize_partial(source);
  try {
    return Parser(lexed.tokens, lexed.error).run();
  } catch (const Failure& f) {
    return f.error;
  }
}

}  // namespace pypal::lang
