#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "pypal/lang/lexer.hpp"
#include "pypal/lang/parser.hpp"

using namespace pypal::lang;

namespace {

std::vector<std::pair<TokenKind, std::string>> kinds(std::string_view src) {
  auto r = tokenize(src);
  REQUIRE(r.ok());
  std::vector<std::pair<TokenKind, std::string>> out;
  for (const auto& t : r.value()) out.emplace_back(t.kind, t.lexeme);
  return out;
}

ParseError parse_error_of(std::string_view src) {
  auto r = parse_source(src);
  REQUIRE_FALSE(r.ok());
  return r.error();
}

Program parsed(std::string_view src) {
  auto r = parse_source(src);
  if (!r.ok()) FAIL("unexpected parse error: " << r.error().detail);
  return std::move(r).value();
}

}  // namespace

TEST_CASE("tokenize a minimal assignment") {
  using K = TokenKind;
  auto toks = kinds("x = 1");
  std::vector<std::pair<TokenKind, std::string>> want = {
      {K::name, "x"}, {K::assign, "="}, {K::int_literal, "1"}, {K::newline, ""}, {K::eof, ""}};
  CHECK(toks == want);
}

TEST_CASE("empty source is a lone eof at 1:1") {
  auto r = tokenize("");
  REQUIRE(r.ok());
  REQUIRE(r.value().size() == 1);
  CHECK(r.value()[0].kind == TokenKind::eof);
  CHECK(r.value()[0].line == 1);
  CHECK(r.value()[0].column == 1);
}

TEST_CASE("unclosed string literal") {
  auto r = tokenize("print(\"hi");
  REQUIRE_FALSE(r.ok());
  CHECK(r.error().kind == ParseErrorKind::unterminated_string);
  CHECK(r.error().line == 1);
  CHECK(r.error().column == 7);
}

TEST_CASE("illegal characters are generic errors") {
  for (const char* src : {"x = [1]", "x = a.b", "x = 1 $ 2", "x = {}"}) {
    auto r = tokenize(src);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == ParseErrorKind::generic);
  }
}

TEST_CASE("comments and blank lines produce no tokens") {
  using K = TokenKind;
  auto toks = kinds("# header\n\nx = 1  # trailing\n   \n");
  std::vector<std::pair<TokenKind, std::string>> want = {
      {K::name, "x"}, {K::assign, "="}, {K::int_literal, "1"}, {K::newline, ""}, {K::eof, ""}};
  CHECK(toks == want);
}

TEST_CASE("indent and dedent are balanced") {
  auto r = tokenize("def f(a):\n    b = a\n    return b\nprint(f(1))\ndef g():\n\treturn 2");
  REQUIRE(r.ok());
  int depth = 0;
  for (const auto& t : r.value()) {
    if (t.kind == TokenKind::indent) ++depth;
    if (t.kind == TokenKind::dedent) --depth;
    CHECK(depth >= 0);
  }
  CHECK(depth == 0);
}

TEST_CASE("tab advances to the next multiple of eight") {
  CHECK(parse_source("def f():\n\treturn 1\n        \n").ok());
  CHECK(parse_source("def f():\n\tx = 1\n        return x\n").ok());
  auto err = parse_error_of("def f():\n\tx = 1\n    return x\n");
  CHECK(err.kind == ParseErrorKind::bad_indent);
  CHECK(err.line == 3);
}

TEST_CASE("tokens carry positions inside the source") {
  const std::string src = "def greet(name):\n    print(f\"Hello, {name}!\")\ngreet(\"Ada\")\n";
  auto r = tokenize(src);
  REQUIRE(r.ok());
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= src.size()) {
    auto end = src.find('\n', start);
    if (end == std::string::npos) end = src.size();
    lines.push_back(src.substr(start, end - start));
    start = end + 1;
  }
  for (const auto& t : r.value()) {
    REQUIRE(t.line >= 1);
    REQUIRE(t.line <= static_cast<int>(lines.size()));
    CHECK(t.column >= 1);
    CHECK(t.column <= static_cast<int>(lines[t.line - 1].size()) + 1);
    if (!t.lexeme.empty() && t.kind != TokenKind::indent) {
      CHECK(lines[t.line - 1].substr(t.column - 1, t.lexeme.size()) == t.lexeme);
    }
  }
}

TEST_CASE("missing colon on a def header") {
  auto err = parse_error_of("def add(num1, num2)\n    return num1 + num2");
  CHECK(err.kind == ParseErrorKind::missing_colon);
  CHECK(err.line == 1);
}

TEST_CASE("adjacent atoms are a missing operator") {
  for (const char* src : {"b 0", "greater_result = num1 num2", "print(a b)", "x = (1) 2",
                          "x = \"a\" y", "x = 1 2.5"}) {
    CAPTURE(src);
    auto err = parse_error_of(src);
    CHECK(err.kind == ParseErrorKind::missing_operator);
    CHECK(err.line == 1);
  }
}

TEST_CASE("well-formed single statement") {
  auto prog = parsed("s = (2+6)/2");
  REQUIRE(prog.statements.size() == 1);
  CHECK(std::holds_alternative<Assignment>(prog.statements[0].node));
  CHECK(dump(prog) == "1: (assign s (/ (+ (int 2) (int 6)) (int 2)))\n");
}

TEST_CASE("operator precedence and associativity") {
  CHECK(dump(parsed("x = 1 + 2 * 3 ** 2 ** 2")) ==
        "1: (assign x (+ (int 1) (* (int 2) (** (int 3) (** (int 2) (int 2))))))\n");
  CHECK(dump(parsed("x = -2 ** 2")) == "1: (assign x (unary- (** (int 2) (int 2))))\n");
  CHECK(dump(parsed("x = 2 ** -1")) == "1: (assign x (** (int 2) (unary- (int 1))))\n");
  CHECK(dump(parsed("x = 7 - 2 - 1")) == "1: (assign x (- (- (int 7) (int 2)) (int 1)))\n");
  CHECK(dump(parsed("x = a + 1 > b * 2")) ==
        "1: (assign x (> (+ (name a) (int 1)) (* (name b) (int 2))))\n");
}

TEST_CASE("print calls become Print statements") {
  auto prog = parsed("print(1, \"a\")\nprint()");
  REQUIRE(prog.statements.size() == 2);
  CHECK(std::holds_alternative<Print>(prog.statements[0].node));
  CHECK(std::get<Print>(prog.statements[0].node).args.size() == 2);
  CHECK(std::get<Print>(prog.statements[1].node).args.empty());
}

TEST_CASE("f-strings split into text and name slots") {
  CHECK(dump(parsed("x = f\"Hello, {name}!\"")) ==
        "1: (assign x (fstring \"Hello, \" {name} \"!\"))\n");
  CHECK(dump(parsed("x = f'{{literal}} {a}{b}'")) ==
        "1: (assign x (fstring \"{literal} \" {a} {b}))\n");
  CHECK(parse_error_of("x = f\"{a + b}\"").kind == ParseErrorKind::generic);
  CHECK(parse_error_of("x = f\"{a\"").kind == ParseErrorKind::generic);
}

TEST_CASE("augmented assignment desugars") {
  CHECK(dump(parsed("b += 4")) == "1: (assign b (+ (name b) (int 4)))\n");
}

TEST_CASE("function definitions") {
  auto prog = parsed(
      "def add(num1, num2):\n"
      "    total = num1 + num2\n"
      "\n"
      "    return total\n"
      "result = add(2, 6)\n");
  CHECK(dump(prog) ==
        "1: (def add (num1 num2))\n"
        "  2: (assign total (+ (name num1) (name num2)))\n"
        "  4: (return (name total))\n"
        "5: (assign result (call add (int 2) (int 6)))\n");
  CHECK(parsed("def f(): return 1").statements.size() == 1);
}

TEST_CASE("invalid assignment targets") {
  for (const char* src : {"num1 > num2 = greater_result", "1 = x", "f(x) = 2", "a + b = c"}) {
    CAPTURE(src);
    auto err = parse_error_of(src);
    CHECK(err.kind == ParseErrorKind::invalid_assign_target);
    CHECK(err.line == 1);
  }
}

TEST_CASE("unmatched parentheses") {
  auto err = parse_error_of("x = 1\nprint((a + b)\ny = 2");
  CHECK(err.kind == ParseErrorKind::unmatched_paren);
  CHECK(err.line == 2);
  CHECK(err.column == 6);
  CHECK(parse_error_of("x = 1)").kind == ParseErrorKind::unmatched_paren);
  CHECK(parse_error_of("print(1").kind == ParseErrorKind::unmatched_paren);
  CHECK(parse_error_of("def f(a, b\n    return a").kind == ParseErrorKind::unmatched_paren);
  CHECK(parse_error_of("print(a +)").kind == ParseErrorKind::generic);
  CHECK(parse_error_of("x = (1 *)").kind == ParseErrorKind::generic);
}

TEST_CASE("indentation errors") {
  auto missing = parse_error_of("def greet(name):\nprint(name)");
  CHECK(missing.kind == ParseErrorKind::bad_indent);
  CHECK(missing.line == 2);
  auto unexpected = parse_error_of("x = 1\n    y = 2");
  CHECK(unexpected.kind == ParseErrorKind::bad_indent);
  CHECK(unexpected.line == 2);
  auto dedent = parse_error_of("def f():\n        x = 1\n    return x");
  CHECK(dedent.kind == ParseErrorKind::bad_indent);
  CHECK(dedent.line == 3);
}

TEST_CASE("unsupported constructs are generic errors") {
  for (const char* src : {"if x:\n    y = 1", "a = b = 1", "x = 1 < 2 < 3", "return 1",
                          "def f(a, a):\n    return a", "x = ()", "x = ", "x = not y"}) {
    CAPTURE(src);
    CHECK(parse_error_of(src).kind == ParseErrorKind::generic);
  }
}

TEST_CASE("first error in source order wins") {
  auto err = parse_error_of("x = 1 2\ny = \"open");
  CHECK(err.kind == ParseErrorKind::missing_operator);
  CHECK(err.line == 1);
  auto lex_first = parse_error_of("y = \"open\nx = 1 2");
  CHECK(lex_first.kind == ParseErrorKind::unterminated_string);
  CHECK(lex_first.line == 1);
}

TEST_CASE("parse over tokenize output matches parse_source") {
  const char* src = "def f(a):\n    return a * 2\nprint(f(3))\n";
  auto toks = tokenize(src);
  REQUIRE(toks.ok());
  auto a = parse(toks.value());
  auto b = parse_source(src);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(dump(a.value()) == dump(b.value()));
}

namespace {

// Random well-formed programs in the subset, one statement per line.
struct ProgramGen {
  std::mt19937_64 rng;
  std::vector<std::string> names{"a", "b", "total", "x_var", "num1"};

  std::string pick(const std::vector<std::string>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  }
  int roll(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  std::string atom() {
    switch (roll(5)) {
      case 0: return std::to_string(roll(100));
      case 1: return std::to_string(roll(10)) + ".5";
      case 2: return "\"s" + std::to_string(roll(9)) + "\"";
      case 3: return roll(2) ? "True" : "False";
      default: return pick(names);
    }
  }
  std::string expr(int depth) {
    if (depth == 0 || roll(3) == 0) return atom();
    static const std::vector<std::string> ops{"+", "-", "*", "/", "//", "%", "**"};
    switch (roll(3)) {
      case 0: return expr(depth - 1) + " " + pick(ops) + " " + expr(depth - 1);
      case 1: return "(" + expr(depth - 1) + ")";
      default: return "abs(" + expr(depth - 1) + ")";
    }
  }
  std::string program(std::vector<int>& stmt_lines) {
    std::string src;
    int line = 0;
    const int n = 1 + roll(8);
    for (int i = 0; i < n; ++i) {
      if (roll(4) == 0) {
        src += "# note\n";
        ++line;
      }
      if (roll(5) == 0) {
        src += "def fn" + std::to_string(i) + "(p, q):\n";
        stmt_lines.push_back(++line);
        src += "    r = p + q\n";
        stmt_lines.push_back(++line);
        src += "    return r\n";
        stmt_lines.push_back(++line);
        continue;
      }
      if (roll(2)) {
        src += pick(names) + " = " + expr(3) + "\n";
      } else {
        src += "print(" + expr(2) + ", " + expr(2) + ")\n";
      }
      stmt_lines.push_back(++line);
      if (roll(5) == 0) {
        src += "\n";
        ++line;
      }
    }
    return src;
  }
};

void collect_lines(const std::vector<Stmt>& stmts, std::vector<int>& out) {
  for_each_statement(stmts, [&](const Stmt& s) { out.push_back(s.line); });
}

}  // namespace

TEST_CASE("property: every statement line yields exactly one Stmt, deterministically") {
  ProgramGen gen{std::mt19937_64(20261015)};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> expected;
    const std::string src = gen.program(expected);
    CAPTURE(src);
    auto first = parse_source(src);
    REQUIRE(first.ok());
    std::vector<int> got;
    collect_lines(first.value().statements, got);
    CHECK(got == expected);
    auto second = parse_source(src);
    REQUIRE(second.ok());
    CHECK(dump(first.value()) == dump(second.value()));
  }
}

TEST_CASE("property: space-separated atoms always give missing-operator") {
  ProgramGen gen{std::mt19937_64(7)};
  for (int trial = 0; trial < 500; ++trial) {
    const std::string lhs = gen.atom();
    const std::string rhs = gen.atom();
    const std::string spaces(1 + gen.roll(3), ' ');
    std::string src;
    switch (gen.roll(3)) {
      case 0: src = lhs + spaces + rhs; break;
      case 1: src = "y = " + lhs + spaces + rhs; break;
      default: src = "print(" + lhs + spaces + rhs + ")"; break;
    }
    CAPTURE(src);
    auto r = parse_source(src);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == ParseErrorKind::missing_operator);
    CHECK(r.error().line == 1);
  }
}

TEST_CASE("property: identical broken sources give identical errors") {
  const std::vector<std::string> broken = {"def f(x)\n  return x", "x = = 1", "print(\"a",
                                           "x = 1\n  y = 2", "a b", "(1 + 2"};
  for (const auto& src : broken) {
    auto a = parse_source(src);
    auto b = parse_source(src);
    REQUIRE_FALSE(a.ok());
    REQUIRE_FALSE(b.ok());
    CHECK(a.error() == b.error());
  }
}
