#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "pypal/diag/diagnostic.hpp"
#include "pypal/error.hpp"
#include "pypal/lang/parser.hpp"

using namespace pypal;
using diag::ErrorCategory;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

lang::Program program_of(const std::string& src) {
  auto r = lang::parse_source(src);
  if (!r.ok()) FAIL("parse error: " << r.error().detail);
  return std::move(r).value();
}

diag::Diagnostic parse_diag(const std::string& src) {
  auto r = lang::parse_source(src);
  REQUIRE_FALSE(r.ok());
  return diag::classify_parse_error(r.error(), src);
}

diag::Diagnostic runtime_diag(const std::string& src) {
  auto prog = program_of(src);
  auto res = exec::execute_program(prog);
  REQUIRE(res.error);
  return diag::classify_runtime_error(*res.error, prog);
}

// The rendered skeleton every non-fallback diagnostic must follow.
bool matches_skeleton(const std::string& text, std::size_t suggestions) {
  std::string pattern = "Error: [^\\n]+\\nLocation: line [0-9]+\\nThe error can be from:";
  for (std::size_t i = 1; i <= suggestions; ++i) pattern += "\\n" + std::to_string(i) + "\\. [^\\n]+";
  return std::regex_match(text, std::regex(pattern));
}

}  // namespace

TEST_CASE("undefined variable renders byte-equal to the golden feedback") {
  const std::string src = read_file(PYPAL_DATA_DIR "/fixtures/average_undefined_name.py");
  const std::string golden = read_file(PYPAL_DATA_DIR "/fixtures/average_undefined_name.feedback.txt");
  auto d = runtime_diag(src);
  CHECK(d.category == ErrorCategory::undefined_name);
  CHECK(d.pattern_id == "undefined-variable");
  CHECK(d.subject == "s");
  CHECK(d.line == 6);
  CHECK(diag::render_feedback(d) == golden);
}

TEST_CASE("parse error classification") {
  auto colon = parse_diag("def add(num1, num2)\n    return num1 + num2");
  CHECK(colon.category == ErrorCategory::function_related);
  CHECK(colon.pattern_id == "missing-colon");
  CHECK(colon.line == 1);

  auto op = parse_diag("a = 10\nb 0");
  CHECK(op.category == ErrorCategory::typographical);
  CHECK(op.pattern_id == "missing-operator");
  CHECK(op.line == 2);
  CHECK(op.headline == "Missing operator between 'b' and '0'");

  auto cmp = parse_diag("greater_result = num1 num2");
  CHECK(cmp.headline == "Missing operator between 'num1' and 'num2'");

  auto eol = parse_diag("name_var = \"Alice\nprint(name_var)");
  CHECK(eol.category == ErrorCategory::typographical);
  CHECK(eol.pattern_id == "eol-string");

  auto indent = parse_diag("def greet(name):\nprint(name)");
  CHECK(indent.category == ErrorCategory::indentation);
  CHECK(indent.pattern_id == "bad-indent");

  auto generic = parse_diag("x = 1\nif x:\n    y = 2");
  CHECK(generic.category == ErrorCategory::fallback);
  CHECK(generic.suggestions.empty());
  CHECK(generic.line == 2);
  CHECK(diag::render_feedback(generic) ==
        "SyntaxError: invalid syntax ('if' statements are not supported) (line 2)");
}

TEST_CASE("runtime error classification") {
  auto div = runtime_diag("a = 10\nb = 0\nprint(a / b)");
  CHECK(div.category == ErrorCategory::data_type_or_value);
  CHECK(div.pattern_id == "division-by-zero");
  CHECK(div.line == 3);
  CHECK(diag::render_feedback(div).find("Location: line 3") != std::string::npos);

  auto typo = runtime_diag("age_var = 20\nprint(ag_var)");
  CHECK(typo.pattern_id == "typo-in-name");
  CHECK(typo.category == ErrorCategory::undefined_name);
  CHECK(typo.headline == "Undefined variable 'ag_var' (did you mean 'age_var'?)");

  auto case_typo = runtime_diag("name_var = \"Alice\"\nprint(Name_var)");
  CHECK(case_typo.pattern_id == "typo-in-name");

  auto unquoted = runtime_diag("name_var = Alice\nprint(name_var)");
  CHECK(unquoted.pattern_id == "unquoted-string");
  CHECK(unquoted.subject == "Alice");

  auto unbound = runtime_diag("def add(a, b):\n    print(total)\n    total = a + b\n    return total\nadd(1, 2)");
  CHECK(unbound.category == ErrorCategory::use_before_assignment);
  CHECK(unbound.subject == "total");

  auto args = runtime_diag("def greet(name):\n    print(name)\ngreet()");
  CHECK(args.category == ErrorCategory::function_related);
  CHECK(args.pattern_id == "argument-count");
  CHECK(args.subject == "greet");

  auto callable = runtime_diag("total = 3\ntotal(1)");
  CHECK(callable.pattern_id == "not-callable");

  auto types = runtime_diag("print(\"a\" + 1)");
  CHECK(types.pattern_id == "type-mismatch");
  CHECK(types.suggestions[0] == "Python reported: can only concatenate str (not \"int\") to str");
}

TEST_CASE("step limit and generic runtime errors fall back to the raw message") {
  exec::RuntimeError err{exec::RuntimeErrorKind::step_limit, 4, "too long", std::nullopt, "StepLimitExceeded"};
  auto d = diag::classify_runtime_error(err, program_of("x = 1"));
  CHECK(d.category == ErrorCategory::fallback);
  CHECK(diag::render_feedback(d) == "StepLimitExceeded: too long (line 4)");
}

TEST_CASE("fallback rendering") {
  auto d = diag::make_fallback("SyntaxError: invalid syntax", 2);
  CHECK(diag::render_feedback(d) == "SyntaxError: invalid syntax (line 2)");
}

TEST_CASE("lint findings") {
  auto greet = diag::lint_program(program_of("def greet(name):\n    print(f\"Hello, {name}!\")\ngreet"));
  REQUIRE(greet.size() == 1);
  CHECK(greet[0].pattern_id == "bare-function-reference");
  CHECK(greet[0].category == ErrorCategory::function_related);
  CHECK(greet[0].subject == "greet");
  CHECK(greet[0].line == 3);

  auto add = diag::lint_program(program_of("def add(a, b):\n    return a + b\nresult = add\nprint(result)"));
  REQUIRE(add.size() == 1);
  CHECK(add[0].pattern_id == "bare-function-reference");

  auto early = diag::lint_program(program_of("print(a)\na = 1"));
  REQUIRE(early.size() == 1);
  CHECK(early[0].category == ErrorCategory::use_before_assignment);
  CHECK(early[0].subject == "a");
  CHECK(early[0].line == 1);

  auto call_early = diag::lint_program(program_of("greet(\"Ada\")\ndef greet(name):\n    print(name)"));
  REQUIRE(call_early.size() == 1);
  CHECK(call_early[0].pattern_id == "call-before-definition");

  CHECK(diag::lint_program(program_of("a = 1\nb = a + 2\nprint(a, b)")).empty());
  CHECK(diag::lint_program(program_of("def f(x):\n    return g(x)\ndef g(y):\n    return y\nprint(f(1))")).empty());
  CHECK(diag::lint_program(program_of("b = 1\nb = b + 1\nprint(b)")).empty());
}

TEST_CASE("lint findings come out in source order, once per name") {
  auto findings = diag::lint_program(program_of(
      "print(y, x, x)\n"
      "print(x)\n"
      "def f():\n"
      "    return 1\n"
      "f\n"
      "x = 1\n"
      "y = 2\n"));
  REQUIRE(findings.size() == 3);
  CHECK(findings[0].line == 1);
  CHECK(findings[0].subject == "y");
  CHECK(findings[1].line == 1);
  CHECK(findings[1].subject == "x");
  CHECK(findings[2].line == 5);
  CHECK(findings[2].pattern_id == "bare-function-reference");
}

TEST_CASE("totality over every parse and runtime error kind") {
  const auto prog = program_of("x = 1");
  for (auto kind : lang::kAllParseErrorKinds) {
    lang::ParseError err{kind, 1, 1, "detail", "tok"};
    auto d = diag::classify_parse_error(err, "x y");
    CHECK_FALSE(d.pattern_id.empty());
    if (d.category == ErrorCategory::fallback) {
      CHECK(d.suggestions.empty());
      CHECK_FALSE(d.raw_message.empty());
    } else {
      CHECK_FALSE(d.suggestions.empty());
    }
  }
  for (auto kind : exec::kAllRuntimeErrorKinds) {
    for (const std::optional<std::string>& name : {std::optional<std::string>(), std::optional<std::string>("x")}) {
      exec::RuntimeError err{kind, 1, "detail", name, "SomeError"};
      auto d = diag::classify_runtime_error(err, prog);
      CHECK_FALSE(d.pattern_id.empty());
      CHECK(d.category != ErrorCategory::logical_or_semantic);
      if (d.category == ErrorCategory::fallback) {
        CHECK(d.suggestions.empty());
        CHECK_FALSE(d.raw_message.empty());
      } else {
        CHECK_FALSE(d.suggestions.empty());
        CHECK(matches_skeleton(diag::render_feedback(d), d.suggestions.size()));
      }
    }
  }
}

TEST_CASE("pattern ids determine categories") {
  const auto& table = diag::default_templates();
  const std::set<std::string> expected = {
      "undefined-variable", "typo-in-name",     "unquoted-string",        "missing-colon",
      "eol-string",         "missing-operator", "unmatched-paren",        "invalid-assign-target",
      "use-before-assignment", "division-by-zero", "type-mismatch",      "bare-function-reference",
      "argument-count",     "not-callable",     "call-before-definition", "bad-indent",
      "wrong-output",       "wrong-return-value"};
  std::set<std::string> ids;
  for (const auto& [id, t] : table.all()) {
    ids.insert(id);
    CHECK(t.category != ErrorCategory::fallback);
    CHECK_FALSE(t.suggestions.empty());
    for (int line : {1, 7}) {
      diag::TemplateSlots slots{std::string("v"), line, "w", "d"};
      auto d = table.instantiate(id, slots, "raw");
      CHECK(d.category == t.category);
      CHECK(matches_skeleton(diag::render_feedback(d), t.suggestions.size()));
    }
  }
  CHECK(ids == expected);
  for (const char* semantic : {"wrong-output", "wrong-return-value"}) {
    CHECK(table.find(semantic)->category == ErrorCategory::logical_or_semantic);
  }
  for (auto c : diag::kAllCategories) CHECK(diag::category_from_string(diag::to_string(c)) == c);
}

TEST_CASE("the shipped table file matches the compiled-in table") {
  auto loaded = diag::TemplateTable::load(PYPAL_DATA_DIR "/tables/feedback_templates.json");
  REQUIRE(loaded.all().size() == diag::default_templates().all().size());
  for (const auto& [id, t] : loaded.all()) {
    const auto* other = diag::default_templates().find(id);
    REQUIRE(other);
    CHECK(other->headline == t.headline);
    CHECK(other->suggestions == t.suggestions);
  }
}

TEST_CASE("malformed template tables are rejected") {
  CHECK_THROWS_AS(diag::TemplateTable::from_json("{"), Error);
  CHECK_THROWS_AS(diag::TemplateTable::from_json(R"({"format":"x","version":1,"templates":[]})"), Error);
  CHECK_THROWS_AS(diag::TemplateTable::from_json(
                      R"({"format":"pypal-feedback-templates","version":1,"templates":[
                         {"id":"a","category":"typographical","headline":"h","suggestions":["s"]},
                         {"id":"a","category":"typographical","headline":"h","suggestions":["s"]}]})"),
                  Error);
  CHECK_THROWS_AS(diag::TemplateTable::from_json(
                      R"({"format":"pypal-feedback-templates","version":1,"templates":[
                         {"id":"a","category":"nonsense","headline":"h","suggestions":["s"]}]})"),
                  Error);
  CHECK_THROWS_AS(diag::default_templates().instantiate("no-such-pattern", {}, ""), Error);
}

TEST_CASE("levenshtein") {
  CHECK(diag::levenshtein("ag_var", "age_var") == 1);
  CHECK(diag::levenshtein("Name_var", "name_var") == 1);
  CHECK(diag::levenshtein("", "abc") == 3);
  CHECK(diag::levenshtein("kitten", "sitting") == 3);
}
