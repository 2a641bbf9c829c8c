#include <string>
#include <vector>

#include "doctest.h"
#include "pypal/exec/interpreter.hpp"
#include "pypal/lang/parser.hpp"

using namespace pypal;
using exec::RuntimeErrorKind;
using exec::Value;

namespace {

lang::Program program_of(const std::string& src) {
  auto r = lang::parse_source(src);
  if (!r.ok()) FAIL("parse error: " << r.error().detail);
  return std::move(r).value();
}

exec::ExecutionResult run(const std::string& src, const exec::Limits& limits = {},
                          const std::vector<std::string>& stdin_lines = {}) {
  return exec::execute_program(program_of(src), stdin_lines, limits);
}

const char* const kAverageProgram =
    "def average(a, b):\n"
    "    s = (a + b) / 2\n"
    "    return s\n"
    "\n"
    "average(2, 6)\n"
    "print (s)\n";

}  // namespace

TEST_CASE("minimal print") {
  auto r = run("x = 7\nprint(x)");
  CHECK(r.stdout_text == "7\n");
  CHECK_FALSE(r.error);
}

TEST_CASE("undefined name after a function call") {
  auto r = run(kAverageProgram);
  REQUIRE(r.error);
  CHECK(r.error->kind == RuntimeErrorKind::undefined_name);
  CHECK(r.error->name == "s");
  CHECK(r.error->line == 6);
  CHECK(r.stdout_text.empty());
  CHECK(exec::raw_message(*r.error) == "NameError: name 's' is not defined");
}

TEST_CASE("division by zero and type mismatch") {
  auto div = run("print(1/0)");
  REQUIRE(div.error);
  CHECK(div.error->kind == RuntimeErrorKind::division_by_zero);
  CHECK(exec::raw_message(*div.error) == "ZeroDivisionError: division by zero");

  auto mix = run("print(\"a\" + 1)");
  REQUIRE(mix.error);
  CHECK(mix.error->kind == RuntimeErrorKind::type_mismatch);
  CHECK(mix.error->detail == "can only concatenate str (not \"int\") to str");
}

TEST_CASE("output before an error is kept") {
  auto r = run("print(1)\nprint(2)\nprint(x)\nprint(3)");
  CHECK(r.stdout_text == "1\n2\n");
  REQUIRE(r.error);
  CHECK(r.error->line == 3);
}

TEST_CASE("call_function") {
  auto add = program_of("def add(num1, num2):\n    return num1 + num2");
  auto ok = exec::call_function(add, "add", {Value::integer(2), Value::integer(6)});
  REQUIRE(ok.ok());
  CHECK(ok.value().return_value.is_int());
  CHECK(ok.value().return_value.as_int() == 8);

  auto short_args = exec::call_function(add, "add", {Value::integer(2)});
  REQUIRE_FALSE(short_args.ok());
  CHECK(short_args.error().kind == RuntimeErrorKind::argument_count);
  CHECK(short_args.error().detail == "add() missing 1 required positional argument: 'num2'");

  auto greet = program_of("def greet(name):\n    print(f\"Hello, {name}!\")");
  auto hello = exec::call_function(greet, "greet", {Value::str("Ada")});
  REQUIRE(hello.ok());
  CHECK(hello.value().stdout_text == "Hello, Ada!\n");
  CHECK(hello.value().return_value.is_none());

  auto missing = exec::call_function(greet, "wave", {});
  REQUIRE_FALSE(missing.ok());
  CHECK(missing.error().kind == RuntimeErrorKind::undefined_name);
}

TEST_CASE("format_value") {
  CHECK(exec::format_value(Value::floating(4.0)) == "4.0");
  CHECK(exec::format_value(Value::integer(-3)) == "-3");
  CHECK(exec::format_value(Value::boolean(true)) == "True");
  CHECK(exec::format_value(Value::none()) == "None");
  CHECK(exec::format_value(Value::str("raw 'text'")) == "raw 'text'");
  CHECK(exec::repr_value(Value::str("it's")) == "\"it's\"");
  CHECK(exec::repr_value(Value::str("a\nb")) == "'a\\nb'");
}

// Expected text recorded from CPython 3.10 printing the same expression.
struct Recorded {
  const char* expr;
  const char* outcome;  // "ok" or the exception class
  const char* printed;
};

const Recorded kRecorded[] = {
    {"7 / 2", "ok", "3.5"},
    {"7 // 2", "ok", "3"},
    {"-7 // 2", "ok", "-4"},
    {"7 % -3", "ok", "-2"},
    {"-7 % 3", "ok", "2"},
    {"2 ** 10", "ok", "1024"},
    {"2 ** -1", "ok", "0.5"},
    {"7.5 // 2", "ok", "3.0"},
    {"-7.5 // 2", "ok", "-4.0"},
    {"7.5 % -2", "ok", "-0.5"},
    {"-0.0", "ok", "-0.0"},
    {"1e16", "ok", "1e+16"},
    {"1e15", "ok", "1000000000000000.0"},
    {"123456789.123", "ok", "123456789.123"},
    {"0.1 + 0.2", "ok", "0.30000000000000004"},
    {"1 / 3", "ok", "0.3333333333333333"},
    {"0.0001", "ok", "0.0001"},
    {"0.00001", "ok", "1e-05"},
    {"2.5e-7", "ok", "2.5e-07"},
    {"1e22", "ok", "1e+22"},
    {"-1.5e300 * 10", "ok", "-1.5e+301"},
    {"10 / 4", "ok", "2.5"},
    {"8 / 2", "ok", "4.0"},
    {"True + True", "ok", "2"},
    {"True * 2.5", "ok", "2.5"},
    {"\"ab\" * 3", "ok", "ababab"},
    {"3 * \"ab\"", "ok", "ababab"},
    {"\"ab\" * -1", "ok", ""},
    {"\"a\" + \"b\"", "ok", "ab"},
    {"round(2.5)", "ok", "2"},
    {"round(3.5)", "ok", "4"},
    {"round(2.675, 2)", "ok", "2.67"},
    {"round(-2.5)", "ok", "-2"},
    {"round(1234, -2)", "ok", "1200"},
    {"round(1250, -2)", "ok", "1200"},
    {"round(0.5)", "ok", "0"},
    {"int(\"  42 \")", "ok", "42"},
    {"int(-3.9)", "ok", "-3"},
    {"float(\"1_000.5\")", "ok", "1000.5"},
    {"float(\" -inf \")", "ok", "-inf"},
    {"int(\"1_000\")", "ok", "1000"},
    {"abs(-4)", "ok", "4"},
    {"abs(-2.5)", "ok", "2.5"},
    {"len(\"h\xc3\xa9llo\")", "ok", "5"},
    {"max(3, 9, 2)", "ok", "9"},
    {"min(\"zebra\")", "ok", "a"},
    {"max(\"b\", \"a\")", "ok", "b"},
    {"str(4.0)", "ok", "4.0"},
    {"bool(\"\")", "ok", "False"},
    {"bool(0.0)", "ok", "False"},
    {"type(5)", "ok", "<class 'int'>"},
    {"type(2.5)", "ok", "<class 'float'>"},
    {"type(\"s\")", "ok", "<class 'str'>"},
    {"type(True)", "ok", "<class 'bool'>"},
    {"type(None)", "ok", "<class 'NoneType'>"},
    {"type(print)", "ok", "<class 'builtin_function_or_method'>"},
    {"type(int)", "ok", "<class 'type'>"},
    {"1 == 1.0", "ok", "True"},
    {"True == 1", "ok", "True"},
    {"\"1\" == 1", "ok", "False"},
    {"None == None", "ok", "True"},
    {"2 < 2.5", "ok", "True"},
    {"\"abc\" < \"abd\"", "ok", "True"},
    {"int(\"ff\", 16)", "ok", "255"},
    {"float(\"1e3\")", "ok", "1000.0"},
    {"3 - 5.5", "ok", "-2.5"},
    {"9 ** 0.5", "ok", "3.0"},
    {"2 ** 62", "ok", "4611686018427387904"},
    {"-(2 ** 62) * 2", "ok", "-9223372036854775808"},
    {"5 % 0.5", "ok", "0.0"},
    {"1e300 * 1e10", "ok", "inf"},
    {"1 / 0", "ZeroDivisionError", ""},
    {"1 // 0", "ZeroDivisionError", ""},
    {"1 % 0", "ZeroDivisionError", ""},
    {"1.0 / 0", "ZeroDivisionError", ""},
    {"0 ** -1", "ZeroDivisionError", ""},
    {"\"a\" + 1", "TypeError", ""},
    {"1 + \"a\"", "TypeError", ""},
    {"\"a\" - \"b\"", "TypeError", ""},
    {"\"a\" * 1.5", "TypeError", ""},
    {"-\"a\"", "TypeError", ""},
    {"\"a\" < 1", "TypeError", ""},
    {"int(\"x\")", "ValueError", ""},
    {"float(\"x\")", "ValueError", ""},
    {"len(5)", "TypeError", ""},
    {"abs(\"a\")", "TypeError", ""},
    {"max(1)", "TypeError", ""},
    {"min(\"\")", "ValueError", ""},
    {"round(\"a\")", "TypeError", ""},
    {"int(1e400)", "OverflowError", ""},
    {"10.0 ** 400", "OverflowError", ""},
    {"len(1, 2)", "TypeError", ""},
    {"max()", "TypeError", ""},
};

TEST_CASE("expressions match recorded CPython output") {
  for (const auto& rec : kRecorded) {
    const std::string expr = rec.expr;
    CAPTURE(expr);
    auto r = run(std::string("print(") + rec.expr + ")");
    if (std::string(rec.outcome) == "ok") {
      CHECK_FALSE(r.error);
      CHECK(r.stdout_text == std::string(rec.printed) + "\n");
    } else {
      REQUIRE(r.error);
      CHECK(r.error->exception_type == rec.outcome);
    }
  }
}

TEST_CASE("64-bit bounds and complex results are errors rather than silent wraps") {
  for (const char* e : {"2 ** 63", "-(2 ** 63 - 1) - 2", "9223372036854775807 + 1",
                        "(-9223372036854775807 - 1) // -1", "-(-9223372036854775807 - 1)"}) {
    CAPTURE(e);
    auto r = run(std::string("print(") + e + ")");
    REQUIRE(r.error);
    CHECK(r.error->kind == RuntimeErrorKind::generic);
    CHECK(r.error->exception_type == "OverflowError");
  }
  auto complex = run("print((-8) ** 0.5)");
  REQUIRE(complex.error);
  CHECK(complex.error->kind == RuntimeErrorKind::generic);
}

TEST_CASE("Python scoping rules") {
  auto unbound = run("def f():\n    print(total)\n    total = 1\nf()");
  REQUIRE(unbound.error);
  CHECK(unbound.error->kind == RuntimeErrorKind::use_before_assignment);
  CHECK(unbound.error->name == "total");
  CHECK(unbound.error->line == 2);
  CHECK(unbound.error->exception_type == "UnboundLocalError");

  auto global_read = run("rate = 3\ndef f(x):\n    return x * rate\nprint(f(2))");
  CHECK(global_read.stdout_text == "6\n");

  auto closure = run(
      "def outer(a):\n"
      "    def inner(b):\n"
      "        return a + b\n"
      "    return inner\n"
      "add5 = outer(5)\n"
      "print(add5(1), add5)\n");
  CHECK_FALSE(closure.error);
  CHECK(closure.stdout_text == "6 <function inner>\n");

  auto shadow = run("print = 5\nprint(1)");
  REQUIRE(shadow.error);
  CHECK(shadow.error->kind == RuntimeErrorKind::not_callable);
  CHECK(shadow.error->detail == "'int' object is not callable");

  auto top_level = run("print(a)\na = 1");
  REQUIRE(top_level.error);
  CHECK(top_level.error->kind == RuntimeErrorKind::undefined_name);
}

TEST_CASE("argument count messages") {
  auto many = run("def greet(name):\n    return name\ngreet(1, 2)");
  REQUIRE(many.error);
  CHECK(many.error->kind == RuntimeErrorKind::argument_count);
  CHECK(many.error->detail == "greet() takes 1 positional argument but 2 were given");
  auto none = run("def greet(name, greeting):\n    return name\ngreet()");
  REQUIRE(none.error);
  CHECK(none.error->detail ==
        "greet() missing 2 required positional arguments: 'name' and 'greeting'");
}

TEST_CASE("step limit bounds runaway recursion") {
  exec::Limits limits;
  limits.max_steps = 1000;
  limits.max_depth = 100000;
  auto r = run("def f(n):\n    return f(n + 1)\nf(0)", limits);
  REQUIRE(r.error);
  CHECK(r.error->kind == RuntimeErrorKind::step_limit);
  CHECK(r.steps_used == 1000);

  auto deep = run("def f(n):\n    return f(n + 1)\nf(0)");
  REQUIRE(deep.error);
  CHECK(deep.error->exception_type == "RecursionError");
  CHECK(deep.steps_used <= exec::Limits{}.max_steps);
}

TEST_CASE("output size is capped") {
  auto r = run("s = \"abcdefgh\" * 200000\ns = s + s\nprint(s)");
  REQUIRE(r.error);
  CHECK(r.error->exception_type == "MemoryError");
}

TEST_CASE("input reads stdin lines") {
  auto r = run("name = input(\"Name? \")\nprint(\"hi\", name)", {}, {"Ada"});
  CHECK(r.stdout_text == "Name? hi Ada\n");
  auto eof = run("x = input()");
  REQUIRE(eof.error);
  CHECK(eof.error->exception_type == "EOFError");
}

TEST_CASE("output chunks carry the printing line") {
  auto r = run("def show(x):\n    print(x)\nshow(1)\nprint(2)");
  REQUIRE(r.chunks.size() == 2);
  CHECK(r.chunks[0].line == 2);
  CHECK(r.chunks[1].line == 4);
}

TEST_CASE("property: execution is deterministic and within the step budget") {
  const std::vector<std::string> programs = {
      kAverageProgram, "x = 1\nx += 2\nprint(x * 3, x / 2)", "def f(n):\n    return f(n)\nf(1)",
      "print(type(1), 2 ** 0.5)", "s = \"x\"\nprint(s * 5)"};
  for (std::int64_t budget : {5, 50, 500, 100000}) {
    exec::Limits limits;
    limits.max_steps = budget;
    for (const auto& p : programs) {
      auto a = run(p, limits);
      auto b = run(p, limits);
      CHECK(a.stdout_text == b.stdout_text);
      CHECK(a.steps_used == b.steps_used);
      CHECK(a.steps_used <= budget);
      CHECK(a.error.has_value() == b.error.has_value());
      if (a.error && b.error) CHECK(exec::raw_message(*a.error) == exec::raw_message(*b.error));
    }
  }
}
