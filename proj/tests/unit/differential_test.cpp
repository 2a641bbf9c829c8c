#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "pypal/exec/interpreter.hpp"
#include "pypal/lang/parser.hpp"

using namespace pypal;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string parse_exception_class(lang::ParseErrorKind kind) {
  return kind == lang::ParseErrorKind::bad_indent ? "IndentationError" : "SyntaxError";
}

}  // namespace

TEST_CASE("stdout and exception class match recorded CPython runs") {
  const std::string data = PYPAL_DATA_DIR;
  const auto doc = nlohmann::json::parse(slurp(data + "/reference/python_runs.json"));
  REQUIRE(doc["format"] == "pypal-reference-runs");
  const auto& runs = doc["runs"];
  CHECK(runs.size() == 43);
  const std::regex address(" at 0x[0-9a-fA-F]+>");

  for (const auto& [rel, rec] : runs.items()) {
    CAPTURE(rel);
    const std::string source = slurp(data + "/" + rel);
    const std::string want_stdout = rec["stdout"].get<std::string>();
    const std::string want_exc = rec["exception"].is_null() ? "" : rec["exception"].get<std::string>();

    auto parsed = lang::parse_source(source);
    if (!parsed.ok()) {
      CHECK(parse_exception_class(parsed.error().kind) == want_exc);
      CHECK(want_stdout.empty());
      CHECK(parsed.error().line == rec["line"].get<int>());
      continue;
    }
    const auto run = exec::execute_program(parsed.value());
    CHECK(std::regex_replace(run.stdout_text, address, ">") == want_stdout);
    if (want_exc.empty()) {
      CHECK_FALSE(run.error.has_value());
    } else {
      REQUIRE(run.error.has_value());
      CHECK(run.error->exception_type == want_exc);
      CHECK(run.error->line == rec["line"].get<int>());
    }
  }
}
