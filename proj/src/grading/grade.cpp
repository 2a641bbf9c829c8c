#include <memory>

#include "pypal/grading/grading.hpp"
#include "pypal/lang/parser.hpp"

namespace pypal::grading {

namespace {

std::vector<std::string_view> normalized_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    const std::size_t keep = line.find_last_not_of(" \t\r\f\v");
    lines.push_back(keep == std::string_view::npos ? std::string_view{} : line.substr(0, keep + 1));
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string trimmed(std::string_view text) {
  std::string out;
  for (auto line : normalized_lines(text)) {
    out += line;
    out += '\n';
  }
  if (!out.empty()) out.pop_back();
  return out;
}

/// Source line of the print() that produced the first differing output line.
int first_mismatch_line(const exec::ExecutionResult& run, std::string_view expected,
                        const lang::Program& program) {
  const auto actual_lines = normalized_lines(run.stdout_text);
  const auto expected_lines = normalized_lines(expected);
  std::size_t k = 0;
  while (k < actual_lines.size() && k < expected_lines.size() && actual_lines[k] == expected_lines[k]) ++k;

  std::vector<int> producer;
  bool line_open = false;
  for (const auto& chunk : run.chunks) {
    for (char c : chunk.text) {
      if (!line_open) {
        producer.push_back(chunk.line);
        line_open = true;
      }
      if (c == '\n') line_open = false;
    }
  }
  if (k < producer.size()) return producer[k];
  if (!run.chunks.empty()) return run.chunks.back().line;
  return program.statements.empty() ? 1 : program.statements.back().line;
}

int def_line(const lang::Program& program, std::string_view name) {
  for (const auto& stmt : program.statements) {
    if (const auto* def = std::get_if<std::shared_ptr<const lang::FunctionDef>>(&stmt.node)) {
      if ((*def)->name == name) return stmt.line;
    }
  }
  return 1;
}

std::string block(std::string_view text) {
  std::string body = trimmed(text);
  return body.empty() ? "(no output)" : body;
}

GradeReport with_diagnostic(GradeStatus status, diag::Diagnostic d) {
  GradeReport report;
  report.status = status;
  report.feedback = diag::render_feedback(d);
  report.diagnostic = std::move(d);
  return report;
}

}  // namespace

std::string_view to_string(GradeStatus s) noexcept {
  switch (s) {
    case GradeStatus::passed: return "passed";
    case GradeStatus::test_failed: return "test-failed";
    case GradeStatus::syntax_error: return "syntax-error";
    case GradeStatus::runtime_error: return "runtime-error";
    case GradeStatus::lint_error: return "lint-error";
  }
  return "passed";
}

bool compare_output(std::string_view actual, std::string_view expected) {
  return normalized_lines(actual) == normalized_lines(expected);
}

GradeReport grade_submission(const Exercise& ex, std::string_view source,
                             const diag::TemplateTable& table, const exec::Limits& limits) {
  auto parsed = lang::parse_source(source);
  if (!parsed.ok()) {
    return with_diagnostic(GradeStatus::syntax_error,
                           diag::classify_parse_error(parsed.error(), source, table));
  }
  const lang::Program& program = parsed.value();

  auto findings = diag::lint_program(program, table);
  if (!findings.empty()) return with_diagnostic(GradeStatus::lint_error, std::move(findings.front()));

  if (ex.mode == TestMode::function_mode) {
    auto call = exec::call_function(program, *ex.function_name, ex.args, limits, ex.stdin_lines);
    if (!call.ok()) {
      return with_diagnostic(GradeStatus::runtime_error,
                             diag::classify_runtime_error(call.error(), program, table));
    }
    const exec::Value& got = call.value().return_value;
    const exec::Value& want = *ex.expected_return;
    const std::string got_repr = exec::repr_value(got);
    const std::string want_repr = exec::repr_value(want);
    GradeReport report;
    report.actual_output = got_repr;
    report.expected_output = want_repr;
    if (exec::type_name(got) == exec::type_name(want) && exec::python_equals(got, want)) {
      report.feedback = std::string(kPassedFeedback);
      return report;
    }
    diag::TemplateSlots slots;
    slots.subject = *ex.function_name;
    slots.line = def_line(program, *ex.function_name);
    auto d = table.instantiate("wrong-return-value", slots,
                               *ex.function_name + "(...) returned " + got_repr + ", expected " + want_repr);
    report.status = GradeStatus::test_failed;
    report.feedback = diag::render_feedback(d) + "\n\nExpected return value: " + want_repr +
                      "\nYour return value: " + got_repr;
    report.diagnostic = std::move(d);
    return report;
  }

  auto run = exec::execute_program(program, ex.stdin_lines, limits);
  if (run.error) {
    return with_diagnostic(GradeStatus::runtime_error,
                           diag::classify_runtime_error(*run.error, program, table));
  }
  GradeReport report;
  report.actual_output = run.stdout_text;
  report.expected_output = ex.expected_output;
  if (compare_output(run.stdout_text, ex.expected_output)) {
    report.feedback = std::string(kPassedFeedback);
    return report;
  }
  diag::TemplateSlots slots;
  slots.line = first_mismatch_line(run, ex.expected_output, program);
  auto d = table.instantiate("wrong-output", slots, "output does not match the test case");
  report.status = GradeStatus::test_failed;
  report.feedback = diag::render_feedback(d) + "\n\nExpected output:\n" + block(ex.expected_output) +
                    "\n\nYour output:\n" + block(run.stdout_text);
  report.diagnostic = std::move(d);
  return report;
}

}  // namespace pypal::grading
