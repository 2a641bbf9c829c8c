#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pypal/exec/value.hpp"
#include "pypal/lang/ast.hpp"
#include "pypal/result.hpp"

namespace pypal::exec {

enum class RuntimeErrorKind {
  undefined_name,
  use_before_assignment,
  type_mismatch,
  division_by_zero,
  argument_count,
  not_callable,
  step_limit,
  generic,
};

inline constexpr RuntimeErrorKind kAllRuntimeErrorKinds[] = {
    RuntimeErrorKind::undefined_name, RuntimeErrorKind::use_before_assignment,
    RuntimeErrorKind::type_mismatch,  RuntimeErrorKind::division_by_zero,
    RuntimeErrorKind::argument_count, RuntimeErrorKind::not_callable,
    RuntimeErrorKind::step_limit,     RuntimeErrorKind::generic,
};

std::string_view to_string(RuntimeErrorKind kind) noexcept;

struct RuntimeError {
  RuntimeErrorKind kind = RuntimeErrorKind::generic;
  int line = 0;  // innermost executing statement
  std::string detail;
  std::optional<std::string> name;
  std::string exception_type;  // the Python class, e.g. "NameError"
};

/// "NameError: name 's' is not defined".
std::string raw_message(const RuntimeError& err);

struct Limits {
  std::int64_t max_steps = 100000;
  int max_depth = 200;
  std::size_t max_output_bytes = 1 << 20;
};

/// Text emitted by one print() call and the line that issued it.
struct OutputChunk {
  int line = 0;
  std::string text;
};

struct ExecutionResult {
  std::string stdout_text;
  std::optional<RuntimeError> error;
  std::int64_t steps_used = 0;
  std::vector<OutputChunk> chunks;
};

ExecutionResult execute_program(const lang::Program& program,
                                 const std::vector<std::string>& stdin_lines = {},
                                 const Limits& limits = {});

struct FunctionCallOutput {
  Value return_value;
  std::string stdout_text;  // top-level output followed by the call's output
  std::int64_t steps_used = 0;
  std::vector<OutputChunk> chunks;
};

/// Runs the top-level statements, then calls `function_name(args...)`.
Result<FunctionCallOutput, RuntimeError> call_function(const lang::Program& program,
                                                       std::string_view function_name,
                                                       const std::vector<Value>& args,
                                                       const Limits& limits = {},
                                                       const std::vector<std::string>& stdin_lines = {});

}  // namespace pypal::exec
