#pragma once

#include <span>
#include <string_view>

#include "pypal/lang/ast.hpp"
#include "pypal/lang/parse_error.hpp"
#include "pypal/lang/token.hpp"
#include "pypal/result.hpp"

namespace pypal::lang {

/// Builds a Program from a token stream produced by tokenize(). No recovery:
/// the first error in source order is returned.
Result<Program, ParseError> parse(std::span<const Token> tokens);

/// tokenize() followed by parse().
Result<Program, ParseError> parse_source(std::string_view source);

}  // namespace pypal::lang
