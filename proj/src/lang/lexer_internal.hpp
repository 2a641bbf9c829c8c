#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "pypal/lang/parse_error.hpp"
#include "pypal/lang/token.hpp"

namespace pypal::lang::detail {

// Tokens up to the first lexical error, plus that error if any.
struct PartialTokens {
  std::vector<Token> tokens;
  std::optional<ParseError> error;
};

PartialTokens tokenize_partial(std::string_view source);

}  // namespace pypal::lang::detail
