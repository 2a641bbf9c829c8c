#pragma once

#include <string_view>
#include <vector>

#include "pypal/lang/parse_error.hpp"
#include "pypal/lang/token.hpp"
#include "pypal/result.hpp"

namespace pypal::lang {

/// Tabs advance indentation to the next multiple of this width.
inline constexpr int kTabWidth = 8;

/// Splits source into tokens. Blank and comment-only lines produce nothing;
/// every other physical line ends with a newline token. Changes in leading
/// whitespace produce indent/dedent tokens, and the stream ends with eof.
Result<std::vector<Token>, ParseError> tokenize(std::string_view source);

}  // namespace pypal::lang
