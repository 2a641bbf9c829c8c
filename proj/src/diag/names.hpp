#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "pypal/lang/ast.hpp"

namespace pypal::diag::detail {

/// Every name bound anywhere in the program (assignment targets, function
/// names, parameters), in order of first appearance.
std::vector<std::string> binding_order(const lang::Program& program);

/// Names of all function definitions, nested ones included.
std::set<std::string> function_names(const lang::Program& program);

/// Calls `f(name)` for every name an expression reads, left to right. Call
/// callees and f-string slots count as reads.
void for_each_read(const lang::Expr& e, const std::function<void(const std::string&)>& f);

/// Names the subset's builtins answer to, in a fixed order.
const std::vector<std::string>& builtin_names();

}  // namespace pypal::diag::detail
