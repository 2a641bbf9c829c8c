#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pypal::lang {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct IntLit {
  std::int64_t value = 0;
};
struct FloatLit {
  double value = 0.0;
};
struct StrLit {
  std::string value;
};
struct BoolLit {
  bool value = false;
};
struct NoneLit {};

struct FStringPart {
  bool is_slot = false;  // true: `text` names a variable to interpolate
  std::string text;
};
struct FString {
  std::vector<FStringPart> parts;
};

struct Name {
  std::string id;
};

enum class BinaryOperator { add, sub, mul, div, floordiv, mod, pow };
enum class UnaryOperator { neg, pos };
enum class CompareOperator { eq, ne, lt, le, gt, ge };

std::string_view to_string(BinaryOperator op) noexcept;
std::string_view to_string(UnaryOperator op) noexcept;
std::string_view to_string(CompareOperator op) noexcept;

struct BinaryOp {
  BinaryOperator op = BinaryOperator::add;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct UnaryOp {
  UnaryOperator op = UnaryOperator::neg;
  ExprPtr operand;
};
struct Compare {
  CompareOperator op = CompareOperator::eq;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct Call {
  std::string callee;
  std::vector<ExprPtr> args;
};

struct Expr {
  std::variant<IntLit, FloatLit, StrLit, BoolLit, NoneLit, FString, Name,
               BinaryOp, UnaryOp, Compare, Call>
      node;
  int line = 1;
  int column = 1;
};

struct FunctionDef;
struct Stmt;

struct Assignment {
  std::string target;
  ExprPtr value;
};
struct ExprStmt {
  ExprPtr expr;
};
struct Return {
  ExprPtr value;  // null for a bare `return`
};
struct Print {
  std::vector<ExprPtr> args;
};

struct Stmt {
  std::variant<Assignment, ExprStmt, std::shared_ptr<const FunctionDef>,
               Return, Print>
      node;
  int line = 1;
};

struct FunctionDef {
  std::string name;
  std::vector<std::string> params;
  std::vector<Stmt> body;  // never empty
};

struct Program {
  std::vector<Stmt> statements;
};

/// Parenthesised S-expression rendering of the tree, with line numbers.
/// Two programs are structurally identical iff their dumps are equal.
std::string dump(const Program& program);
std::string dump(const Expr& expr);

/// Visits every statement, including those nested in function bodies, in
/// source order.
template <class F>
void for_each_statement(const std::vector<Stmt>& stmts, F&& f) {
  for (const auto& s : stmts) {
    f(s);
    if (const auto* def = std::get_if<std::shared_ptr<const FunctionDef>>(&s.node)) {
      for_each_statement((*def)->body, f);
    }
  }
}

}  // namespace pypal::lang
