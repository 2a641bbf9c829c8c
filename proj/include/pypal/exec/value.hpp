#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "pypal/lang/ast.hpp"

namespace pypal::exec {

struct Frame;

struct NoneValue {
  bool operator==(const NoneValue&) const = default;
};

struct FunctionValue {
  std::shared_ptr<const lang::FunctionDef> def;
  std::shared_ptr<Frame> closure;  // null for top-level functions
};

struct BuiltinValue {
  std::string name;
};

/// A type object such as `int` or `str`, as returned by type().
struct TypeValue {
  std::string name;
};

/// A runtime value. Booleans are kept distinct from integers but take part
/// in arithmetic as 0 and 1, like Python.
class Value {
 public:
  using Storage = std::variant<NoneValue, bool, std::int64_t, double, std::string, FunctionValue,
                               BuiltinValue, TypeValue>;

  Value() = default;
  static Value none() { return Value(Storage(NoneValue{})); }
  static Value boolean(bool b) { return Value(Storage(std::in_place_type<bool>, b)); }
  static Value integer(std::int64_t i) { return Value(Storage(std::in_place_type<std::int64_t>, i)); }
  static Value floating(double d) { return Value(Storage(std::in_place_type<double>, d)); }
  static Value str(std::string s) { return Value(Storage(std::in_place_type<std::string>, std::move(s))); }
  static Value function(FunctionValue f) { return Value(Storage(std::move(f))); }
  static Value builtin(std::string name) { return Value(Storage(BuiltinValue{std::move(name)})); }
  static Value type(std::string name) { return Value(Storage(TypeValue{std::move(name)})); }

  bool is_none() const { return std::holds_alternative<NoneValue>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_float() const { return std::holds_alternative<double>(v_); }
  bool is_str() const { return std::holds_alternative<std::string>(v_); }
  bool is_function() const { return std::holds_alternative<FunctionValue>(v_); }
  bool is_builtin() const { return std::holds_alternative<BuiltinValue>(v_); }
  bool is_type() const { return std::holds_alternative<TypeValue>(v_); }
  /// int, float or bool.
  bool is_number() const { return is_int() || is_float() || is_bool(); }

  bool as_bool() const { return std::get<bool>(v_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  double as_float() const { return std::get<double>(v_); }
  const std::string& as_str() const { return std::get<std::string>(v_); }
  const FunctionValue& as_function() const { return std::get<FunctionValue>(v_); }
  const BuiltinValue& as_builtin() const { return std::get<BuiltinValue>(v_); }
  const TypeValue& as_type() const { return std::get<TypeValue>(v_); }

  const Storage& storage() const { return v_; }

 private:
  explicit Value(Storage v) : v_(std::move(v)) {}
  Storage v_;
};

/// Python class name: "int", "float", "str", "bool", "NoneType", "function",
/// "builtin_function_or_method" or "type".
std::string type_name(const Value& v);

/// str(v) as Python prints it: 4.0 -> "4.0", True -> "True", strings raw.
std::string format_value(const Value& v);

/// repr(v): like format_value but strings are quoted and escaped.
std::string repr_value(const Value& v);

/// Shortest round-trip rendering of a double, Python style.
std::string format_float(double d);

/// Python truthiness.
bool truthy(const Value& v);

/// Python `==` semantics: numbers compare by value across int/float/bool,
/// strings by content, functions by identity, otherwise unequal.
bool python_equals(const Value& a, const Value& b);

}  // namespace pypal::exec
