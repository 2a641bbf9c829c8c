#include "pypal/exec/interpreter.hpp"

#include <cctype>
#include <charconv>
#include <climits>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>

namespace pypal::exec {

std::string_view to_string(RuntimeErrorKind kind) noexcept {
  switch (kind) {
    case RuntimeErrorKind::undefined_name: return "undefined-name";
    case RuntimeErrorKind::use_before_assignment: return "use-before-assignment";
    case RuntimeErrorKind::type_mismatch: return "type-mismatch";
    case RuntimeErrorKind::division_by_zero: return "division-by-zero";
    case RuntimeErrorKind::argument_count: return "argument-count";
    case RuntimeErrorKind::not_callable: return "not-callable";
    case RuntimeErrorKind::step_limit: return "step-limit";
    case RuntimeErrorKind::generic: return "generic";
  }
  return "generic";
}

std::string raw_message(const RuntimeError& err) {
  return err.exception_type + ": " + err.detail;
}

struct Frame {
  std::unordered_map<std::string, Value> vars;
  std::shared_ptr<Frame> parent;                  // enclosing function frame, if any
  const std::set<std::string>* locals = nullptr;  // null marks the global frame
};

namespace {

using lang::BinaryOperator;
using lang::CompareOperator;
using lang::Expr;
using lang::FunctionDef;
using lang::Stmt;

struct Raise {
  RuntimeError error;
};

bool is_builtin_function(std::string_view name) {
  static const std::set<std::string_view> kNames = {"print", "input", "len", "abs",
                                                    "round", "max",   "min"};
  return kNames.count(name) != 0;
}

bool is_builtin_type(std::string_view name) {
  return name == "int" || name == "float" || name == "str" || name == "bool" || name == "type";
}

bool is_integral(const Value& v) { return v.is_int() || v.is_bool(); }
std::int64_t integral(const Value& v) { return v.is_bool() ? (v.as_bool() ? 1 : 0) : v.as_int(); }
double as_double(const Value& v) { return v.is_float() ? v.as_float() : static_cast<double>(integral(v)); }
long double as_long_double(const Value& v) {
  return v.is_float() ? static_cast<long double>(v.as_float())
                      : static_cast<long double>(integral(v));
}

std::string quote_type(const Value& v) { return "'" + type_name(v) + "'"; }

std::size_t code_points(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string trim(std::string_view s) {
  const auto ws = " \t\n\r\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += names.size() == 2 ? " and " : (i + 1 == names.size() ? ", and " : ", ");
    out += "'" + names[i] + "'";
  }
  return out;
}

class Interpreter {
 public:
  Interpreter(const Limits& limits, const std::vector<std::string>& stdin_lines)
      : limits_(limits), stdin_(stdin_lines), globals_(std::make_shared<Frame>()) {}

  Interpreter(const Interpreter&) = delete;
  Interpreter& operator=(const Interpreter&) = delete;

  ~Interpreter() {
    // Function values stored in frames point back at frames; clearing the
    // maps breaks those cycles.
    for (auto& f : frames_) f->vars.clear();
    globals_->vars.clear();
  }

  void run_module(const lang::Program& program) { exec_block(program.statements, globals_); }

  Value call_global(std::string_view name, const std::vector<Value>& args) {
    auto it = globals_->vars.find(std::string(name));
    if (it == globals_->vars.end()) {
      raise(RuntimeErrorKind::undefined_name, "NameError",
            "name '" + std::string(name) + "' is not defined", std::string(name));
    }
    const Value callee = it->second;
    return call(callee, args, std::string(name));
  }

  std::string& out() { return out_; }
  std::vector<OutputChunk>& chunks() { return chunks_; }
  std::int64_t steps() const { return steps_; }
  int line() const { return line_; }

 private:
  [[noreturn]] void raise(RuntimeErrorKind kind, std::string exception_type, std::string detail,
                          std::optional<std::string> name = std::nullopt) const {
    throw Raise{RuntimeError{kind, line_, std::move(detail), std::move(name),
                             std::move(exception_type)}};
  }
  [[noreturn]] void type_error(std::string detail) const {
    raise(RuntimeErrorKind::type_mismatch, "TypeError", std::move(detail));
  }
  [[noreturn]] void value_error(std::string detail) const {
    raise(RuntimeErrorKind::type_mismatch, "ValueError", std::move(detail));
  }
  [[noreturn]] void zero_division(std::string detail) const {
    raise(RuntimeErrorKind::division_by_zero, "ZeroDivisionError", std::move(detail));
  }
  [[noreturn]] void overflow(std::string detail) const {
    raise(RuntimeErrorKind::generic, "OverflowError", std::move(detail));
  }
  [[noreturn]] void int_overflow() const {
    overflow("integer overflow (values beyond 64-bit are not supported)");
  }
  [[noreturn]] void arity(std::string detail, std::string name) const {
    raise(RuntimeErrorKind::argument_count, "TypeError", std::move(detail), std::move(name));
  }

  void tick() {
    if (steps_ >= limits_.max_steps) {
      raise(RuntimeErrorKind::step_limit, "StepLimitExceeded",
            "execution exceeded the limit of " + std::to_string(limits_.max_steps) + " steps");
    }
    ++steps_;
  }

  void check_size(std::size_t bytes) const {
    if (bytes > limits_.max_output_bytes) {
      raise(RuntimeErrorKind::generic, "MemoryError",
            "result exceeds the limit of " + std::to_string(limits_.max_output_bytes) + " bytes");
    }
  }

  void emit(std::string text) {
    check_size(out_.size() + text.size());
    out_ += text;
    chunks_.push_back({line_, std::move(text)});
  }

  const std::set<std::string>& locals_of(const FunctionDef& def) {
    auto it = locals_cache_.find(&def);
    if (it != locals_cache_.end()) return it->second;
    std::set<std::string> names(def.params.begin(), def.params.end());
    for (const auto& s : def.body) {
      if (const auto* a = std::get_if<lang::Assignment>(&s.node)) names.insert(a->target);
      if (const auto* d = std::get_if<std::shared_ptr<const FunctionDef>>(&s.node)) {
        names.insert((*d)->name);
      }
    }
    return locals_cache_.emplace(&def, std::move(names)).first->second;
  }

  // --- statements ---------------------------------------------------------

  std::optional<Value> exec_block(const std::vector<Stmt>& body, const std::shared_ptr<Frame>& frame) {
    for (const auto& s : body) {
      line_ = s.line;
      tick();
      if (const auto* a = std::get_if<lang::Assignment>(&s.node)) {
        Value v = eval(*a->value, frame);
        frame->vars[a->target] = std::move(v);
      } else if (const auto* e = std::get_if<lang::ExprStmt>(&s.node)) {
        eval(*e->expr, frame);
      } else if (const auto* d = std::get_if<std::shared_ptr<const FunctionDef>>(&s.node)) {
        FunctionValue fn{*d, frame == globals_ ? nullptr : frame};
        frame->vars[(*d)->name] = Value::function(std::move(fn));
      } else if (const auto* r = std::get_if<lang::Return>(&s.node)) {
        return r->value ? eval(*r->value, frame) : Value::none();
      } else if (const auto* p = std::get_if<lang::Print>(&s.node)) {
        Value callee = lookup("print", frame);
        std::vector<Value> args;
        args.reserve(p->args.size());
        for (const auto& arg : p->args) args.push_back(eval(*arg, frame));
        call(callee, args, "print");
      }
    }
    return std::nullopt;
  }

  // --- names --------------------------------------------------------------

  Value lookup(const std::string& name, const std::shared_ptr<Frame>& frame) {
    for (Frame* f = frame.get(); f && f->locals; f = f->parent.get()) {
      if (!f->locals->count(name)) continue;
      auto it = f->vars.find(name);
      if (it != f->vars.end()) return it->second;
      if (f == frame.get()) {
        raise(RuntimeErrorKind::use_before_assignment, "UnboundLocalError",
              "local variable '" + name + "' referenced before assignment", name);
      }
      raise(RuntimeErrorKind::undefined_name, "NameError",
            "free variable '" + name + "' referenced before assignment in enclosing scope", name);
    }
    auto it = globals_->vars.find(name);
    if (it != globals_->vars.end()) return it->second;
    if (is_builtin_function(name)) return Value::builtin(name);
    if (is_builtin_type(name)) return Value::type(name);
    raise(RuntimeErrorKind::undefined_name, "NameError", "name '" + name + "' is not defined", name);
  }

  // --- expressions --------------------------------------------------------

  Value eval(const Expr& e, const std::shared_ptr<Frame>& frame) {
    tick();
    return std::visit([&](const auto& node) { return eval_node(node, frame); }, e.node);
  }

  Value eval_node(const lang::IntLit& n, const std::shared_ptr<Frame>&) { return Value::integer(n.value); }
  Value eval_node(const lang::FloatLit& n, const std::shared_ptr<Frame>&) { return Value::floating(n.value); }
  Value eval_node(const lang::StrLit& n, const std::shared_ptr<Frame>&) { return Value::str(n.value); }
  Value eval_node(const lang::BoolLit& n, const std::shared_ptr<Frame>&) { return Value::boolean(n.value); }
  Value eval_node(const lang::NoneLit&, const std::shared_ptr<Frame>&) { return Value::none(); }

  Value eval_node(const lang::FString& n, const std::shared_ptr<Frame>& frame) {
    std::string out;
    for (const auto& part : n.parts) {
      out += part.is_slot ? format_value(lookup(part.text, frame)) : part.text;
      check_size(out.size());
    }
    return Value::str(std::move(out));
  }

  Value eval_node(const lang::Name& n, const std::shared_ptr<Frame>& frame) { return lookup(n.id, frame); }

  Value eval_node(const lang::UnaryOp& n, const std::shared_ptr<Frame>& frame) {
    Value v = eval(*n.operand, frame);
    const bool neg = n.op == lang::UnaryOperator::neg;
    if (is_integral(v)) {
      const std::int64_t i = integral(v);
      if (!neg) return Value::integer(i);
      if (i == INT64_MIN) int_overflow();
      return Value::integer(-i);
    }
    if (v.is_float()) return Value::floating(neg ? -v.as_float() : v.as_float());
    type_error(std::string("bad operand type for unary ") + (neg ? "-" : "+") + ": " + quote_type(v));
  }

  Value eval_node(const lang::BinaryOp& n, const std::shared_ptr<Frame>& frame) {
    Value lhs = eval(*n.lhs, frame);
    Value rhs = eval(*n.rhs, frame);
    return binary(n.op, lhs, rhs);
  }

  Value eval_node(const lang::Compare& n, const std::shared_ptr<Frame>& frame) {
    Value lhs = eval(*n.lhs, frame);
    Value rhs = eval(*n.rhs, frame);
    return Value::boolean(compare(n.op, lhs, rhs));
  }

  Value eval_node(const lang::Call& n, const std::shared_ptr<Frame>& frame) {
    Value callee = lookup(n.callee, frame);
    std::vector<Value> args;
    args.reserve(n.args.size());
    for (const auto& a : n.args) args.push_back(eval(*a, frame));
    return call(callee, args, n.callee);
  }

  // --- operators ----------------------------------------------------------

  Value binary(BinaryOperator op, const Value& a, const Value& b) {
    const std::string sym(lang::to_string(op));
    if (is_integral(a) && is_integral(b)) return int_binary(op, integral(a), integral(b));
    if (a.is_number() && b.is_number()) return float_binary(op, as_double(a), as_double(b));

    if (op == BinaryOperator::add && a.is_str()) {
      if (!b.is_str()) type_error("can only concatenate str (not \"" + type_name(b) + "\") to str");
      check_size(a.as_str().size() + b.as_str().size());
      return Value::str(a.as_str() + b.as_str());
    }
    if (op == BinaryOperator::mul && (a.is_str() || b.is_str())) {
      const Value& text = a.is_str() ? a : b;
      const Value& count = a.is_str() ? b : a;
      if (!is_integral(count)) {
        type_error("can't multiply sequence by non-int of type " + quote_type(count));
      }
      const std::int64_t k = integral(count);
      if (k <= 0 || text.as_str().empty()) return Value::str("");
      if (static_cast<std::uint64_t>(k) > limits_.max_output_bytes / text.as_str().size()) {
        check_size(limits_.max_output_bytes + 1);
      }
      std::string out;
      out.reserve(text.as_str().size() * static_cast<std::size_t>(k));
      for (std::int64_t i = 0; i < k; ++i) out += text.as_str();
      return Value::str(std::move(out));
    }
    if (op == BinaryOperator::mod && a.is_str()) {
      type_error("string formatting with '%' is not supported");
    }
    type_error("unsupported operand type(s) for " + sym + ": " + quote_type(a) + " and " +
               quote_type(b));
  }

  Value int_binary(BinaryOperator op, std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    switch (op) {
      case BinaryOperator::add:
        if (__builtin_add_overflow(a, b, &r)) int_overflow();
        return Value::integer(r);
      case BinaryOperator::sub:
        if (__builtin_sub_overflow(a, b, &r)) int_overflow();
        return Value::integer(r);
      case BinaryOperator::mul:
        if (__builtin_mul_overflow(a, b, &r)) int_overflow();
        return Value::integer(r);
      case BinaryOperator::div:
        if (b == 0) zero_division("division by zero");
        return Value::floating(static_cast<double>(a) / static_cast<double>(b));
      case BinaryOperator::floordiv: {
        if (b == 0) zero_division("integer division or modulo by zero");
        if (a == INT64_MIN && b == -1) int_overflow();
        std::int64_t q = a / b;
        if (a % b != 0 && ((a < 0) != (b < 0))) --q;
        return Value::integer(q);
      }
      case BinaryOperator::mod: {
        if (b == 0) zero_division("integer division or modulo by zero");
        if (b == -1) return Value::integer(0);
        std::int64_t m = a % b;
        if (m != 0 && ((m < 0) != (b < 0))) m += b;
        return Value::integer(m);
      }
      case BinaryOperator::pow: {
        if (b < 0) return float_binary(op, static_cast<double>(a), static_cast<double>(b));
        std::int64_t result = 1;
        std::int64_t base = a;
        std::int64_t e = b;
        while (e > 0) {
          if (e & 1) {
            if (__builtin_mul_overflow(result, base, &result)) int_overflow();
          }
          e >>= 1;
          if (e > 0 && __builtin_mul_overflow(base, base, &base)) int_overflow();
        }
        return Value::integer(result);
      }
    }
    return Value::none();
  }

  Value float_binary(BinaryOperator op, double a, double b) {
    switch (op) {
      case BinaryOperator::add: return Value::floating(a + b);
      case BinaryOperator::sub: return Value::floating(a - b);
      case BinaryOperator::mul: return Value::floating(a * b);
      case BinaryOperator::div:
        if (b == 0.0) zero_division("float division by zero");
        return Value::floating(a / b);
      case BinaryOperator::floordiv:
      case BinaryOperator::mod: {
        if (b == 0.0) {
          zero_division(op == BinaryOperator::mod ? "float modulo" : "float floor division by zero");
        }
        double mod = std::fmod(a, b);
        double div = (a - mod) / b;
        if (mod != 0.0) {
          if ((b < 0) != (mod < 0)) {
            mod += b;
            div -= 1.0;
          }
        } else {
          mod = std::copysign(0.0, b);
        }
        double floordiv;
        if (div != 0.0) {
          floordiv = std::floor(div);
          if (div - floordiv > 0.5) floordiv += 1.0;
        } else {
          floordiv = std::copysign(0.0, a / b);
        }
        return Value::floating(op == BinaryOperator::mod ? mod : floordiv);
      }
      case BinaryOperator::pow: {
        if (a == 0.0 && b < 0.0) zero_division("0.0 cannot be raised to a negative power");
        if (a < 0.0 && std::isfinite(b) && b != std::floor(b)) {
          raise(RuntimeErrorKind::generic, "ValueError",
                "negative number cannot be raised to a fractional power (complex results are not "
                "supported)");
        }
        const double r = std::pow(a, b);
        if (std::isinf(r) && std::isfinite(a) && std::isfinite(b)) {
          overflow("(34, 'Numerical result out of range')");
        }
        return Value::floating(r);
      }
    }
    return Value::none();
  }

  bool compare(CompareOperator op, const Value& a, const Value& b) {
    if (op == CompareOperator::eq) return python_equals(a, b);
    if (op == CompareOperator::ne) return !python_equals(a, b);
    int ord = 0;
    if (a.is_number() && b.is_number()) {
      if (a.is_float() && std::isnan(a.as_float())) return false;
      if (b.is_float() && std::isnan(b.as_float())) return false;
      const long double x = as_long_double(a);
      const long double y = as_long_double(b);
      ord = x < y ? -1 : (x > y ? 1 : 0);
    } else if (a.is_str() && b.is_str()) {
      const int c = a.as_str().compare(b.as_str());
      ord = c < 0 ? -1 : (c > 0 ? 1 : 0);
    } else {
      type_error("'" + std::string(lang::to_string(op)) + "' not supported between instances of " +
                 quote_type(a) + " and " + quote_type(b));
    }
    switch (op) {
      case CompareOperator::lt: return ord < 0;
      case CompareOperator::le: return ord <= 0;
      case CompareOperator::gt: return ord > 0;
      case CompareOperator::ge: return ord >= 0;
      default: return false;
    }
  }

  // --- calls --------------------------------------------------------------

  Value call(const Value& callee, const std::vector<Value>& args, const std::string& called_as) {
    if (callee.is_function()) return call_user(callee.as_function(), args);
    if (callee.is_builtin()) return call_builtin(callee.as_builtin().name, args);
    if (callee.is_type()) return construct(callee.as_type().name, args);
    raise(RuntimeErrorKind::not_callable, "TypeError", quote_type(callee) + " object is not callable",
          called_as);
  }

  Value call_user(const FunctionValue& fn, const std::vector<Value>& args) {
    const FunctionDef& def = *fn.def;
    const std::size_t want = def.params.size();
    if (args.size() < want) {
      std::vector<std::string> missing(def.params.begin() + static_cast<std::ptrdiff_t>(args.size()),
                                       def.params.end());
      arity(def.name + "() missing " + std::to_string(missing.size()) + " required positional argument" +
                (missing.size() == 1 ? "" : "s") + ": " + join_names(missing),
            def.name);
    }
    if (args.size() > want) {
      arity(def.name + "() takes " + std::to_string(want) + " positional argument" +
                (want == 1 ? "" : "s") + " but " + std::to_string(args.size()) +
                (args.size() == 1 ? " was" : " were") + " given",
            def.name);
    }
    if (depth_ >= limits_.max_depth) {
      raise(RuntimeErrorKind::generic, "RecursionError", "maximum recursion depth exceeded");
    }
    auto frame = std::make_shared<Frame>();
    frame->locals = &locals_of(def);
    frame->parent = fn.closure;
    for (std::size_t i = 0; i < want; ++i) frame->vars[def.params[i]] = args[i];
    frames_.push_back(frame);

    const int saved_line = line_;
    ++depth_;
    std::optional<Value> result = exec_block(def.body, frame);
    --depth_;
    line_ = saved_line;
    return result ? std::move(*result) : Value::none();
  }

  void expect_args(std::string_view name, const std::vector<Value>& args, std::size_t lo,
                   std::size_t hi) const {
    if (args.size() >= lo && args.size() <= hi) return;
    const std::string n(name);
    const std::string given = std::to_string(args.size());
    if (lo == 1 && hi == 1) arity(n + "() takes exactly one argument (" + given + " given)", n);
    if (args.size() > hi) {
      arity(n + "() takes at most " + std::to_string(hi) + " argument" + (hi == 1 ? "" : "s") +
                " (" + given + " given)",
            n);
    }
    arity(n + "() takes at least " + std::to_string(lo) + " argument" + (lo == 1 ? "" : "s") +
              " (" + given + " given)",
          n);
  }

  Value call_builtin(const std::string& name, const std::vector<Value>& args) {
    if (name == "print") {
      std::string text;
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i > 0) text.push_back(' ');
        text += format_value(args[i]);
        check_size(text.size());
      }
      text.push_back('\n');
      emit(std::move(text));
      return Value::none();
    }
    if (name == "input") {
      if (args.size() > 1) {
        arity("input expected at most 1 argument, got " + std::to_string(args.size()), name);
      }
      if (!args.empty()) {
        std::string prompt = format_value(args[0]);
        if (!prompt.empty()) emit(std::move(prompt));
      }
      if (next_input_ >= stdin_.size()) {
        raise(RuntimeErrorKind::generic, "EOFError", "EOF when reading a line");
      }
      return Value::str(stdin_[next_input_++]);
    }
    if (name == "len") {
      expect_args(name, args, 1, 1);
      if (!args[0].is_str()) type_error("object of type " + quote_type(args[0]) + " has no len()");
      return Value::integer(static_cast<std::int64_t>(code_points(args[0].as_str())));
    }
    if (name == "abs") {
      expect_args(name, args, 1, 1);
      const Value& v = args[0];
      if (is_integral(v)) {
        const std::int64_t i = integral(v);
        if (i == INT64_MIN) int_overflow();
        return Value::integer(i < 0 ? -i : i);
      }
      if (v.is_float()) return Value::floating(std::fabs(v.as_float()));
      type_error("bad operand type for abs(): " + quote_type(v));
    }
    if (name == "round") return round_builtin(args);
    if (name == "max" || name == "min") return extremum(name, args);
    raise(RuntimeErrorKind::undefined_name, "NameError", "name '" + name + "' is not defined", name);
  }

  Value round_builtin(const std::vector<Value>& args) {
    if (args.empty()) arity("round() missing required argument 'number' (pos 1)", "round");
    expect_args("round", args, 1, 2);
    const Value& x = args[0];
    if (!x.is_number()) type_error("type " + type_name(x) + " doesn't define __round__ method");
    const bool has_digits = args.size() == 2 && !args[1].is_none();
    if (!has_digits) {
      if (is_integral(x)) return Value::integer(integral(x));
      const double d = x.as_float();
      if (std::isnan(d)) value_error("cannot convert float NaN to integer");
      if (std::isinf(d)) overflow("cannot convert float infinity to integer");
      const double r = std::nearbyint(d);
      if (r < -9.2233720368547758e18 || r >= 9.2233720368547758e18) int_overflow();
      return Value::integer(static_cast<std::int64_t>(r));
    }
    if (!is_integral(args[1])) {
      type_error(quote_type(args[1]) + " object cannot be interpreted as an integer");
    }
    const std::int64_t nd = integral(args[1]);
    if (is_integral(x)) {
      const std::int64_t v = integral(x);
      if (nd >= 0) return Value::integer(v);
      if (nd < -18) return Value::integer(0);
      std::int64_t p = 1;
      for (std::int64_t i = 0; i < -nd; ++i) p *= 10;
      std::int64_t q = v / p;
      std::int64_t rem = v % p;
      if (rem < 0) {
        rem += p;
        --q;
      }
      if (2 * rem > p || (2 * rem == p && (q % 2 != 0))) ++q;
      std::int64_t out = 0;
      if (__builtin_mul_overflow(q, p, &out)) int_overflow();
      return Value::integer(out);
    }
    const double d = x.as_float();
    if (!std::isfinite(d) || nd > 300) return Value::floating(d);
    if (nd >= 0) {
      char buf[512];
      std::snprintf(buf, sizeof buf, "%.*f", static_cast<int>(nd), d);
      return Value::floating(std::strtod(buf, nullptr));
    }
    if (nd < -308) return Value::floating(std::copysign(0.0, d));
    const double p = std::pow(10.0, static_cast<double>(-nd));
    return Value::floating(std::nearbyint(d / p) * p);
  }

  Value extremum(const std::string& name, const std::vector<Value>& args) {
    const bool is_max = name == "max";
    if (args.empty()) arity(name + " expected at least 1 argument, got 0", name);
    std::vector<Value> items;
    if (args.size() == 1) {
      if (!args[0].is_str()) type_error(quote_type(args[0]) + " object is not iterable");
      if (args[0].as_str().empty()) value_error(name + "() arg is an empty sequence");
      for (char c : args[0].as_str()) items.push_back(Value::str(std::string(1, c)));
    } else {
      items = args;
    }
    Value best = items[0];
    for (std::size_t i = 1; i < items.size(); ++i) {
      if (compare(is_max ? CompareOperator::gt : CompareOperator::lt, items[i], best)) best = items[i];
    }
    return best;
  }

  Value construct(const std::string& type, const std::vector<Value>& args) {
    if (type == "type") {
      if (args.size() != 1) arity("type() takes 1 or 3 arguments", type);
      return Value::type(type_name(args[0]));
    }
    if (type == "str") {
      expect_args(type, args, 0, 1);
      return Value::str(args.empty() ? std::string() : format_value(args[0]));
    }
    if (type == "bool") {
      if (args.size() > 1) arity("bool expected at most 1 argument, got " + std::to_string(args.size()), type);
      return Value::boolean(!args.empty() && truthy(args[0]));
    }
    if (type == "float") {
      if (args.size() > 1) arity("float expected at most 1 argument, got " + std::to_string(args.size()), type);
      if (args.empty()) return Value::floating(0.0);
      return to_float(args[0]);
    }
    if (type == "int") {
      expect_args(type, args, 0, 2);
      if (args.empty()) return Value::integer(0);
      return to_int(args);
    }
    type_error("cannot create " + quote_type(Value::type(type)) + " instances");
  }

  Value to_float(const Value& v) {
    if (v.is_float()) return v;
    if (is_integral(v)) return Value::floating(static_cast<double>(integral(v)));
    if (!v.is_str()) {
      type_error("float() argument must be a string or a real number, not " + quote_type(v));
    }
    std::string s = trim(v.as_str());
    std::string cleaned;
    bool ok = !s.empty();
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '_') {
        const bool between = i > 0 && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i - 1])) &&
                             std::isdigit(static_cast<unsigned char>(s[i + 1]));
        if (!between) ok = false;
        continue;
      }
      cleaned.push_back(s[i]);
    }
    double d = 0;
    if (ok) {
      std::string_view body = cleaned;
      bool negative = false;
      if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
        negative = body[0] == '-';
        body.remove_prefix(1);
      }
      const bool hex = body.size() > 1 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X');
      auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), d);
      ok = !hex && !body.empty() && body[0] != '+' && body[0] != '-' &&
           ptr == body.data() + body.size() && (ec == std::errc{} || ec == std::errc::result_out_of_range);
      if (ec == std::errc::result_out_of_range) {
        // Python gives inf or 0.0 rather than failing.
        d = std::strtod(std::string(body).c_str(), nullptr);
      }
      if (negative) d = -d;
    }
    if (!ok) value_error("could not convert string to float: " + repr_value(v));
    return Value::floating(d);
  }

  Value to_int(const std::vector<Value>& args) {
    const Value& v = args[0];
    int base = 10;
    if (args.size() == 2) {
      if (!v.is_str()) type_error("int() can't convert non-string with explicit base");
      if (!is_integral(args[1])) {
        type_error(quote_type(args[1]) + " object cannot be interpreted as an integer");
      }
      const std::int64_t b = integral(args[1]);
      if (b < 2 || b > 36) value_error("int() base must be >= 2 and <= 36, or 0");
      base = static_cast<int>(b);
    }
    if (is_integral(v)) return Value::integer(integral(v));
    if (v.is_float()) {
      const double d = v.as_float();
      if (std::isnan(d)) value_error("cannot convert float NaN to integer");
      if (std::isinf(d)) overflow("cannot convert float infinity to integer");
      const double t = std::trunc(d);
      if (t < -9.2233720368547758e18 || t >= 9.2233720368547758e18) int_overflow();
      return Value::integer(static_cast<std::int64_t>(t));
    }
    if (!v.is_str()) {
      type_error("int() argument must be a string, a bytes-like object or a real number, not " +
                 quote_type(v));
    }
    const std::string s = trim(v.as_str());
    std::string digits;
    bool ok = !s.empty();
    bool negative = false;
    std::size_t i = 0;
    if (ok && (s[0] == '+' || s[0] == '-')) {
      negative = s[0] == '-';
      i = 1;
    }
    for (std::size_t j = i; j < s.size(); ++j) {
      if (s[j] == '_') {
        if (j == i || j + 1 == s.size() || s[j + 1] == '_') ok = false;
        continue;
      }
      digits.push_back(s[j]);
    }
    if (digits.empty()) ok = false;
    std::uint64_t magnitude = 0;
    if (ok) {
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), magnitude, base);
      if (ptr != digits.data() + digits.size()) ok = false;
      if (ok && ec == std::errc::result_out_of_range) int_overflow();
    }
    if (!ok) {
      value_error("invalid literal for int() with base " + std::to_string(base) + ": " + repr_value(v));
    }
    if (negative) {
      if (magnitude > static_cast<std::uint64_t>(INT64_MAX) + 1) int_overflow();
      return Value::integer(static_cast<std::int64_t>(0 - magnitude));
    }
    if (magnitude > static_cast<std::uint64_t>(INT64_MAX)) int_overflow();
    return Value::integer(static_cast<std::int64_t>(magnitude));
  }

  Limits limits_;
  const std::vector<std::string>& stdin_;
  std::size_t next_input_ = 0;
  std::shared_ptr<Frame> globals_;
  std::vector<std::shared_ptr<Frame>> frames_;
  std::map<const FunctionDef*, std::set<std::string>> locals_cache_;
  std::string out_;
  std::vector<OutputChunk> chunks_;
  std::int64_t steps_ = 0;
  int depth_ = 0;
  int line_ = 0;
};

}  // namespace

ExecutionResult execute_program(const lang::Program& program,
                                 const std::vector<std::string>& stdin_lines, const Limits& limits) {
  Interpreter interp(limits, stdin_lines);
  ExecutionResult result;
  try {
    interp.run_module(program);
  } catch (const Raise& r) {
    result.error = r.error;
  }
  result.stdout_text = std::move(interp.out());
  result.chunks = std::move(interp.chunks());
  result.steps_used = interp.steps();
  return result;
}

Result<FunctionCallOutput, RuntimeError> call_function(const lang::Program& program,
                                                       std::string_view function_name,
                                                       const std::vector<Value>& args,
                                                       const Limits& limits,
                                                       const std::vector<std::string>& stdin_lines) {
  Interpreter interp(limits, stdin_lines);
  try {
    interp.run_module(program);
    FunctionCallOutput out;
    out.return_value = interp.call_global(function_name, args);
    out.stdout_text = std::move(interp.out());
    out.chunks = std::move(interp.chunks());
    out.steps_used = interp.steps();
    return out;
  } catch (const Raise& r) {
    return r.error;
  }
}

}  // namespace pypal::exec
