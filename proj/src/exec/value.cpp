#include "pypal/exec/value.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace pypal::exec {

std::string type_name(const Value& v) {
  struct Visitor {
    std::string operator()(const NoneValue&) const { return "NoneType"; }
    std::string operator()(bool) const { return "bool"; }
    std::string operator()(std::int64_t) const { return "int"; }
    std::string operator()(double) const { return "float"; }
    std::string operator()(const std::string&) const { return "str"; }
    std::string operator()(const FunctionValue&) const { return "function"; }
    std::string operator()(const BuiltinValue&) const { return "builtin_function_or_method"; }
    std::string operator()(const TypeValue&) const { return "type"; }
  };
  return std::visit(Visitor{}, v.storage());
}

std::string format_float(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  if (d == 0.0) return std::signbit(d) ? "-0.0" : "0.0";

  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d, std::chars_format::scientific);
  std::string sci(buf, res.ptr);

  std::string sign;
  if (sci.front() == '-') {
    sign = "-";
    sci.erase(0, 1);
  }
  const auto e_at = sci.find('e');
  std::string digits;
  for (char c : sci.substr(0, e_at)) {
    if (c != '.') digits.push_back(c);
  }
  const int exponent = std::stoi(sci.substr(e_at + 1));
  const int decpt = exponent + 1;  // position of the decimal point within `digits`

  if (decpt > -4 && decpt <= 16) {
    std::string out;
    if (decpt <= 0) {
      out = "0." + std::string(static_cast<std::size_t>(-decpt), '0') + digits;
    } else if (static_cast<std::size_t>(decpt) >= digits.size()) {
      out = digits + std::string(static_cast<std::size_t>(decpt) - digits.size(), '0') + ".0";
    } else {
      out = digits.substr(0, static_cast<std::size_t>(decpt)) + "." +
            digits.substr(static_cast<std::size_t>(decpt));
    }
    return sign + out;
  }

  std::string mantissa = digits.substr(0, 1);
  if (digits.size() > 1) mantissa += "." + digits.substr(1);
  char exp_buf[16];
  std::snprintf(exp_buf, sizeof exp_buf, "e%c%02d", exponent < 0 ? '-' : '+', std::abs(exponent));
  return sign + mantissa + exp_buf;
}

std::string format_value(const Value& v) {
  struct Visitor {
    std::string operator()(const NoneValue&) const { return "None"; }
    std::string operator()(bool b) const { return b ? "True" : "False"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_float(d); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const FunctionValue& f) const { return "<function " + f.def->name + ">"; }
    std::string operator()(const BuiltinValue& b) const {
      return "<built-in function " + b.name + ">";
    }
    std::string operator()(const TypeValue& t) const { return "<class '" + t.name + "'>"; }
  };
  return std::visit(Visitor{}, v.storage());
}

std::string repr_value(const Value& v) {
  if (!v.is_str()) return format_value(v);
  const std::string& s = v.as_str();
  const bool has_single = s.find('\'') != std::string::npos;
  const bool has_double = s.find('"') != std::string::npos;
  const char quote = has_single && !has_double ? '"' : '\'';
  std::string out(1, quote);
  for (unsigned char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c == static_cast<unsigned char>(quote)) {
          out.push_back('\\');
          out.push_back(static_cast<char>(c));
        } else if (c < 0x20 || c == 0x7f) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\x%02x", c);
          out += buf;
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  out.push_back(quote);
  return out;
}

bool truthy(const Value& v) {
  struct Visitor {
    bool operator()(const NoneValue&) const { return false; }
    bool operator()(bool b) const { return b; }
    bool operator()(std::int64_t i) const { return i != 0; }
    bool operator()(double d) const { return d != 0.0; }
    bool operator()(const std::string& s) const { return !s.empty(); }
    bool operator()(const FunctionValue&) const { return true; }
    bool operator()(const BuiltinValue&) const { return true; }
    bool operator()(const TypeValue&) const { return true; }
  };
  return std::visit(Visitor{}, v.storage());
}

namespace {

bool is_integral(const Value& v) { return v.is_int() || v.is_bool(); }
std::int64_t integral(const Value& v) { return v.is_bool() ? (v.as_bool() ? 1 : 0) : v.as_int(); }

}  // namespace

bool python_equals(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) {
    if (is_integral(a) && is_integral(b)) return integral(a) == integral(b);
    const double x = a.is_float() ? a.as_float() : static_cast<double>(integral(a));
    const double y = b.is_float() ? b.as_float() : static_cast<double>(integral(b));
    if (a.is_float() && b.is_float()) return x == y;
    // int vs float: exact comparison, as Python does.
    const double f = a.is_float() ? x : y;
    const std::int64_t i = a.is_float() ? integral(b) : integral(a);
    if (!std::isfinite(f) || f != std::trunc(f)) return false;
    if (f < -9.2233720368547758e18 || f >= 9.2233720368547758e18) return false;
    return static_cast<std::int64_t>(f) == i;
  }
  if (a.is_str() && b.is_str()) return a.as_str() == b.as_str();
  if (a.is_none() && b.is_none()) return true;
  if (a.is_function() && b.is_function()) return a.as_function().def == b.as_function().def &&
                                                 a.as_function().closure == b.as_function().closure;
  if (a.is_builtin() && b.is_builtin()) return a.as_builtin().name == b.as_builtin().name;
  if (a.is_type() && b.is_type()) return a.as_type().name == b.as_type().name;
  return false;
}

}  // namespace pypal::exec
