#include "pypal/lang/ast.hpp"

#include <sstream>

namespace pypal::lang {

std::string_view to_string(BinaryOperator op) noexcept {
  switch (op) {
    case BinaryOperator::add: return "+";
    case BinaryOperator::sub: return "-";
    case BinaryOperator::mul: return "*";
    case BinaryOperator::div: return "/";
    case BinaryOperator::floordiv: return "//";
    case BinaryOperator::mod: return "%";
    case BinaryOperator::pow: return "**";
  }
  return "?";
}

std::string_view to_string(UnaryOperator op) noexcept {
  return op == UnaryOperator::neg ? "-" : "+";
}

std::string_view to_string(CompareOperator op) noexcept {
  switch (op) {
    case CompareOperator::eq: return "==";
    case CompareOperator::ne: return "!=";
    case CompareOperator::lt: return "<";
    case CompareOperator::le: return "<=";
    case CompareOperator::gt: return ">";
    case CompareOperator::ge: return ">=";
  }
  return "?";
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out + "\"";
}

void dump_expr(std::ostream& os, const Expr& e) {
  struct Visitor {
    std::ostream& os;
    void operator()(const IntLit& n) { os << "(int " << n.value << ")"; }
    void operator()(const FloatLit& n) {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << n.value;
      os << "(float " << tmp.str() << ")";
    }
    void operator()(const StrLit& n) { os << "(str " << quoted(n.value) << ")"; }
    void operator()(const BoolLit& n) { os << "(bool " << (n.value ? "True" : "False") << ")"; }
    void operator()(const NoneLit&) { os << "(none)"; }
    void operator()(const FString& n) {
      os << "(fstring";
      for (const auto& p : n.parts) {
        if (p.is_slot) {
          os << " {" << p.text << "}";
        } else {
          os << " " << quoted(p.text);
        }
      }
      os << ")";
    }
    void operator()(const Name& n) { os << "(name " << n.id << ")"; }
    void operator()(const BinaryOp& n) {
      os << "(" << to_string(n.op) << " ";
      dump_expr(os, *n.lhs);
      os << " ";
      dump_expr(os, *n.rhs);
      os << ")";
    }
    void operator()(const UnaryOp& n) {
      os << "(unary" << to_string(n.op) << " ";
      dump_expr(os, *n.operand);
      os << ")";
    }
    void operator()(const Compare& n) {
      os << "(" << to_string(n.op) << " ";
      dump_expr(os, *n.lhs);
      os << " ";
      dump_expr(os, *n.rhs);
      os << ")";
    }
    void operator()(const Call& n) {
      os << "(call " << n.callee;
      for (const auto& a : n.args) {
        os << " ";
        dump_expr(os, *a);
      }
      os << ")";
    }
  };
  std::visit(Visitor{os}, e.node);
}

void dump_stmts(std::ostream& os, const std::vector<Stmt>& stmts, int depth) {
  for (const auto& s : stmts) {
    os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << s.line << ": ";
    if (const auto* a = std::get_if<Assignment>(&s.node)) {
      os << "(assign " << a->target << " ";
      dump_expr(os, *a->value);
      os << ")\n";
    } else if (const auto* x = std::get_if<ExprStmt>(&s.node)) {
      os << "(expr ";
      dump_expr(os, *x->expr);
      os << ")\n";
    } else if (const auto* r = std::get_if<Return>(&s.node)) {
      os << "(return";
      if (r->value) {
        os << " ";
        dump_expr(os, *r->value);
      }
      os << ")\n";
    } else if (const auto* p = std::get_if<Print>(&s.node)) {
      os << "(print";
      for (const auto& a : p->args) {
        os << " ";
        dump_expr(os, *a);
      }
      os << ")\n";
    } else {
      const auto& def = *std::get<std::shared_ptr<const FunctionDef>>(s.node);
      os << "(def " << def.name << " (";
      for (std::size_t i = 0; i < def.params.size(); ++i) {
        os << (i ? " " : "") << def.params[i];
      }
      os << "))\n";
      dump_stmts(os, def.body, depth + 1);
    }
  }
}

}  // namespace

std::string dump(const Program& program) {
  std::ostringstream os;
  dump_stmts(os, program.statements, 0);
  return os.str();
}

std::string dump(const Expr& expr) {
  std::ostringstream os;
  dump_expr(os, expr);
  return os.str();
}

}  // namespace pypal::lang
