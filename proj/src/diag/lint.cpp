#include <algorithm>
#include <map>

#include "names.hpp"
#include "pypal/diag/diagnostic.hpp"

namespace pypal::diag {

namespace {

struct TopLevelBinding {
  int line = 0;
  bool is_function = false;
};

}  // namespace

std::vector<Diagnostic> lint_program(const lang::Program& program, const TemplateTable& table) {
  std::vector<Diagnostic> findings;
  const auto functions = detail::function_names(program);

  auto bare_reference = [&](const lang::Expr& e, int line) {
    const auto* n = std::get_if<lang::Name>(&e.node);
    if (!n || !functions.count(n->id)) return;
    TemplateSlots slots;
    slots.line = line;
    slots.subject = n->id;
    findings.push_back(table.instantiate("bare-function-reference", slots,
                                         "'" + n->id + "' refers to a function but never calls it"));
  };
  lang::for_each_statement(program.statements, [&](const lang::Stmt& s) {
    if (const auto* x = std::get_if<lang::ExprStmt>(&s.node)) bare_reference(*x->expr, s.line);
    if (const auto* a = std::get_if<lang::Assignment>(&s.node)) bare_reference(*a->value, s.line);
  });

  std::map<std::string, TopLevelBinding> first_binding;
  for (const auto& s : program.statements) {
    if (const auto* a = std::get_if<lang::Assignment>(&s.node)) {
      first_binding.emplace(a->target, TopLevelBinding{s.line, false});
    } else if (const auto* d = std::get_if<std::shared_ptr<const lang::FunctionDef>>(&s.node)) {
      first_binding.emplace((*d)->name, TopLevelBinding{s.line, true});
    }
  }
  const auto& builtins = detail::builtin_names();
  std::set<std::string> reported;
  for (const auto& s : program.statements) {
    auto check = [&](const std::string& name) {
      auto it = first_binding.find(name);
      if (it == first_binding.end() || it->second.line <= s.line || reported.count(name)) return;
      if (std::find(builtins.begin(), builtins.end(), name) != builtins.end()) return;
      reported.insert(name);
      TemplateSlots slots;
      slots.line = s.line;
      slots.subject = name;
      const bool fn = it->second.is_function;
      findings.push_back(table.instantiate(
          fn ? "call-before-definition" : "use-before-assignment", slots,
          "'" + name + "' is used on line " + std::to_string(s.line) + " but first " +
              (fn ? "defined" : "assigned") + " on line " + std::to_string(it->second.line)));
    };
    if (const auto* a = std::get_if<lang::Assignment>(&s.node)) {
      detail::for_each_read(*a->value, check);
    } else if (const auto* x = std::get_if<lang::ExprStmt>(&s.node)) {
      detail::for_each_read(*x->expr, check);
    } else if (const auto* p = std::get_if<lang::Print>(&s.node)) {
      for (const auto& arg : p->args) detail::for_each_read(*arg, check);
    }
  }

  std::stable_sort(findings.begin(), findings.end(),
                   [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
  return findings;
}

}  // namespace pypal::diag
