#include <algorithm>
#include <optional>

#include "names.hpp"
#include "pypal/diag/diagnostic.hpp"
#include "pypal/lang/lexer.hpp"

namespace pypal::diag {

namespace detail {

std::vector<std::string> binding_order(const lang::Program& program) {
  std::vector<std::string> out;
  auto add = [&](const std::string& n) {
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  lang::for_each_statement(program.statements, [&](const lang::Stmt& s) {
    if (const auto* a = std::get_if<lang::Assignment>(&s.node)) add(a->target);
    if (const auto* d = std::get_if<std::shared_ptr<const lang::FunctionDef>>(&s.node)) {
      add((*d)->name);
      for (const auto& p : (*d)->params) add(p);
    }
  });
  return out;
}

std::set<std::string> function_names(const lang::Program& program) {
  std::set<std::string> out;
  lang::for_each_statement(program.statements, [&](const lang::Stmt& s) {
    if (const auto* d = std::get_if<std::shared_ptr<const lang::FunctionDef>>(&s.node)) {
      out.insert((*d)->name);
    }
  });
  return out;
}

void for_each_read(const lang::Expr& e, const std::function<void(const std::string&)>& f) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, lang::Name>) {
          f(node.id);
        } else if constexpr (std::is_same_v<T, lang::FString>) {
          for (const auto& p : node.parts) {
            if (p.is_slot) f(p.text);
          }
        } else if constexpr (std::is_same_v<T, lang::BinaryOp> || std::is_same_v<T, lang::Compare>) {
          for_each_read(*node.lhs, f);
          for_each_read(*node.rhs, f);
        } else if constexpr (std::is_same_v<T, lang::UnaryOp>) {
          for_each_read(*node.operand, f);
        } else if constexpr (std::is_same_v<T, lang::Call>) {
          f(node.callee);
          for (const auto& a : node.args) for_each_read(*a, f);
        }
      },
      e.node);
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> kNames = {"print", "input", "len",   "abs",
                                                  "round", "max",   "min",   "int",
                                                  "float", "str",   "bool",  "type"};
  return kNames;
}

}  // namespace detail

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

// Typo suggestions need enough letters to be meaningful.
constexpr std::size_t kMinTypoLength = 3;

std::string_view source_line(std::string_view source, int line) {
  std::size_t start = 0;
  for (int i = 1; i < line; ++i) {
    const auto nl = source.find('\n', start);
    if (nl == std::string_view::npos) return {};
    start = nl + 1;
  }
  auto end = source.find('\n', start);
  if (end == std::string_view::npos) end = source.size();
  auto text = source.substr(start, end - start);
  if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
  return text;
}

// The lexeme immediately before `column` on the line, found by re-lexing the
// prefix.
std::string lexeme_before(std::string_view line_text, int column) {
  std::string_view prefix = line_text.substr(0, std::min<std::size_t>(line_text.size(), column - 1));
  const auto first = prefix.find_first_not_of(" \t\f");
  if (first == std::string_view::npos) return {};
  auto toks = lang::tokenize(prefix.substr(first));
  if (!toks.ok()) return {};
  std::string last;
  for (const auto& t : toks.value()) {
    if (t.kind != lang::TokenKind::newline && t.kind != lang::TokenKind::eof) last = t.lexeme;
  }
  return last;
}

std::optional<std::string> typo_candidate(const std::string& subject,
                                          const std::vector<std::string>& bindings) {
  if (subject.size() < kMinTypoLength) return std::nullopt;
  for (const auto* pool : {&bindings, &detail::builtin_names()}) {
    for (const auto& name : *pool) {
      if (name != subject && levenshtein(subject, name) == 1) return name;
    }
  }
  return std::nullopt;
}

bool looks_like_unquoted_string(const std::string& subject, const lang::Program& program,
                                const std::vector<std::string>& bindings) {
  if (std::find(bindings.begin(), bindings.end(), subject) != bindings.end()) return false;
  bool adjacent = false;
  lang::for_each_statement(program.statements, [&](const lang::Stmt& s) {
    const auto* a = std::get_if<lang::Assignment>(&s.node);
    if (!a || a->target.size() < 4 || !a->target.ends_with("_var")) return;
    const auto* n = std::get_if<lang::Name>(&a->value->node);
    if (n && n->id == subject) adjacent = true;
  });
  return adjacent;
}

}  // namespace

Diagnostic classify_parse_error(const lang::ParseError& err, std::string_view source,
                                const TemplateTable& table) {
  TemplateSlots slots;
  slots.line = err.line;
  slots.detail = err.detail;
  std::string raw = lang::raw_message(err);
  switch (err.kind) {
    case lang::ParseErrorKind::missing_colon:
      return table.instantiate("missing-colon", slots, std::move(raw));
    case lang::ParseErrorKind::unterminated_string:
      return table.instantiate("eol-string", slots, std::move(raw));
    case lang::ParseErrorKind::missing_operator:
      slots.subject = lexeme_before(source_line(source, err.line), err.column);
      slots.candidate = err.offending_lexeme;
      return table.instantiate("missing-operator", slots, std::move(raw));
    case lang::ParseErrorKind::invalid_assign_target:
      return table.instantiate("invalid-assign-target", slots, std::move(raw));
    case lang::ParseErrorKind::unmatched_paren:
      return table.instantiate("unmatched-paren", slots, std::move(raw));
    case lang::ParseErrorKind::bad_indent:
      return table.instantiate("bad-indent", slots, std::move(raw));
    case lang::ParseErrorKind::generic:
      break;
  }
  return make_fallback(std::move(raw), err.line);
}

Diagnostic classify_runtime_error(const exec::RuntimeError& err, const lang::Program& program,
                                  const TemplateTable& table) {
  TemplateSlots slots;
  slots.line = err.line;
  slots.detail = err.detail;
  slots.subject = err.name;
  std::string raw = exec::raw_message(err);
  switch (err.kind) {
    case exec::RuntimeErrorKind::undefined_name: {
      if (!err.name) break;
      const std::string& name = *err.name;
      if (detail::function_names(program).count(name)) {
        return table.instantiate("call-before-definition", slots, std::move(raw));
      }
      const auto bindings = detail::binding_order(program);
      if (looks_like_unquoted_string(name, program, bindings)) {
        return table.instantiate("unquoted-string", slots, std::move(raw));
      }
      if (auto candidate = typo_candidate(name, bindings)) {
        slots.candidate = *candidate;
        return table.instantiate("typo-in-name", slots, std::move(raw));
      }
      return table.instantiate("undefined-variable", slots, std::move(raw));
    }
    case exec::RuntimeErrorKind::use_before_assignment:
      return table.instantiate("use-before-assignment", slots, std::move(raw));
    case exec::RuntimeErrorKind::type_mismatch:
      return table.instantiate("type-mismatch", slots, std::move(raw));
    case exec::RuntimeErrorKind::division_by_zero:
      return table.instantiate("division-by-zero", slots, std::move(raw));
    case exec::RuntimeErrorKind::argument_count:
      return table.instantiate("argument-count", slots, std::move(raw));
    case exec::RuntimeErrorKind::not_callable:
      return table.instantiate("not-callable", slots, std::move(raw));
    case exec::RuntimeErrorKind::step_limit:
    case exec::RuntimeErrorKind::generic:
      break;
  }
  return make_fallback(std::move(raw), err.line);
}

}  // namespace pypal::diag
