#include <algorithm>
#include <set>
#include <sstream>

#include "hors/error.hpp"
#include "hors/syntax.hpp"
#include "syntax_internal.hpp"

namespace hors {

Term parse_term(std::string_view text, const Signature& sig, const Context& ctx) {
  return parse_term_in_scope(text, sig, ctx, {});
}

Term parse_term_in_scope(std::string_view text, const Signature& sig,
                         const Context& ctx,
                         const std::vector<std::string>& outer_binders) {
  syntax::Lexer lex(text);
  syntax::RawTerm raw = syntax::parse_raw_term(lex);
  if (!lex.at(syntax::Tok::kEnd)) lex.fail("unexpected '" + lex.peek().text + "' after term");
  syntax::Scope scope;
  scope.sig = &sig;
  scope.ctx = &ctx;
  scope.outer_binders = outer_binders;
  return syntax::resolve(raw, scope);
}

namespace {

// Stack positions (0 = outermost) of enclosing binders referenced from inside
// the body of an abstraction, given `stack_size` binders above it.
void referenced_outer(const Term& t, std::size_t rel_depth, std::size_t stack_size,
                      std::set<std::size_t>& out) {
  switch (t.kind()) {
    case TermKind::kBoundVar:
      if (t.index() > rel_depth) {
        std::size_t distance = t.index() - rel_depth - 1;
        if (distance < stack_size) out.insert(stack_size - 1 - distance);
      }
      return;
    case TermKind::kAbs:
      referenced_outer(t.body(), rel_depth + 1, stack_size, out);
      return;
    default:
      for (const auto& c : t.children()) referenced_outer(c, rel_depth, stack_size, out);
  }
}

class Printer {
 public:
  Printer(const Context& ctx, const Signature& sig) {
    for (const auto& n : ctx.names()) avoid_.insert(n);
    for (const auto& [n, arity] : sig.symbols()) avoid_.insert(n);
  }

  std::string fresh(const std::set<std::string>& also_avoid) const {
    for (std::size_t i = 0;; ++i) {
      std::string candidate = "x" + std::to_string(i);
      if (!avoid_.count(candidate) && !also_avoid.count(candidate) &&
          std::find(stack_.begin(), stack_.end(), candidate) == stack_.end()) {
        return candidate;
      }
    }
  }

  void push_outer(const std::string& hint) {
    std::set<std::string> none;
    bool usable = is_identifier(hint) && !avoid_.count(hint) &&
                  std::find(stack_.begin(), stack_.end(), hint) == stack_.end();
    stack_.push_back(usable ? hint : fresh(none));
  }

  const std::vector<std::string>& stack() const { return stack_; }

  void term(const Term& t, std::ostream& os) {
    switch (t.kind()) {
      case TermKind::kAbs: {
        std::string name = binder_name(t);
        os << '\\' << name << ". ";
        stack_.push_back(name);
        term(t.body(), os);
        stack_.pop_back();
        return;
      }
      case TermKind::kApp:
        fun_position(t.fun(), os);
        os << " @ ";
        arg_position(t.arg(), os);
        return;
      default:
        atom(t, os);
    }
  }

 private:
  std::string binder_name(const Term& abs) const {
    const std::string& hint = abs.hint();
    if (is_identifier(hint) && !avoid_.count(hint)) {
      std::set<std::size_t> used;
      referenced_outer(abs.body(), 0, stack_.size(), used);
      bool clash = false;
      for (auto pos : used) clash = clash || stack_[pos] == hint;
      if (!clash) return hint;
    }
    return fresh({});
  }

  void fun_position(const Term& t, std::ostream& os) {
    if (t.is(TermKind::kAbs)) {
      os << '(';
      term(t, os);
      os << ')';
    } else {
      term(t, os);
    }
  }

  void arg_position(const Term& t, std::ostream& os) {
    if (t.is(TermKind::kAbs) || t.is(TermKind::kApp)) {
      os << '(';
      term(t, os);
      os << ')';
    } else {
      atom(t, os);
    }
  }

  void atom(const Term& t, std::ostream& os) {
    switch (t.kind()) {
      case TermKind::kFreeVar:
        os << t.name();
        return;
      case TermKind::kBoundVar:
        if (t.index() >= stack_.size()) {
          throw InvariantError("print_term: bound index " + std::to_string(t.index()) +
                               " escapes its binders");
        }
        os << stack_[stack_.size() - 1 - t.index()];
        return;
      case TermKind::kBottom:
        os << "_|_";
        return;
      case TermKind::kOp: {
        os << t.name();
        if (t.children().empty()) return;
        os << '(';
        for (std::size_t i = 0; i < t.children().size(); ++i) {
          if (i != 0) os << ", ";
          term(t.children()[i], os);
        }
        os << ')';
        return;
      }
      default:
        os << '(';
        term(t, os);
        os << ')';
    }
  }

  std::set<std::string> avoid_;
  std::vector<std::string> stack_;
};

}  // namespace

std::string print_term(const Term& t, const Context& ctx, const Signature& sig) {
  return print_term_in_scope(t, ctx, sig, {}).text;
}

ScopedText print_term_in_scope(const Term& t, const Context& ctx, const Signature& sig,
                               const std::vector<std::string>& outer_hints) {
  Printer p(ctx, sig);
  for (const auto& h : outer_hints) p.push_outer(h);
  ScopedText out;
  out.binders = p.stack();
  std::ostringstream os;
  p.term(t, os);
  out.text = os.str();
  return out;
}

}  // namespace hors
