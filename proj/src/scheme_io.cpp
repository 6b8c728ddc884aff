#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "hors/error.hpp"
#include "hors/scheme.hpp"
#include "hors/syntax.hpp"
#include "scheme_internal.hpp"
#include "syntax_internal.hpp"

namespace hors {

using syntax::Lexer;
using syntax::Tok;
using syntax::Token;

namespace detail {

bool at_rule_start(const Lexer& lex) {
  return lex.at(Tok::kIdent) &&
         (lex.peek(1).kind == Tok::kEquals || lex.peek(1).kind == Tok::kLBracket);
}

std::vector<RawRule> parse_raw_rules(Lexer& lex, Tok terminator) {
  std::vector<RawRule> rules;
  while (!lex.at(terminator)) {
    if (!at_rule_start(lex)) {
      const auto& t = lex.peek();
      std::string found = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
      throw ParseError(t.pos, "expected a rule 'name = term', found " + found);
    }
    RawRule rule;
    rule.name = lex.next();
    if (lex.accept(Tok::kLBracket)) {
      std::set<std::string> seen;
      do {
        Token p = lex.expect(Tok::kIdent, "parameter name");
        if (!seen.insert(p.text).second) throw ParseError(p.pos, "duplicate parameter '" + p.text + "'");
        rule.params.push_back(p.text);
      } while (lex.accept(Tok::kComma));
      lex.expect(Tok::kRBracket, "']'");
    }
    lex.expect(Tok::kEquals, "'='");
    rule.body = syntax::parse_raw_term(lex);
    lex.accept(Tok::kSemicolon);
    rules.push_back(std::move(rule));
  }
  return rules;
}

RecursionScheme resolve_rules(const Signature& sig, const Context& ctx,
                              const std::vector<RawRule>& raw,
                              const std::vector<Token>* declared) {
  std::map<std::string, std::size_t> param_count;
  std::map<std::string, const RawRule*> by_name;
  for (const auto& r : raw) {
    if (!is_identifier(r.name.text)) throw ParseError(r.name.pos, "invalid nonterminal name '" + r.name.text + "'");
    if (ctx.contains(r.name.text)) {
      throw ParseError(r.name.pos, "nonterminal '" + r.name.text + "' clashes with a context variable");
    }
    if (sig.contains(r.name.text)) {
      throw ParseError(r.name.pos, "nonterminal '" + r.name.text + "' clashes with a signature symbol");
    }
    if (!by_name.emplace(r.name.text, &r).second) {
      throw ParseError(r.name.pos, "duplicate rule for nonterminal '" + r.name.text + "'");
    }
    param_count[r.name.text] = r.params.size();
  }

  std::vector<std::string> order;
  if (declared != nullptr) {
    std::set<std::string> names;
    for (const auto& d : *declared) {
      if (!names.insert(d.text).second) throw ParseError(d.pos, "nonterminal '" + d.text + "' declared twice");
      if (!by_name.count(d.text)) throw ParseError(d.pos, "nonterminal '" + d.text + "' has no rule");
      order.push_back(d.text);
    }
    for (const auto& r : raw) {
      if (!names.count(r.name.text)) {
        throw ParseError(r.name.pos, "rule for undeclared nonterminal '" + r.name.text + "'");
      }
    }
  } else {
    for (const auto& r : raw) order.push_back(r.name.text);
  }

  RecursionScheme s;
  s.sig = sig;
  s.ctx = ctx;
  Context ext = Context(order).extended(s.ctx.names());
  for (const auto& name : order) {
    const RawRule& r = *by_name.at(name);
    syntax::Scope scope;
    scope.sig = &s.sig;
    scope.ctx = &ext;
    scope.outer_binders = r.params;
    scope.required_binders = [&](const std::string& n) {
      auto it = param_count.find(n);
      return it == param_count.end() ? std::size_t{0} : it->second;
    };
    s.rules.push_back({name, r.params, syntax::resolve(r.body, scope)});
  }
  return s;
}

}  // namespace detail

namespace {

void skip_separators(Lexer& lex) {
  while (lex.accept(Tok::kSemicolon) || lex.accept(Tok::kComma)) {
  }
}

}  // namespace

RecursionScheme parse_scheme(std::string_view text) {
  Lexer lex(text);
  Signature sig;
  std::vector<Token> ctx_names;
  std::optional<std::vector<Token>> declared;
  bool seen_sig = false;
  bool seen_ctx = false;
  while (lex.at(Tok::kIdent) && lex.peek(1).kind == Tok::kLBrace) {
    Token head = lex.next();
    lex.next();
    if (head.text == "signature") {
      if (seen_sig) throw ParseError(head.pos, "duplicate signature block");
      seen_sig = true;
      skip_separators(lex);
      while (!lex.accept(Tok::kRBrace)) {
        Token name = lex.expect(Tok::kIdent, "symbol name");
        lex.expect(Tok::kSlash, "'/' before arity");
        Token arity = lex.expect(Tok::kNumber, "arity");
        try {
          sig.add(name.text, std::stoul(arity.text));
        } catch (const InvariantError& e) {
          throw ParseError(name.pos, e.what());
        }
        skip_separators(lex);
      }
    } else if (head.text == "context") {
      if (seen_ctx) throw ParseError(head.pos, "duplicate context block");
      seen_ctx = true;
      skip_separators(lex);
      while (!lex.accept(Tok::kRBrace)) {
        ctx_names.push_back(lex.expect(Tok::kIdent, "variable name"));
        skip_separators(lex);
      }
    } else if (head.text == "nonterminals") {
      if (declared) throw ParseError(head.pos, "duplicate nonterminals block");
      declared.emplace();
      skip_separators(lex);
      while (!lex.accept(Tok::kRBrace)) {
        declared->push_back(lex.expect(Tok::kIdent, "nonterminal name"));
        skip_separators(lex);
      }
    } else {
      throw ParseError(head.pos, "unknown block '" + head.text + "'");
    }
  }

  std::vector<std::string> names;
  std::set<std::string> seen;
  for (const auto& t : ctx_names) {
    if (!seen.insert(t.text).second) throw ParseError(t.pos, "duplicate context variable '" + t.text + "'");
    if (sig.contains(t.text)) throw ParseError(t.pos, "context variable '" + t.text + "' clashes with a symbol");
    names.push_back(t.text);
  }
  Context ctx(std::move(names));

  auto raw = detail::parse_raw_rules(lex, Tok::kEnd);
  if (raw.empty()) lex.fail("scheme has no rules");
  auto s = detail::resolve_rules(sig, ctx, raw, declared ? &*declared : nullptr);
  validate_scheme(s);
  return s;
}

std::string print_scheme(const RecursionScheme& s) {
  std::ostringstream os;
  if (!s.sig.empty()) {
    os << "signature {";
    bool first = true;
    for (const auto& [name, arity] : s.sig.symbols()) {
      os << (first ? " " : "; ") << name << '/' << arity;
      first = false;
    }
    os << " }\n";
  }
  if (!s.ctx.empty()) {
    os << "context {";
    for (std::size_t i = 0; i < s.ctx.size(); ++i) os << (i == 0 ? " " : "; ") << s.ctx.names()[i];
    os << " }\n";
  }
  Context ext = s.extended_context();
  for (const auto& rule : s.rules) {
    auto printed = print_term_in_scope(rule.body, ext, s.sig, rule.params);
    os << rule.name;
    if (!printed.binders.empty()) {
      os << '[';
      for (std::size_t i = 0; i < printed.binders.size(); ++i) os << (i == 0 ? "" : ", ") << printed.binders[i];
      os << ']';
    }
    os << " = " << printed.text << '\n';
  }
  return os.str();
}

namespace {

std::string node_prefix(const Signature& sig, const Context& ctx) {
  std::string prefix = "_n";
  auto clashes = [&](const std::string& p) {
    auto check = [&](const std::string& name) {
      if (name.size() <= p.size() || name.compare(0, p.size(), p) != 0) return false;
      return std::all_of(name.begin() + p.size(), name.end(),
                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    };
    for (const auto& n : ctx.names()) {
      if (check(n)) return true;
    }
    for (const auto& [n, a] : sig.symbols()) {
      if (check(n)) return true;
    }
    return false;
  };
  while (clashes(prefix)) prefix = "_" + prefix;
  return prefix;
}

// The innermost `need` binder hints along some path of minimal binder depth
// to each node, so parameters keep the names of the binders they stand for.
std::vector<std::vector<std::string>> scope_hints(const TermGraph& g, const std::vector<std::size_t>& need) {
  auto depth_of = min_binder_depths(g);
  std::vector<std::vector<std::string>> hints(g.nodes.size());
  std::vector<bool> done(g.nodes.size(), false);
  std::deque<NodeId> work{g.root};
  done[g.root] = true;
  while (!work.empty()) {
    NodeId v = work.front();
    work.pop_front();
    const GraphNode& n = g.nodes[v];
    for (NodeId c : n.children) {
      std::size_t depth = hints[v].size() + (n.kind == TermKind::kAbs ? 1 : 0);
      if (done[c] || depth != depth_of[c]) continue;
      hints[c] = hints[v];
      if (n.kind == TermKind::kAbs) hints[c].push_back(n.name);
      done[c] = true;
      work.push_back(c);
    }
  }
  for (NodeId v = 0; v < g.nodes.size(); ++v) hints[v].erase(hints[v].begin(), hints[v].end() - need[v]);
  return hints;
}

}  // namespace

std::string print_graph_rules(const TermGraph& g, const Signature& sig) {
  TermGraph r = reroot(g, g.root);
  auto need = required_binders(r);
  auto hints = scope_hints(r, need);
  std::string prefix = node_prefix(sig, r.context);
  std::vector<std::string> names;
  for (NodeId v = 0; v < r.nodes.size(); ++v) names.push_back(prefix + std::to_string(v));
  Context ext = r.context.extended(names);
  std::ostringstream os;
  for (NodeId v = 0; v < r.nodes.size(); ++v) {
    const GraphNode& n = r.nodes[v];
    auto ref = [&](std::size_t i) { return Term::free_var(names[n.children[i]]); };
    Term body;
    switch (n.kind) {
      case TermKind::kFreeVar: body = Term::free_var(n.name); break;
      case TermKind::kBoundVar: body = Term::bound_var(n.index); break;
      case TermKind::kBottom: body = Term::bottom(); break;
      case TermKind::kApp: body = Term::app(ref(0), ref(1)); break;
      case TermKind::kAbs: body = Term::abs(ref(0), n.name); break;
      case TermKind::kOp: {
        std::vector<Term> args;
        for (std::size_t i = 0; i < n.children.size(); ++i) args.push_back(ref(i));
        body = Term::op(n.name, std::move(args));
        break;
      }
    }
    auto printed = print_term_in_scope(body, ext, sig, hints[v]);
    os << "  " << names[v];
    if (!printed.binders.empty()) {
      os << '[';
      for (std::size_t i = 0; i < printed.binders.size(); ++i) os << (i == 0 ? "" : ", ") << printed.binders[i];
      os << ']';
    }
    os << " = " << printed.text << '\n';
  }
  return os.str();
}

std::string print_solution(const RecursionScheme& s, const GraphSolution& solution) {
  std::ostringstream os;
  for (const auto& rule : s.rules) {
    auto it = solution.find(rule.name);
    if (it == solution.end()) continue;
    os << "solution " << rule.name << " {\n" << print_graph_rules(it->second, s.sig) << "}\n";
  }
  return os.str();
}

GraphSolution parse_solution(std::string_view text, const RecursionScheme& s) {
  Lexer lex(text);
  GraphSolution out;
  while (!lex.at(Tok::kEnd)) {
    Token kw = lex.expect(Tok::kIdent, "'solution'");
    if (kw.text != "solution") throw ParseError(kw.pos, "expected 'solution', found '" + kw.text + "'");
    Token name = lex.expect(Tok::kIdent, "nonterminal name");
    if (s.find(name.text) == nullptr) {
      throw ParseError(name.pos, "solution for unknown nonterminal '" + name.text + "'");
    }
    if (out.count(name.text)) throw ParseError(name.pos, "duplicate solution for '" + name.text + "'");
    lex.expect(Tok::kLBrace, "'{'");
    auto raw = detail::parse_raw_rules(lex, Tok::kRBrace);
    lex.expect(Tok::kRBrace, "'}'");
    if (raw.empty()) throw ParseError(name.pos, "empty solution block for '" + name.text + "'");
    if (!raw.front().params.empty()) {
      throw ParseError(raw.front().name.pos, "the root rule of a solution block takes no parameters");
    }
    RecursionScheme block = detail::resolve_rules(s.sig, s.ctx, raw, nullptr);
    validate_scheme(block);
    if (auto w = check_guarded(block)) {
      throw ParseError(name.pos, "solution block for '" + name.text + "' is unguarded at '" + *w + "'");
    }
    auto solved = solve(block);
    out.emplace(name.text, solved.at(block.rules.front().name));
  }
  return out;
}

}  // namespace hors
