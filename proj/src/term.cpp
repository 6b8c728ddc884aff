#include "hors/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "hors/error.hpp"

namespace hors {

struct Term::Node {
  TermKind kind = TermKind::kBottom;
  std::string name;
  std::size_t index = 0;
  std::vector<Term> children;
};

namespace {

const std::shared_ptr<const Term::Node>& shared_bottom() {
  static const auto node = std::make_shared<const Term::Node>();
  return node;
}

struct PairHash {
  std::size_t operator()(const std::pair<const void*, const void*>& p) const {
    auto h1 = std::hash<const void*>{}(p.first);
    auto h2 = std::hash<const void*>{}(p.second);
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
  }
};

}  // namespace

bool is_reserved_name(const std::string& name) {
  return name == "@" || name == "\\" || name == "_|_";
}

bool is_identifier(const std::string& name) {
  if (name.empty() || is_reserved_name(name)) return false;
  auto head = static_cast<unsigned char>(name[0]);
  if (!std::isalpha(head) && head != '_') return false;
  if (name.size() >= 2 && name[0] == '_' && name[1] == '|') return false;
  return std::all_of(name.begin() + 1, name.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '\'';
  });
}

void Signature::add(const std::string& name, std::size_t arity) {
  if (!is_identifier(name)) {
    throw InvariantError("invalid symbol name '" + name + "'");
  }
  if (!symbols_.emplace(name, arity).second) {
    throw InvariantError("duplicate symbol '" + name + "'");
  }
}

std::optional<std::size_t> Signature::arity(const std::string& name) const {
  auto it = symbols_.find(name);
  if (it == symbols_.end()) return std::nullopt;
  return it->second;
}

Context::Context(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (!is_identifier(n)) throw InvariantError("invalid variable name '" + n + "'");
    if (!seen.insert(n).second) throw InvariantError("duplicate context variable '" + n + "'");
  }
}

bool Context::contains(const std::string& name) const {
  return position(name).has_value();
}

std::optional<std::size_t> Context::position(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

Context Context::extended(const std::vector<std::string>& more) const {
  auto all = names_;
  all.insert(all.end(), more.begin(), more.end());
  return Context(std::move(all));
}

Term::Term() : node_(shared_bottom()) {}

Term Term::free_var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::kFreeVar;
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::bound_var(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::kBoundVar;
  n->index = index;
  return Term(std::move(n));
}

Term Term::app(Term fun, Term arg) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::kApp;
  n->children = {std::move(fun), std::move(arg)};
  return Term(std::move(n));
}

Term Term::abs(Term body, std::string hint) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::kAbs;
  n->name = std::move(hint);
  n->children = {std::move(body)};
  return Term(std::move(n));
}

Term Term::op(std::string symbol, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::kOp;
  n->name = std::move(symbol);
  n->children = std::move(args);
  return Term(std::move(n));
}

Term Term::bottom() { return Term(); }

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const std::string& Term::hint() const { return node_->name; }
std::size_t Term::index() const { return node_->index; }
const std::vector<Term>& Term::children() const { return node_->children; }

bool alpha_equal(const Term& t, const Term& u) {
  std::unordered_set<std::pair<const void*, const void*>, PairHash> visited;
  std::vector<std::pair<Term, Term>> stack{{t, u}};
  while (!stack.empty()) {
    auto [a, b] = std::move(stack.back());
    stack.pop_back();
    if (a.identity() == b.identity()) continue;
    if (!visited.emplace(a.identity(), b.identity()).second) continue;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case TermKind::kFreeVar:
      case TermKind::kOp:
        if (a.name() != b.name()) return false;
        break;
      case TermKind::kBoundVar:
        if (a.index() != b.index()) return false;
        break;
      default:
        break;
    }
    if (a.children().size() != b.children().size()) return false;
    for (std::size_t i = 0; i < a.children().size(); ++i) {
      stack.emplace_back(a.children()[i], b.children()[i]);
    }
  }
  return true;
}

bool alpha_eq_finite(const Term& t, const Context& t_ctx, const Term& u,
                     const Context& u_ctx) {
  if (!(t_ctx == u_ctx)) throw InvariantError("alpha_eq_finite: contexts differ");
  return alpha_equal(t, u);
}

void check_term(const Term& t, const Signature& sig, const Context& ctx,
                std::size_t outer_binders) {
  std::function<void(const Term&, std::size_t)> go = [&](const Term& s,
                                                          std::size_t depth) {
    switch (s.kind()) {
      case TermKind::kFreeVar:
        if (!ctx.contains(s.name())) {
          throw InvariantError("free variable '" + s.name() + "' not in context");
        }
        return;
      case TermKind::kBoundVar:
        if (s.index() >= depth) {
          throw InvariantError("bound index " + std::to_string(s.index()) +
                               " under " + std::to_string(depth) + " binders");
        }
        return;
      case TermKind::kBottom:
        return;
      case TermKind::kApp:
        go(s.fun(), depth);
        go(s.arg(), depth);
        return;
      case TermKind::kAbs:
        go(s.body(), depth + 1);
        return;
      case TermKind::kOp: {
        auto arity = sig.arity(s.name());
        if (!arity) throw InvariantError("unknown symbol '" + s.name() + "'");
        if (*arity != s.children().size()) {
          throw InvariantError("symbol '" + s.name() + "' expects " +
                               std::to_string(*arity) + " arguments, got " +
                               std::to_string(s.children().size()));
        }
        for (const auto& c : s.children()) go(c, depth);
        return;
      }
    }
  };
  go(t, outer_binders);
}

namespace {

// Rebuilds `t` bottom-up, replacing free variables via `leaf`. Shared
// subterms are rebuilt once.
template <typename Leaf>
Term map_free_vars(const Term& t, Leaf&& leaf) {
  std::unordered_map<const void*, Term> memo;
  std::function<Term(const Term&)> go = [&](const Term& s) -> Term {
    if (s.children().empty() && !s.is(TermKind::kFreeVar)) return s;
    auto it = memo.find(s.identity());
    if (it != memo.end()) return it->second;
    Term out;
    switch (s.kind()) {
      case TermKind::kFreeVar:
        out = leaf(s.name());
        break;
      case TermKind::kApp:
        out = Term::app(go(s.fun()), go(s.arg()));
        break;
      case TermKind::kAbs:
        out = Term::abs(go(s.body()), s.hint());
        break;
      case TermKind::kOp: {
        std::vector<Term> args;
        args.reserve(s.children().size());
        for (const auto& c : s.children()) args.push_back(go(c));
        out = Term::op(s.name(), std::move(args));
        break;
      }
      default:
        out = s;
    }
    memo.emplace(s.identity(), out);
    return out;
  };
  return go(t);
}

}  // namespace

Term rename(const Term& t, const Context& from, const Renaming& gamma,
            const Context& to) {
  for (const auto& x : from.names()) {
    auto it = gamma.find(x);
    if (it == gamma.end()) throw InvariantError("renaming not total: missing '" + x + "'");
    if (!to.contains(it->second)) {
      throw InvariantError("renaming target '" + it->second + "' not in codomain context");
    }
  }
  return map_free_vars(t, [&](const std::string& x) {
    auto it = gamma.find(x);
    if (it == gamma.end() || !from.contains(x)) {
      throw InvariantError("free variable '" + x + "' outside renaming domain");
    }
    return Term::free_var(it->second);
  });
}

Term substitute(const Term& t, const Context& from, const Substitution& sigma) {
  for (const auto& x : from.names()) {
    if (!sigma.count(x)) throw InvariantError("substitution not total: missing '" + x + "'");
  }
  return map_free_vars(t, [&](const std::string& x) -> Term {
    auto it = sigma.find(x);
    if (it == sigma.end() || !from.contains(x)) {
      throw InvariantError("free variable '" + x + "' outside substitution domain");
    }
    return it->second;
  });
}

Term cut(const Term& t, std::size_t k) {
  if (k == 0) return Term::bottom();
  switch (t.kind()) {
    case TermKind::kApp:
      return Term::app(cut(t.fun(), k - 1), cut(t.arg(), k - 1));
    case TermKind::kAbs:
      return Term::abs(cut(t.body(), k - 1), t.hint());
    case TermKind::kOp: {
      std::vector<Term> args;
      for (const auto& c : t.children()) args.push_back(cut(c, k - 1));
      return Term::op(t.name(), std::move(args));
    }
    default:
      return t;
  }
}

std::size_t depth(const Term& t) {
  std::size_t d = 0;
  for (const auto& c : t.children()) d = std::max(d, depth(c) + 1);
  return d;
}

std::size_t size(const Term& t) {
  std::size_t n = 1;
  for (const auto& c : t.children()) n += size(c);
  return n;
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  std::unordered_set<const void*> seen;
  std::vector<Term> stack{t};
  while (!stack.empty()) {
    Term s = stack.back();
    stack.pop_back();
    if (!seen.insert(s.identity()).second) continue;
    if (s.is(TermKind::kFreeVar)) out.insert(s.name());
    for (const auto& c : s.children()) stack.push_back(c);
  }
  return out;
}

std::size_t open_binders(const Term& t) {
  switch (t.kind()) {
    case TermKind::kBoundVar:
      return t.index() + 1;
    case TermKind::kAbs: {
      auto inner = open_binders(t.body());
      return inner == 0 ? 0 : inner - 1;
    }
    default: {
      std::size_t n = 0;
      for (const auto& c : t.children()) n = std::max(n, open_binders(c));
      return n;
    }
  }
}

}  // namespace hors
