#include "hors/scheme.hpp"

#include <functional>
#include <map>
#include <set>

#include "hors/error.hpp"

namespace hors {

Context RecursionScheme::extended_context() const {
  return Context(nonterminal_names()).extended(ctx.names());
}

std::vector<std::string> RecursionScheme::nonterminal_names() const {
  std::vector<std::string> names;
  names.reserve(rules.size());
  for (const auto& r : rules) names.push_back(r.name);
  return names;
}

const Nonterminal* RecursionScheme::find(const std::string& name) const {
  for (const auto& r : rules) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

namespace {

// Visits every nonterminal occurrence with the number of binders above it
// (the rule's parameters included).
void for_each_use(const Term& t, std::size_t depth, const RecursionScheme& s,
                  const std::function<void(const Nonterminal&, std::size_t)>& visit) {
  switch (t.kind()) {
    case TermKind::kFreeVar:
      if (const auto* nt = s.find(t.name())) visit(*nt, depth);
      return;
    case TermKind::kAbs:
      for_each_use(t.body(), depth + 1, s, visit);
      return;
    default:
      for (const auto& c : t.children()) for_each_use(c, depth, s, visit);
  }
}

}  // namespace

void validate_scheme(const RecursionScheme& s) {
  std::set<std::string> names;
  for (const auto& r : s.rules) {
    if (!is_identifier(r.name)) throw InvariantError("invalid nonterminal name '" + r.name + "'");
    if (!names.insert(r.name).second) throw InvariantError("duplicate nonterminal '" + r.name + "'");
    if (s.ctx.contains(r.name) || s.sig.contains(r.name)) {
      throw InvariantError("nonterminal '" + r.name + "' clashes with a context variable or symbol");
    }
    std::set<std::string> params;
    for (const auto& p : r.params) {
      if (!is_identifier(p)) throw InvariantError("invalid parameter name '" + p + "'");
      if (!params.insert(p).second) throw InvariantError("duplicate parameter '" + p + "' of '" + r.name + "'");
      if (s.ctx.contains(p)) {
        throw InvariantError("parameter '" + p + "' of '" + r.name + "' clashes with a context variable");
      }
    }
  }
  for (const auto& [sym, arity] : s.sig.symbols()) {
    if (s.ctx.contains(sym)) throw InvariantError("symbol '" + sym + "' clashes with a context variable");
  }
  Context ext = s.extended_context();
  for (const auto& r : s.rules) {
    try {
      check_term(r.body, s.sig, ext, r.params.size());
    } catch (const InvariantError& e) {
      throw InvariantError("rule for '" + r.name + "': " + e.what());
    }
    for_each_use(r.body, r.params.size(), s, [&](const Nonterminal& nt, std::size_t depth) {
      if (nt.params.size() > depth) {
        throw InvariantError("rule for '" + r.name + "' uses '" + nt.name + "' under " +
                             std::to_string(depth) + " binders but it has " +
                             std::to_string(nt.params.size()) + " parameters");
      }
    });
  }
}

std::optional<std::string> check_guarded(const RecursionScheme& s) {
  for (const auto& r : s.rules) {
    if (r.body.is(TermKind::kFreeVar) && s.find(r.body.name()) != nullptr) return r.name;
  }
  return std::nullopt;
}

RecursionScheme inline_aliases(const RecursionScheme& s) {
  RecursionScheme out = s;
  for (auto& r : out.rules) {
    if (!r.body.is(TermKind::kFreeVar)) continue;
    if (const auto* target = s.find(r.body.name())) r.body = target->body;
  }
  return out;
}

namespace {

bool is_reference(const Term& t, const RecursionScheme& s) {
  return t.is(TermKind::kFreeVar) && s.find(t.name()) != nullptr;
}

}  // namespace

bool is_flat_rule(const Nonterminal& rule, const RecursionScheme& s) {
  const Term& b = rule.body;
  switch (b.kind()) {
    case TermKind::kFreeVar:
      return s.ctx.contains(b.name());
    case TermKind::kBoundVar:
    case TermKind::kBottom:
      return true;
    default:
      for (const auto& c : b.children()) {
        if (!is_reference(c, s)) return false;
      }
      return true;
  }
}

namespace {

class Flattener {
 public:
  explicit Flattener(const RecursionScheme& s) : source_(s) {
    for (const auto& n : s.ctx.names()) taken_.insert(n);
    for (const auto& [n, a] : s.sig.symbols()) taken_.insert(n);
    for (const auto& r : s.rules) taken_.insert(r.name);
  }

  FlatScheme run() {
    for (const auto& r : source_.rules) {
      std::vector<std::string> stack = r.params;
      rules_.push_back({r.name, r.params, flat_node(r.body, stack)});
    }
    FlatScheme out;
    out.scheme.sig = source_.sig;
    out.scheme.ctx = source_.ctx;
    out.scheme.rules = rules_;
    for (auto& f : fresh_rules_) out.scheme.rules.push_back(std::move(f));
    out.introduced = introduced_;
    return out;
  }

 private:
  // `t` with every proper subterm replaced by a nonterminal reference.
  Term flat_node(const Term& t, std::vector<std::string>& stack) {
    switch (t.kind()) {
      case TermKind::kApp: {
        Term f = child(t.fun(), stack);
        Term a = child(t.arg(), stack);
        return Term::app(std::move(f), std::move(a));
      }
      case TermKind::kAbs: {
        stack.push_back(t.hint());
        Term b = child(t.body(), stack);
        stack.pop_back();
        return Term::abs(std::move(b), t.hint());
      }
      case TermKind::kOp: {
        std::vector<Term> args;
        for (const auto& c : t.children()) args.push_back(child(c, stack));
        return Term::op(t.name(), std::move(args));
      }
      default:
        return t;
    }
  }

  Term child(const Term& t, std::vector<std::string>& stack) {
    if (is_reference(t, source_)) return t;
    Term body = flat_node(t, stack);
    std::string name = fresh_name();
    fresh_rules_.push_back({name, param_names(stack), std::move(body)});
    introduced_.push_back(name);
    return Term::free_var(name);
  }

  // Binder hints made into distinct parameter names.
  std::vector<std::string> param_names(const std::vector<std::string>& hints) const {
    std::vector<std::string> out;
    std::set<std::string> used;
    auto usable = [&](const std::string& n) {
      return is_identifier(n) && !used.count(n) && !source_.ctx.contains(n);
    };
    for (const auto& h : hints) {
      std::string name = h;
      for (std::size_t i = 0; !usable(name); ++i) name = "x" + std::to_string(i);
      used.insert(name);
      out.push_back(name);
    }
    return out;
  }

  std::string fresh_name() {
    while (true) {
      std::string candidate = "_t" + std::to_string(counter_++);
      if (taken_.insert(candidate).second) return candidate;
    }
  }

  const RecursionScheme& source_;
  std::set<std::string> taken_;
  std::vector<Nonterminal> rules_;
  std::vector<Nonterminal> fresh_rules_;
  std::vector<std::string> introduced_;
  std::size_t counter_ = 0;
};

}  // namespace

FlatScheme flatten(const RecursionScheme& s) {
  if (auto w = check_guarded(s)) throw UnguardedError(*w);
  return Flattener(s).run();
}

FlatSystem to_flat_system(const FlatScheme& flat) {
  const RecursionScheme& s = flat.scheme;
  FlatSystem sys;
  sys.context = s.ctx;
  for (const auto& r : s.rules) {
    if (!is_flat_rule(r, s)) throw InvariantError("rule for '" + r.name + "' is not flat");
    FlatEquation eq;
    eq.var = r.name;
    eq.binders = r.params.size();
    eq.binder_hints = r.params;
    const Term& b = r.body;
    switch (b.kind()) {
      case TermKind::kApp:
        eq.rule = AppOf{b.fun().name(), b.arg().name()};
        break;
      case TermKind::kAbs:
        eq.rule = AbsOf{b.body().name(), b.hint()};
        break;
      case TermKind::kOp: {
        OpOf op{b.name(), {}};
        for (const auto& c : b.children()) op.args.push_back(c.name());
        eq.rule = std::move(op);
        break;
      }
      case TermKind::kBoundVar:
        eq.rule = BoundOf{b.index()};
        break;
      case TermKind::kFreeVar:
      case TermKind::kBottom:
        eq.rule = Const{graph_from_term(b, s.ctx)};
        break;
    }
    sys.equations.push_back(std::move(eq));
  }
  return sys;
}

GraphSolution solve(const RecursionScheme& s) {
  validate_scheme(s);
  if (auto w = check_guarded(s)) throw UnguardedError(*w);
  FlatScheme flat = flatten(s);
  GraphSolution all;
  try {
    all = solve_flat_system(to_flat_system(flat));
  } catch (const InvariantError& e) {
    throw InvariantError(std::string("cannot solve scheme: ") + e.what());
  }
  GraphSolution out;
  for (const auto& r : s.rules) out.emplace(r.name, std::move(all.at(r.name)));
  return out;
}

bool verify_solution(const RecursionScheme& s, const GraphSolution& candidate) {
  for (const auto& r : s.rules) {
    auto it = candidate.find(r.name);
    if (it == candidate.end()) throw InvariantError("verify_solution: no candidate for '" + r.name + "'");
    if (!(it->second.context == s.ctx)) {
      throw InvariantError("verify_solution: candidate for '" + r.name + "' has a different context");
    }
    require_valid(it->second, "verify_solution");
  }
  Context ext = s.extended_context();
  for (const auto& r : s.rules) {
    Term closed = r.body;
    for (std::size_t i = r.params.size(); i-- > 0;) closed = Term::abs(closed, r.params[i]);
    TermGraph rhs = graph_from_term(closed, ext);

    std::vector<GraphNode> nodes;
    std::map<std::string, NodeId> splice;
    for (const auto& q : s.rules) {
      const TermGraph& cand = candidate.at(q.name);
      auto inner = graph_detail::strip_binders(cand, q.params.size());
      if (!inner) return false;
      splice[q.name] = graph_detail::copy_into(nodes, cand, *inner);
    }
    NodeId root = graph_detail::copy_into(nodes, rhs, rhs.root, splice);
    TermGraph lhs = reroot(TermGraph{s.ctx, std::move(nodes), root}, root);
    if (!validate_graph(lhs).ok()) return false;
    if (!bisim_eq(lhs, candidate.at(r.name))) return false;
  }
  return true;
}

RecursionScheme rename_scheme(const RecursionScheme& s, const Renaming& gamma,
                              const Context& target) {
  RecursionScheme out;
  out.sig = s.sig;
  out.ctx = target;
  Renaming extended = gamma;
  for (const auto& r : s.rules) extended[r.name] = r.name;
  Context from = s.extended_context();
  Context to = Context(s.nonterminal_names()).extended(target.names());
  for (const auto& r : s.rules) {
    out.rules.push_back({r.name, r.params, rename(r.body, from, extended, to)});
  }
  validate_scheme(out);
  return out;
}

}  // namespace hors
