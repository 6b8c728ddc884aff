#include "hors/semantics.hpp"

#include <functional>
#include <sstream>

#include "hors/error.hpp"

namespace hors {

std::size_t tuple_index(const std::vector<Element>& rho, std::size_t d_size) {
  std::size_t row = 0;
  for (Element e : rho) row = row * d_size + e;
  return row;
}

std::vector<Element> tuple_at(std::size_t index, std::size_t arity, std::size_t d_size) {
  std::vector<Element> rho(arity);
  for (std::size_t i = arity; i-- > 0;) {
    rho[i] = index % d_size;
    index /= d_size;
  }
  return rho;
}

Element ContextMap::at(const std::vector<Element>& rho, std::size_t d_size) const {
  if (rho.size() != ctx.size()) throw InvariantError("context map applied to a tuple of the wrong length");
  return table.at(tuple_index(rho, d_size));
}

std::size_t table_cells(const Model& m, std::size_t arity, std::size_t budget) {
  std::size_t cells = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    if (cells > budget / m.size()) {
      throw ModelError("tabulating D^" + std::to_string(arity) + " over a model of size " +
                       std::to_string(m.size()) + " exceeds the cell budget of " + std::to_string(budget));
    }
    cells *= m.size();
  }
  if (cells > budget) throw ModelError("table exceeds the cell budget of " + std::to_string(budget));
  return cells;
}

ContextMap constant_map(const Context& ctx, const Model& m, Element value, std::size_t budget) {
  return {ctx, std::vector<Element>(table_cells(m, ctx.size(), budget), value)};
}

ContextMap projection(const Context& ctx, const std::string& var, const Model& m, std::size_t budget) {
  auto pos = ctx.position(var);
  if (!pos) throw InvariantError("projection onto '" + var + "' which is not in the context");
  ContextMap out{ctx, std::vector<Element>(table_cells(m, ctx.size(), budget))};
  for (std::size_t row = 0; row < out.table.size(); ++row) out.table[row] = tuple_at(row, ctx.size(), m.size())[*pos];
  return out;
}

bool leq(const ContextMap& a, const ContextMap& b, const Model& m) {
  if (!(a.ctx == b.ctx) || a.table.size() != b.table.size()) {
    throw InvariantError("comparing context maps over different contexts");
  }
  for (std::size_t i = 0; i < a.table.size(); ++i) {
    if (!m.domain().leq(a.table[i], b.table[i])) return false;
  }
  return true;
}

bool is_monotone(const ContextMap& c, const Model& m) {
  // Monotone in the product order iff monotone in each coordinate separately,
  // which only needs comparable pairs differing in one position.
  const FinitePoset& d = m.domain();
  std::size_t n = c.ctx.size();
  for (std::size_t row = 0; row < c.table.size(); ++row) {
    auto rho = tuple_at(row, n, d.size());
    for (std::size_t i = 0; i < n; ++i) {
      Element orig = rho[i];
      for (Element v = 0; v < d.size(); ++v) {
        if (v == orig || !d.leq(orig, v)) continue;
        rho[i] = v;
        if (!d.leq(c.table[row], c.table[tuple_index(rho, d.size())])) return false;
      }
      rho[i] = orig;
    }
  }
  return true;
}

namespace {

using FreeLookup = std::function<Element(const std::string&, const std::vector<Element>&)>;

class Evaluator {
 public:
  Evaluator(const Model& m, bool bottom_ok, FreeLookup lookup)
      : m_(m), bottom_ok_(bottom_ok), lookup_(std::move(lookup)) {}

  Element eval(const Term& t, std::vector<Element>& stack) const {
    switch (t.kind()) {
      case TermKind::kFreeVar:
        return lookup_(t.name(), stack);
      case TermKind::kBoundVar:
        if (t.index() >= stack.size()) throw InvariantError("interpret: unbound index " + std::to_string(t.index()));
        return stack[stack.size() - 1 - t.index()];
      case TermKind::kApp: {
        Element f = eval(t.fun(), stack);
        Element a = eval(t.arg(), stack);
        return m_.app(f, a);
      }
      case TermKind::kAbs:
        return m_.fold([&](Element x) {
          stack.push_back(x);
          Element r = eval(t.body(), stack);
          stack.pop_back();
          return r;
        });
      case TermKind::kOp: {
        std::vector<Element> args;
        args.reserve(t.children().size());
        for (const auto& c : t.children()) args.push_back(eval(c, stack));
        return m_.apply_op(t.name(), args);
      }
      case TermKind::kBottom:
        if (!bottom_ok_) throw ModelError("interpret: term contains _|_ (enable bottom interpretation to map it to #0)");
        return m_.domain().bottom();
    }
    return m_.domain().bottom();
  }

 private:
  const Model& m_;
  bool bottom_ok_;
  FreeLookup lookup_;
};

void require_ops(const Term& t, const Model& m) {
  if (t.is(TermKind::kOp)) {
    auto it = m.ops().find(t.name());
    if (it == m.ops().end()) throw ModelError("model has no table for operation '" + t.name() + "'");
    if (it->second.arity != t.children().size()) {
      throw ModelError("operation '" + t.name() + "' has a table of arity " + std::to_string(it->second.arity));
    }
  }
  for (const auto& c : t.children()) require_ops(c, m);
}

}  // namespace

ContextMap interpret(const Term& t, const Context& ctx, const Model& m, const InterpretOptions& options) {
  require_ops(t, m);
  std::size_t cells = table_cells(m, ctx.size(), options.cell_budget);
  ContextMap out{ctx, std::vector<Element>(cells)};
  std::vector<Element> rho;
  Evaluator ev(m, options.interpret_bottom, [&](const std::string& name, const std::vector<Element>&) {
    auto pos = ctx.position(name);
    if (!pos) throw InvariantError("interpret: free variable '" + name + "' is not in the context");
    return rho[*pos];
  });
  std::vector<Element> stack;
  for (std::size_t row = 0; row < cells; ++row) {
    rho = tuple_at(row, ctx.size(), m.size());
    out.table[row] = ev.eval(t, stack);
  }
  return out;
}

Element interpret_in_D(const ContextMap& c, const Model& m) {
  std::size_t n = c.ctx.size();
  std::vector<Element> prefix;
  std::function<Element()> value = [&]() -> Element {
    if (prefix.size() == n) return c.table.at(tuple_index(prefix, m.size()));
    return m.fold([&](Element d) {
      prefix.push_back(d);
      Element r = value();
      prefix.pop_back();
      return r;
    });
  };
  return value();
}

ContextMap mult(const ContextMap& outer, const std::map<std::string, ContextMap>& assign, const Context& target,
                const Model& m, std::size_t budget) {
  std::vector<const ContextMap*> parts;
  for (const auto& x : outer.ctx.names()) {
    auto it = assign.find(x);
    if (it == assign.end()) throw InvariantError("mult: assignment is missing '" + x + "'");
    if (!(it->second.ctx == target)) throw InvariantError("mult: assignment for '" + x + "' is over another context");
    parts.push_back(&it->second);
  }
  std::size_t cells = table_cells(m, target.size(), budget);
  ContextMap out{target, std::vector<Element>(cells)};
  std::vector<Element> args(parts.size());
  for (std::size_t row = 0; row < cells; ++row) {
    for (std::size_t i = 0; i < parts.size(); ++i) args[i] = parts[i]->table[row];
    out.table[row] = outer.table[tuple_index(args, m.size())];
  }
  return out;
}

namespace {

Context rule_context(const RecursionScheme& s, const Nonterminal& r) { return s.ctx.extended(r.params); }

}  // namespace

InterpretedSolution bottom_candidate(const RecursionScheme& s, const Model& m, std::size_t budget) {
  InterpretedSolution out;
  for (const auto& r : s.rules) out.emplace(r.name, constant_map(rule_context(s, r), m, m.domain().bottom(), budget));
  return out;
}

InterpretedSolution iterate_once(const RecursionScheme& s, const Model& m, const InterpretedSolution& cand,
                                 std::size_t budget) {
  for (const auto& r : s.rules) {
    auto it = cand.find(r.name);
    if (it == cand.end()) throw InvariantError("candidate has no table for '" + r.name + "'");
    if (!(it->second.ctx == rule_context(s, r))) {
      throw InvariantError("candidate for '" + r.name + "' is over the wrong context");
    }
    require_ops(r.body, m);
  }
  std::size_t g = s.ctx.size();
  std::vector<Element> rho;
  std::vector<Element> key;
  Evaluator ev(m, false, [&](const std::string& name, const std::vector<Element>& stack) -> Element {
    if (const auto* q = s.find(name)) {
      std::size_t k = q->params.size();
      key.assign(rho.begin(), rho.begin() + static_cast<std::ptrdiff_t>(g));
      key.insert(key.end(), stack.end() - static_cast<std::ptrdiff_t>(k), stack.end());
      return cand.at(name).table[tuple_index(key, m.size())];
    }
    auto pos = s.ctx.position(name);
    if (!pos) throw InvariantError("interpret: free variable '" + name + "' is not in the context");
    return rho[*pos];
  });

  InterpretedSolution out;
  for (const auto& r : s.rules) {
    Context ctx = rule_context(s, r);
    std::size_t cells = table_cells(m, ctx.size(), budget);
    ContextMap next{ctx, std::vector<Element>(cells)};
    for (std::size_t row = 0; row < cells; ++row) {
      rho = tuple_at(row, ctx.size(), m.size());
      std::vector<Element> stack(rho.begin() + static_cast<std::ptrdiff_t>(g), rho.end());
      next.table[row] = ev.eval(r.body, stack);
    }
    out.emplace(r.name, std::move(next));
  }
  return out;
}

KleeneResult solve_interpreted(const RecursionScheme& s, const Model& m, std::size_t budget) {
  validate_scheme(s);
  KleeneResult result;
  result.bound = 1;
  std::size_t height = m.domain().height();
  for (const auto& r : s.rules) result.bound += table_cells(m, rule_context(s, r).size(), budget) * height;
  InterpretedSolution cand = bottom_candidate(s, m, budget);
  while (true) {
    InterpretedSolution next = iterate_once(s, m, cand, budget);
    ++result.iterations;
    if (next == cand) break;
    if (result.iterations >= result.bound) {
      throw InvariantError("Kleene iteration exceeded its bound of " + std::to_string(result.bound) + " steps");
    }
    cand = std::move(next);
  }
  result.solution = std::move(cand);
  return result;
}

FixedPointStatus check_interpreted(const RecursionScheme& s, const Model& m, const InterpretedSolution& cand,
                                   std::size_t budget) {
  InterpretedSolution next = iterate_once(s, m, cand, budget);
  if (next == cand) return FixedPointStatus::kFixed;
  for (const auto& r : s.rules) {
    if (!leq(next.at(r.name), cand.at(r.name), m)) return FixedPointStatus::kNeither;
  }
  return FixedPointStatus::kPostFixed;
}

std::string to_string(FixedPointStatus s) {
  switch (s) {
    case FixedPointStatus::kFixed: return "fixed";
    case FixedPointStatus::kPostFixed: return "post_fixed";
    case FixedPointStatus::kNeither: return "neither";
  }
  return "neither";
}

std::string print_interpreted(const RecursionScheme& s, const Model& m, const KleeneResult& result) {
  std::ostringstream os;
  for (const auto& r : s.rules) {
    const ContextMap& c = result.solution.at(r.name);
    os << "table " << r.name << '(';
    for (std::size_t i = 0; i < c.ctx.size(); ++i) os << (i == 0 ? "" : ", ") << c.ctx.names()[i];
    os << ") {\n";
    for (std::size_t row = 0; row < c.table.size(); ++row) {
      os << ' ';
      for (Element e : tuple_at(row, c.ctx.size(), m.size())) os << ' ' << element_name(e);
      os << " -> " << element_name(c.table[row]) << '\n';
    }
    os << "}\n";
  }
  os << "iterations " << result.iterations << '\n';
  return os.str();
}

}  // namespace hors
