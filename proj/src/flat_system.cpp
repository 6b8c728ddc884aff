#include "hors/flat_system.hpp"

#include <set>

#include "hors/error.hpp"

namespace hors {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<std::string> references(const FlatRule& rule) {
  return std::visit(Overloaded{
                        [](const AppOf& r) { return std::vector<std::string>{r.fun, r.arg}; },
                        [](const AbsOf& r) { return std::vector<std::string>{r.body}; },
                        [](const OpOf& r) { return r.args; },
                        [](const BoundOf&) { return std::vector<std::string>{}; },
                        [](const Const&) { return std::vector<std::string>{}; },
                    },
                    rule);
}

}  // namespace

void validate_flat_system(const FlatSystem& s) {
  std::set<std::string> defined;
  for (const auto& eq : s.equations) {
    if (!defined.insert(eq.var).second) {
      throw InvariantError("flat system: variable '" + eq.var + "' defined twice");
    }
  }
  for (const auto& eq : s.equations) {
    for (const auto& ref : references(eq.rule)) {
      if (!defined.count(ref)) {
        throw InvariantError("flat system: '" + eq.var + "' refers to undefined variable '" + ref + "'");
      }
    }
    if (const auto* c = std::get_if<Const>(&eq.rule)) {
      if (!(c->graph.context == s.context)) {
        throw InvariantError("flat system: constant of '" + eq.var + "' has a different context");
      }
      auto report = validate_graph(c->graph);
      if (!report.ok()) {
        throw InvariantError("flat system: constant of '" + eq.var + "' is invalid: " + report.summary());
      }
    }
  }
}

GraphSolution solve_flat_system(const FlatSystem& s) {
  validate_flat_system(s);
  std::map<std::string, NodeId> node_of;
  std::vector<GraphNode> nodes;
  // Constants are spliced first so every variable knows its node id.
  for (const auto& eq : s.equations) {
    if (const auto* c = std::get_if<Const>(&eq.rule)) {
      node_of[eq.var] = graph_detail::copy_into(nodes, c->graph, c->graph.root);
    }
  }
  for (const auto& eq : s.equations) {
    if (!std::holds_alternative<Const>(eq.rule)) {
      node_of[eq.var] = nodes.size();
      nodes.emplace_back();
    }
  }
  for (const auto& eq : s.equations) {
    if (std::holds_alternative<Const>(eq.rule)) continue;
    GraphNode& n = nodes[node_of.at(eq.var)];
    std::visit(Overloaded{
                   [&](const AppOf& r) { n = GraphNode::app(node_of.at(r.fun), node_of.at(r.arg)); },
                   [&](const AbsOf& r) { n = GraphNode::abs(node_of.at(r.body), r.hint); },
                   [&](const OpOf& r) {
                     std::vector<NodeId> args;
                     for (const auto& a : r.args) args.push_back(node_of.at(a));
                     n = GraphNode::op(r.symbol, std::move(args));
                   },
                   [&](const BoundOf& r) { n = GraphNode::bound_var(r.index); },
                   [&](const Const&) {},
               },
               eq.rule);
  }

  GraphSolution out;
  for (const auto& eq : s.equations) {
    TermGraph g{s.context, nodes, node_of.at(eq.var)};
    for (std::size_t i = eq.binders; i-- > 0;) {
      std::string hint = i < eq.binder_hints.size() ? eq.binder_hints[i] : "";
      g.nodes.push_back(GraphNode::abs(g.root, std::move(hint)));
      g.root = g.nodes.size() - 1;
    }
    g = reroot(g, g.root);
    auto report = validate_graph(g);
    if (!report.ok()) {
      throw InvariantError("solution of '" + eq.var + "' is not a valid term: " + report.summary());
    }
    out.emplace(eq.var, minimize(g));
  }
  return out;
}

}  // namespace hors
