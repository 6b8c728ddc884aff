#include "perturb.hpp"

namespace hors::testing {

namespace {

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

std::vector<GraphNode> relabels(const GraphNode& n, const Context& ctx, const Signature& sig) {
  std::vector<GraphNode> out;
  switch (n.kind) {
    case TermKind::kFreeVar:
      for (const auto& x : ctx.names()) {
        if (x != n.name) out.push_back(GraphNode::free_var(x));
      }
      out.push_back(GraphNode::bottom());
      break;
    case TermKind::kBoundVar:
      out.push_back(GraphNode::bound_var(n.index + 1));
      if (n.index > 0) out.push_back(GraphNode::bound_var(n.index - 1));
      break;
    case TermKind::kBottom:
      if (!ctx.empty()) out.push_back(GraphNode::free_var(ctx.names()[0]));
      break;
    case TermKind::kApp:
      for (const auto& [sym, arity] : sig.symbols()) {
        if (arity == 2) out.push_back(GraphNode::op(sym, n.children));
      }
      break;
    case TermKind::kAbs:
      for (const auto& [sym, arity] : sig.symbols()) {
        if (arity == 1) out.push_back(GraphNode::op(sym, n.children));
      }
      break;
    case TermKind::kOp:
      if (n.children.size() == 2) out.push_back(GraphNode::app(n.children[0], n.children[1]));
      if (n.children.size() == 1) out.push_back(GraphNode::abs(n.children[0]));
      for (const auto& [sym, arity] : sig.symbols()) {
        if (arity == n.children.size() && sym != n.name) out.push_back(GraphNode::op(sym, n.children));
      }
      break;
  }
  return out;
}

}  // namespace

std::vector<TermGraph> perturbations(Rng& rng, const TermGraph& g, const Signature& sig, std::size_t unrollings) {
  std::vector<TermGraph> out;
  for (NodeId v = 0; v < g.nodes.size(); ++v) {
    const GraphNode& n = g.nodes[v];
    if (n.children.size() >= 2) {
      TermGraph h = g;
      std::swap(h.nodes[v].children[0], h.nodes[v].children[1]);
      out.push_back(std::move(h));
    }
    for (auto& r : relabels(n, g.context, sig)) {
      TermGraph h = g;
      h.nodes[v] = std::move(r);
      out.push_back(std::move(h));
    }
  }
  std::size_t n = g.nodes.size();
  for (std::size_t i = 0; i < unrollings; ++i) {
    TermGraph h = g;
    for (NodeId v = 0; v < n; ++v) {
      GraphNode copy = g.nodes[v];
      for (auto& c : copy.children) c += n;
      h.nodes.push_back(std::move(copy));
    }
    // Close the copy onto the original with one edge sent elsewhere.
    std::vector<std::pair<NodeId, std::size_t>> edges;
    for (NodeId v = n; v < 2 * n; ++v) {
      for (std::size_t k = 0; k < h.nodes[v].children.size(); ++k) edges.emplace_back(v, k);
    }
    if (edges.empty()) break;
    for (auto& [v, k] : edges) {
      if (h.nodes[v].children[k] == g.root + n) h.nodes[v].children[k] = g.root;
    }
    auto [v, k] = edges[pick(rng, edges.size())];
    h.nodes[v].children[k] = pick(rng, 2 * n);
    h.root = g.root + n;
    out.push_back(reroot(h, h.root));
  }
  return out;
}

PerturbationStats check_perturbations(Rng& rng, const RecursionScheme& s, const GraphSolution& sol,
                                      std::size_t unrollings) {
  PerturbationStats stats;
  for (const auto& r : s.rules) {
    for (auto& h : perturbations(rng, sol.at(r.name), s.sig, unrollings)) {
      TermGraph candidate = reroot(h, h.root);
      if (!validate_graph(candidate, &s.sig).ok()) continue;
      ++stats.tried;
      GraphSolution cand = sol;
      cand[r.name] = candidate;
      bool same = bisim_eq(candidate, sol.at(r.name));
      stats.bisimilar += same;
      if (verify_solution(s, cand) && !same) ++stats.false_positives;
    }
  }
  return stats;
}

}  // namespace hors::testing
