#include "hors/term_graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "hors/error.hpp"

namespace hors {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

std::string node_text(NodeId id) { return "n" + std::to_string(id); }

std::size_t expected_children(const GraphNode& n) {
  switch (n.kind) {
    case TermKind::kApp: return 2;
    case TermKind::kAbs: return 1;
    case TermKind::kOp: return n.children.size();
    default: return 0;
  }
}

std::vector<NodeId> bfs_order(const TermGraph& g, NodeId root) {
  std::vector<NodeId> order;
  std::vector<bool> seen(g.nodes.size(), false);
  std::deque<NodeId> queue{root};
  seen[root] = true;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    order.push_back(v);
    for (NodeId c : g.nodes[v].children) {
      if (c < g.nodes.size() && !seen[c]) {
        seen[c] = true;
        queue.push_back(c);
      }
    }
  }
  return order;
}

// 0-1 BFS: an edge leaving an Abs node costs one binder.
std::vector<std::size_t> binder_depths(const TermGraph& g, std::vector<NodeId>* pred) {
  std::vector<std::size_t> dist(g.nodes.size(), kUnreached);
  if (pred != nullptr) pred->assign(g.nodes.size(), kUnreached);
  if (g.nodes.empty() || g.root >= g.nodes.size()) return dist;
  std::deque<NodeId> dq{g.root};
  dist[g.root] = 0;
  std::vector<bool> done(g.nodes.size(), false);
  while (!dq.empty()) {
    NodeId v = dq.front();
    dq.pop_front();
    if (done[v]) continue;
    done[v] = true;
    std::size_t w = g.nodes[v].kind == TermKind::kAbs ? 1 : 0;
    for (NodeId c : g.nodes[v].children) {
      if (c >= g.nodes.size()) continue;
      if (dist[v] + w < dist[c]) {
        dist[c] = dist[v] + w;
        if (pred != nullptr) (*pred)[c] = v;
        if (w == 0) {
          dq.push_front(c);
        } else {
          dq.push_back(c);
        }
      }
    }
  }
  return dist;
}

}  // namespace

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

ValidationReport validate_graph(const TermGraph& g, const Signature* sig) {
  ValidationReport report;
  auto add = [&](GraphViolation::Kind kind, NodeId node, std::string message) {
    report.violations.push_back({kind, node, std::move(message), {}});
  };
  if (g.nodes.empty()) {
    add(GraphViolation::Kind::kEmpty, 0, "graph has no nodes");
    return report;
  }
  if (g.root >= g.nodes.size()) {
    add(GraphViolation::Kind::kDanglingEdge, g.root, "root " + node_text(g.root) + " does not exist");
    return report;
  }
  bool dangling = false;
  std::map<std::string, std::size_t> seen_arity;
  for (NodeId v = 0; v < g.nodes.size(); ++v) {
    const GraphNode& n = g.nodes[v];
    if (n.children.size() != expected_children(n)) {
      add(GraphViolation::Kind::kBadArity, v,
          node_text(v) + " has " + std::to_string(n.children.size()) + " children");
    }
    for (NodeId c : n.children) {
      if (c >= g.nodes.size()) {
        dangling = true;
        add(GraphViolation::Kind::kDanglingEdge, v,
            "dangling edge " + node_text(v) + " -> " + node_text(c));
      }
    }
    if (n.kind == TermKind::kFreeVar && !g.context.contains(n.name)) {
      add(GraphViolation::Kind::kFreeVarOutsideContext, v,
          "free variable '" + n.name + "' at " + node_text(v) + " not in context");
    }
    if (n.kind == TermKind::kOp) {
      if (sig != nullptr) {
        auto arity = sig->arity(n.name);
        if (!arity) {
          add(GraphViolation::Kind::kUnknownSymbol, v, "unknown symbol '" + n.name + "'");
        } else if (*arity != n.children.size()) {
          add(GraphViolation::Kind::kBadArity, v,
              "symbol '" + n.name + "' at " + node_text(v) + " expects " +
                  std::to_string(*arity) + " arguments");
        }
      } else {
        auto [it, fresh] = seen_arity.emplace(n.name, n.children.size());
        if (!fresh && it->second != n.children.size()) {
          add(GraphViolation::Kind::kBadArity, v,
              "symbol '" + n.name + "' used with inconsistent arity");
        }
      }
    }
  }
  auto order = bfs_order(g, g.root);
  if (order.size() != g.nodes.size()) {
    std::vector<bool> reached(g.nodes.size(), false);
    for (NodeId v : order) reached[v] = true;
    for (NodeId v = 0; v < g.nodes.size(); ++v) {
      if (!reached[v]) add(GraphViolation::Kind::kUnreachable, v, "unreachable node " + node_text(v));
    }
  }
  if (dangling) return report;

  std::vector<NodeId> pred;
  auto dist = binder_depths(g, &pred);
  for (NodeId v = 0; v < g.nodes.size(); ++v) {
    const GraphNode& n = g.nodes[v];
    if (n.kind != TermKind::kBoundVar || dist[v] == kUnreached) continue;
    if (n.index >= dist[v]) {
      GraphViolation viol;
      viol.kind = GraphViolation::Kind::kUnsoundIndex;
      viol.node = v;
      for (NodeId u = v; u != kUnreached; u = pred[u]) viol.witness.push_back(u);
      std::reverse(viol.witness.begin(), viol.witness.end());
      std::string path;
      for (NodeId u : viol.witness) path += (path.empty() ? "" : " -> ") + node_text(u);
      viol.message = "unsound bound variable at " + node_text(v) + ": index " +
                     std::to_string(n.index) + " at binder-depth " +
                     std::to_string(dist[v]) + " (path " + path + ")";
      report.violations.push_back(std::move(viol));
    }
  }
  return report;
}

void require_valid(const TermGraph& g, const char* operation) {
  auto report = validate_graph(g);
  if (!report.ok()) throw InvariantError(std::string(operation) + ": invalid graph: " + report.summary());
}

std::vector<std::size_t> min_binder_depths(const TermGraph& g) {
  return binder_depths(g, nullptr);
}

std::vector<std::size_t> required_binders(const TermGraph& g) {
  std::vector<std::size_t> need(g.nodes.size(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId v = 0; v < g.nodes.size(); ++v) {
      const GraphNode& n = g.nodes[v];
      std::size_t r = 0;
      switch (n.kind) {
        case TermKind::kBoundVar:
          r = n.index + 1;
          break;
        case TermKind::kAbs:
          r = need[n.children[0]] == 0 ? 0 : need[n.children[0]] - 1;
          break;
        default:
          for (NodeId c : n.children) r = std::max(r, need[c]);
      }
      if (r > need[v]) {
        need[v] = r;
        changed = true;
      }
    }
  }
  return need;
}

TermGraph graph_from_term(const Term& t, const Context& ctx) {
  TermGraph g;
  g.context = ctx;
  std::unordered_map<const void*, NodeId> memo;
  std::function<NodeId(const Term&)> go = [&](const Term& s) -> NodeId {
    auto it = memo.find(s.identity());
    if (it != memo.end()) return it->second;
    GraphNode n;
    n.kind = s.kind();
    n.index = s.index();
    if (s.is(TermKind::kFreeVar) || s.is(TermKind::kOp)) n.name = s.name();
    if (s.is(TermKind::kAbs)) n.name = s.hint();
    for (const auto& c : s.children()) n.children.push_back(go(c));
    g.nodes.push_back(std::move(n));
    NodeId id = g.nodes.size() - 1;
    memo.emplace(s.identity(), id);
    return id;
  };
  NodeId root = go(t);
  return reroot(g, root);
}

Term unfold(const TermGraph& g, std::size_t k) {
  require_valid(g, "unfold");
  std::map<std::pair<NodeId, std::size_t>, Term> memo;
  std::function<Term(NodeId, std::size_t)> go = [&](NodeId v, std::size_t left) -> Term {
    if (left == 0) return Term::bottom();
    auto key = std::make_pair(v, left);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const GraphNode& n = g.nodes[v];
    Term out;
    switch (n.kind) {
      case TermKind::kFreeVar: out = Term::free_var(n.name); break;
      case TermKind::kBoundVar: out = Term::bound_var(n.index); break;
      case TermKind::kBottom: out = Term::bottom(); break;
      case TermKind::kApp:
        out = Term::app(go(n.children[0], left - 1), go(n.children[1], left - 1));
        break;
      case TermKind::kAbs: out = Term::abs(go(n.children[0], left - 1), n.name); break;
      case TermKind::kOp: {
        std::vector<Term> args;
        for (NodeId c : n.children) args.push_back(go(c, left - 1));
        out = Term::op(n.name, std::move(args));
        break;
      }
    }
    memo.emplace(key, out);
    return out;
  };
  return go(g.root, k);
}

namespace {

std::vector<std::size_t> refine(const std::vector<const GraphNode*>& nodes,
                                const std::vector<std::vector<NodeId>>& edges) {
  std::map<std::tuple<int, std::string, std::size_t, std::size_t>, std::size_t> initial;
  std::vector<std::size_t> cls(nodes.size());
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    const GraphNode& n = *nodes[v];
    std::string name = (n.kind == TermKind::kFreeVar || n.kind == TermKind::kOp) ? n.name : "";
    std::size_t index = n.kind == TermKind::kBoundVar ? n.index : 0;
    auto key = std::make_tuple(static_cast<int>(n.kind), name, index, n.children.size());
    auto [it, fresh] = initial.emplace(key, initial.size());
    cls[v] = it->second;
  }
  std::size_t count = initial.size();
  while (true) {
    std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> sigs;
    std::vector<std::size_t> next(nodes.size());
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      std::vector<std::size_t> child_classes;
      child_classes.reserve(edges[v].size());
      for (NodeId c : edges[v]) child_classes.push_back(cls[c]);
      auto [it, fresh] = sigs.emplace(std::make_pair(cls[v], std::move(child_classes)), sigs.size());
      next[v] = it->second;
    }
    cls = std::move(next);
    if (sigs.size() == count) break;
    count = sigs.size();
  }
  return cls;
}

}  // namespace

std::vector<std::size_t> bisimulation_classes(const TermGraph& g) {
  std::vector<const GraphNode*> nodes;
  std::vector<std::vector<NodeId>> edges;
  for (const auto& n : g.nodes) {
    nodes.push_back(&n);
    edges.push_back(n.children);
  }
  return refine(nodes, edges);
}

bool bisim_eq(const TermGraph& g, const TermGraph& h) {
  if (!(g.context == h.context)) throw InvariantError("bisim_eq: contexts differ");
  require_valid(g, "bisim_eq");
  require_valid(h, "bisim_eq");
  std::vector<const GraphNode*> nodes;
  std::vector<std::vector<NodeId>> edges;
  for (const auto& n : g.nodes) {
    nodes.push_back(&n);
    edges.push_back(n.children);
  }
  const std::size_t offset = g.nodes.size();
  for (const auto& n : h.nodes) {
    nodes.push_back(&n);
    std::vector<NodeId> shifted;
    for (NodeId c : n.children) shifted.push_back(c + offset);
    edges.push_back(std::move(shifted));
  }
  auto cls = refine(nodes, edges);
  return cls[g.root] == cls[h.root + offset];
}

TermGraph minimize(const TermGraph& g) {
  require_valid(g, "minimize");
  auto cls = bisimulation_classes(g);
  std::map<std::size_t, NodeId> new_id;
  std::vector<NodeId> representative;
  std::deque<NodeId> queue;
  auto discover = [&](NodeId v) {
    auto [it, fresh] = new_id.emplace(cls[v], representative.size());
    if (fresh) {
      representative.push_back(v);
      queue.push_back(v);
    }
    return it->second;
  };
  discover(g.root);
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId c : g.nodes[v].children) discover(c);
  }
  TermGraph out;
  out.context = g.context;
  out.root = 0;
  for (NodeId rep : representative) {
    GraphNode n = g.nodes[rep];
    for (auto& c : n.children) c = new_id.at(cls[c]);
    out.nodes.push_back(std::move(n));
  }
  return out;
}

std::size_t subtree_count(const TermGraph& g) { return minimize(g).nodes.size(); }

TermGraph reroot(const TermGraph& g, NodeId root) {
  if (root >= g.nodes.size()) throw InvariantError("reroot: node does not exist");
  auto order = bfs_order(g, root);
  std::vector<NodeId> new_id(g.nodes.size(), kUnreached);
  for (NodeId i = 0; i < order.size(); ++i) new_id[order[i]] = i;
  TermGraph out;
  out.context = g.context;
  out.root = 0;
  for (NodeId v : order) {
    GraphNode n = g.nodes[v];
    for (auto& c : n.children) {
      if (c >= g.nodes.size()) throw InvariantError("reroot: dangling edge");
      c = new_id[c];
    }
    out.nodes.push_back(std::move(n));
  }
  return out;
}

namespace graph_detail {

NodeId copy_into(std::vector<GraphNode>& dst, const TermGraph& src, NodeId from,
                 const std::map<std::string, NodeId>& splice) {
  auto spliced = [&](NodeId v) -> std::optional<NodeId> {
    const GraphNode& n = src.nodes[v];
    if (n.kind != TermKind::kFreeVar) return std::nullopt;
    auto it = splice.find(n.name);
    if (it == splice.end()) return std::nullopt;
    return it->second;
  };
  if (auto s = spliced(from)) return *s;
  auto order = bfs_order(src, from);
  std::vector<NodeId> new_id(src.nodes.size(), kUnreached);
  const NodeId base = dst.size();
  NodeId next = base;
  for (NodeId v : order) {
    if (!spliced(v)) new_id[v] = next++;
  }
  for (NodeId v : order) {
    if (spliced(v)) continue;
    GraphNode n = src.nodes[v];
    for (auto& c : n.children) {
      auto s = spliced(c);
      c = s ? *s : new_id[c];
    }
    dst.push_back(std::move(n));
  }
  return new_id[from];
}

std::optional<NodeId> strip_binders(const TermGraph& g, std::size_t count) {
  NodeId v = g.root;
  for (std::size_t i = 0; i < count; ++i) {
    if (v >= g.nodes.size() || g.nodes[v].kind != TermKind::kAbs) return std::nullopt;
    v = g.nodes[v].children[0];
  }
  return v;
}

}  // namespace graph_detail

TermGraph substitute_graph(const TermGraph& g, const GraphSubstitution& sigma,
                           const Context& target) {
  require_valid(g, "substitute_graph");
  for (const auto& x : g.context.names()) {
    auto it = sigma.find(x);
    if (it == sigma.end()) throw InvariantError("substitute_graph: substitution not total: missing '" + x + "'");
    if (!(it->second.context == target)) {
      throw InvariantError("substitute_graph: image of '" + x + "' lives over a different context");
    }
    require_valid(it->second, "substitute_graph");
  }
  std::set<std::string> used;
  for (const auto& n : g.nodes) {
    if (n.kind == TermKind::kFreeVar) used.insert(n.name);
  }
  std::vector<GraphNode> nodes;
  std::map<std::string, NodeId> splice;
  for (const auto& x : g.context.names()) {
    if (!used.count(x)) continue;
    const TermGraph& image = sigma.at(x);
    splice[x] = graph_detail::copy_into(nodes, image, image.root);
  }
  NodeId root = graph_detail::copy_into(nodes, g, g.root, splice);
  TermGraph out{target, std::move(nodes), root};
  return reroot(out, root);
}

TermGraph rename_graph(const TermGraph& g, const Renaming& gamma, const Context& target) {
  for (const auto& x : g.context.names()) {
    auto it = gamma.find(x);
    if (it == gamma.end()) throw InvariantError("rename_graph: renaming not total: missing '" + x + "'");
    if (!target.contains(it->second)) {
      throw InvariantError("rename_graph: target '" + it->second + "' not in codomain context");
    }
  }
  TermGraph out = g;
  out.context = target;
  for (auto& n : out.nodes) {
    if (n.kind == TermKind::kFreeVar) n.name = gamma.at(n.name);
  }
  return out;
}

std::string to_dot(const TermGraph& g, const std::string& name) {
  TermGraph r = reroot(g, g.root);
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n";
  os << "  root [shape=point];\n";
  os << "  root -> n0;\n";
  for (NodeId v = 0; v < r.nodes.size(); ++v) {
    const GraphNode& n = r.nodes[v];
    std::string label;
    switch (n.kind) {
      case TermKind::kFreeVar: label = n.name; break;
      case TermKind::kBoundVar: label = std::to_string(n.index); break;
      case TermKind::kApp: label = "@"; break;
      case TermKind::kAbs: label = "λ" + n.name; break;
      case TermKind::kOp: label = n.name; break;
      case TermKind::kBottom: label = "⊥"; break;
    }
    const char* shape = n.kind == TermKind::kBoundVar ? "circle" : "box";
    os << "  n" << v << " [label=\"" << label << "\", shape=" << shape << "];\n";
  }
  for (NodeId v = 0; v < r.nodes.size(); ++v) {
    const auto& children = r.nodes[v].children;
    for (std::size_t i = 0; i < children.size(); ++i) {
      os << "  n" << v << " -> n" << children[i] << " [label=\"" << i << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace hors
