#pragma once

// Rational lambda-Sigma-terms as finite rooted term graphs.
//
// A graph denotes the (possibly infinite) tree obtained by unfolding it from
// the root. Bound variables are nameless indices, so unfolding never needs
// fresh names and two graphs denote alpha-equivalent terms exactly when they
// are bisimilar.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hors/term.hpp"

namespace hors {

using NodeId = std::size_t;

struct GraphNode {
  TermKind kind = TermKind::kBottom;
  std::string name;  // FreeVar name, Op symbol, Abs hint
  std::size_t index = 0;
  std::vector<NodeId> children;

  static GraphNode free_var(std::string name) { return {TermKind::kFreeVar, std::move(name), 0, {}}; }
  static GraphNode bound_var(std::size_t i) { return {TermKind::kBoundVar, {}, i, {}}; }
  static GraphNode app(NodeId f, NodeId a) { return {TermKind::kApp, {}, 0, {f, a}}; }
  static GraphNode abs(NodeId body, std::string hint = {}) {
    return {TermKind::kAbs, std::move(hint), 0, {body}};
  }
  static GraphNode op(std::string symbol, std::vector<NodeId> args) {
    return {TermKind::kOp, std::move(symbol), 0, std::move(args)};
  }
  static GraphNode bottom() { return {}; }
};

struct TermGraph {
  Context context;
  std::vector<GraphNode> nodes;
  NodeId root = 0;
};

struct GraphViolation {
  enum class Kind { kDanglingEdge, kBadArity, kUnknownSymbol, kFreeVarOutsideContext,
                    kUnreachable, kUnsoundIndex, kEmpty };
  Kind kind;
  NodeId node = 0;
  std::string message;
  // Root-to-node path of minimal binder depth, for kUnsoundIndex.
  std::vector<NodeId> witness;
};

struct ValidationReport {
  std::vector<GraphViolation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

// Checks every graph invariant. With `sig` null, operation symbols are only
// checked for consistent arity across nodes.
ValidationReport validate_graph(const TermGraph& g, const Signature* sig = nullptr);

// Throws InvariantError carrying the report summary unless `g` is valid.
void require_valid(const TermGraph& g, const char* operation);

// Per node, the least number of Abs nodes on any path from the root (the
// root itself excluded).
std::vector<std::size_t> min_binder_depths(const TermGraph& g);

// Per node, how many enclosing binders its unfolding needs to be
// index-closed (0 for every node a valid graph can be rooted at).
std::vector<std::size_t> required_binders(const TermGraph& g);

// One node per occurrence; subterms physically shared in `t` share a node.
TermGraph graph_from_term(const Term& t, const Context& ctx);

// Depth-k cut of the unfolding. Repeated subtrees are shared in the result.
Term unfold(const TermGraph& g, std::size_t k);

// Class id per node under the coarsest bisimulation of `g`.
std::vector<std::size_t> bisimulation_classes(const TermGraph& g);

bool bisim_eq(const TermGraph& g, const TermGraph& h);

// Quotient by bisimilarity; node ids follow breadth-first discovery from the
// root with children in constructor order.
TermGraph minimize(const TermGraph& g);

// Number of distinct subtrees (up to alpha) of the unfolding.
std::size_t subtree_count(const TermGraph& g);

// Reachable part of `g` renumbered in breadth-first order from `root`.
TermGraph reroot(const TermGraph& g, NodeId root);

using GraphSubstitution = std::map<std::string, TermGraph>;

// Redirects every edge into a FreeVar-x node to the root of a copy of
// sigma(x). `sigma` must be total on g's context; its graphs all live over
// `target`.
TermGraph substitute_graph(const TermGraph& g, const GraphSubstitution& sigma,
                           const Context& target);

TermGraph rename_graph(const TermGraph& g, const Renaming& gamma, const Context& target);

// Graphviz text. Nodes in breadth-first order from the root, one declaration
// per node, edges in child order labelled with their position.
std::string to_dot(const TermGraph& g, const std::string& name = "term");

// Graph surgery shared by the solvers.
namespace graph_detail {

// Copies the part of `src` reachable from `from` into `dst`; returns the id
// of the copy of `from`. FreeVar nodes named in `splice` are not copied;
// edges to them go to the mapped node instead.
NodeId copy_into(std::vector<GraphNode>& dst, const TermGraph& src, NodeId from,
                 const std::map<std::string, NodeId>& splice = {});

// Follows `count` Abs nodes from the root; nullopt if the chain is shorter.
std::optional<NodeId> strip_binders(const TermGraph& g, std::size_t count);

}  // namespace graph_detail

}  // namespace hors
