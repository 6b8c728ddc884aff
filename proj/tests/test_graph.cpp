#include <doctest.h>

#include "hors/error.hpp"
#include "hors/flat_system.hpp"
#include "hors/syntax.hpp"
#include "hors/term_graph.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace hors;
using namespace hors::testing;

namespace {

// A = \f. B, B = f @ C, C = A @ f, with one BoundVar node per occurrence.
TermGraph y_graph() {
  TermGraph g;
  g.nodes = {GraphNode::abs(1, "f"), GraphNode::app(2, 3), GraphNode::bound_var(0), GraphNode::app(0, 4),
             GraphNode::bound_var(0)};
  g.root = 0;
  return g;
}

// The cycle of the Y-graph traversed twice before closing.
TermGraph y_unrolled() {
  TermGraph g;
  g.nodes = {GraphNode::abs(1, "f"), GraphNode::app(2, 3), GraphNode::bound_var(0), GraphNode::app(4, 2),
             GraphNode::abs(5, "f"), GraphNode::app(6, 7), GraphNode::bound_var(0), GraphNode::app(0, 6)};
  g.root = 0;
  return g;
}

TermGraph single(GraphNode n, const Context& ctx = {}) { return TermGraph{ctx, {std::move(n)}, 0}; }

}  // namespace

TEST_CASE("graph_from_term") {
  Context y({"y"});
  TermGraph fv = graph_from_term(Term::free_var("y"), y);
  CHECK(fv.nodes.size() == 1);
  CHECK(fv.nodes[0].kind == TermKind::kFreeVar);

  TermGraph g = graph_from_term(parse_term("\\x. x @ y", {}, y), y);
  REQUIRE(g.nodes.size() == 4);
  CHECK(g.nodes[g.root].kind == TermKind::kAbs);
  CHECK(g.nodes[g.nodes[g.root].children[0]].kind == TermKind::kApp);

  Rng rng(21);
  Signature sig = test_signature();
  Context yz({"y", "z"});
  for (int i = 0; i < 200; ++i) {
    Term t = random_term(rng, sig, yz, 30);
    TermGraph h = graph_from_term(t, yz);
    CHECK(validate_graph(h, &sig).ok());
    CHECK(h.nodes.size() <= size(t));
    CHECK(unfold(h, depth(t) + 1) == t);
  }
}

TEST_CASE("validate_graph") {
  CHECK(validate_graph(y_graph()).ok());
  TermGraph loop = TermGraph{{}, {GraphNode::app(0, 1), GraphNode::bound_var(0)}, 0};
  auto report = validate_graph(loop);
  REQUIRE_FALSE(report.ok());
  CHECK(report.summary().find("index 0 at binder-depth 0") != std::string::npos);
  bool has_witness = false;
  for (const auto& v : report.violations) {
    if (v.kind == GraphViolation::Kind::kUnsoundIndex) has_witness = !v.witness.empty() && v.witness.front() == 0;
  }
  CHECK(has_witness);

  TermGraph dangling{{}, {GraphNode::app(0, 7)}, 0};
  CHECK_FALSE(validate_graph(dangling).ok());
  TermGraph unreachable{{}, {GraphNode::bottom(), GraphNode::bottom()}, 0};
  CHECK_FALSE(validate_graph(unreachable).ok());
  TermGraph outside = single(GraphNode::free_var("q"), Context({"y"}));
  CHECK_FALSE(validate_graph(outside).ok());
  Signature sig = test_signature();
  TermGraph arity{{}, {GraphNode::op("s", {1}), GraphNode::bottom()}, 0};
  CHECK_FALSE(validate_graph(arity, &sig).ok());
  CHECK_FALSE(validate_graph(TermGraph{}).ok());
  CHECK_THROWS_AS(unfold(loop, 3), InvariantError);
}

TEST_CASE("unfold") {
  CHECK(unfold(y_graph(), 0) == Term::bottom());
  Term expected = parse_term("\\f. f @ ((\\f. _|_) @ f)", {}, {});
  CHECK(unfold(y_graph(), 4) == expected);
  CHECK(print_term(unfold(y_graph(), 4), {}) == "\\f. f @ ((\\f. _|_) @ f)");

  Rng rng(22);
  Signature sig = test_signature();
  Context yz({"y", "z"});
  for (int i = 0; i < 200; ++i) {
    TermGraph g = random_graph(rng, sig, yz, 8);
    std::size_t k = rng() % 12;
    std::size_t k2 = k + rng() % 6;
    CHECK(unfold(g, k) == cut(unfold(g, k2), k));
    CHECK(unfold(g, k) == naive_unfold(g, g.root, k));
  }
}

TEST_CASE("bisim_eq agrees with the cut oracle") {
  CHECK(bisim_eq(y_graph(), y_graph()));
  CHECK(bisim_eq(y_graph(), y_unrolled()));
  TermGraph other = y_graph();
  std::swap(other.nodes[1].children[0], other.nodes[1].children[1]);
  CHECK_FALSE(bisim_eq(y_graph(), other));
  CHECK_THROWS_AS(bisim_eq(y_graph(), single(GraphNode::free_var("y"), Context({"y"}))), InvariantError);

  Rng rng(23);
  Signature sig = test_signature();
  Context yz({"y", "z"});
  int equal = 0;
  for (int i = 0; i < 200; ++i) {
    TermGraph g = random_graph(rng, sig, yz, 8);
    TermGraph h = (i % 2 == 0) ? shuffle_nodes(rng, random_unrolling(rng, g)) : random_graph(rng, sig, yz, 8);
    std::size_t k = g.nodes.size() * h.nodes.size() + 1;
    bool oracle = unfold(g, k) == unfold(h, k);
    CHECK(bisim_eq(g, h) == oracle);
    equal += oracle;
  }
  CHECK(equal >= 100);
}

TEST_CASE("minimize and subtree_count") {
  // Abs, the outer App, the inner App and the shared BoundVar 0.
  CHECK(subtree_count_by_cuts(y_graph()) == 4);
  CHECK(subtree_count(y_graph()) == 4);
  CHECK(subtree_count(y_unrolled()) == subtree_count(y_graph()));
  CHECK(subtree_count(single(GraphNode::free_var("y"), Context({"y"}))) == 1);
  TermGraph m = minimize(y_graph());
  CHECK(minimize(m).nodes.size() == m.nodes.size());
  CHECK(bisim_eq(m, y_graph()));

  Rng rng(24);
  Signature sig = test_signature();
  Context yz({"y", "z"});
  for (int i = 0; i < 200; ++i) {
    TermGraph g = random_graph(rng, sig, yz, 8);
    TermGraph mg = minimize(g);
    CHECK(validate_graph(mg, &sig).ok());
    CHECK(bisim_eq(mg, g));
    CHECK(minimize(mg).nodes.size() == mg.nodes.size());
    CHECK(mg.nodes.size() == subtree_count_by_cuts(g));
    auto classes = bisimulation_classes(mg);
    std::set<std::size_t> distinct(classes.begin(), classes.end());
    CHECK(distinct.size() == mg.nodes.size());
    TermGraph u = random_unrolling(rng, g);
    CHECK(subtree_count(u) == subtree_count(g));
    // Canonical up to node renaming: equal node lists from a shuffled copy.
    TermGraph ms = minimize(shuffle_nodes(rng, u));
    CHECK(ms.nodes.size() == mg.nodes.size());
    bool same_layout = ms.root == mg.root;
    for (NodeId v = 0; same_layout && v < ms.nodes.size(); ++v) {
      same_layout = ms.nodes[v].kind == mg.nodes[v].kind && ms.nodes[v].children == mg.nodes[v].children &&
                    ms.nodes[v].index == mg.nodes[v].index;
    }
    CHECK(same_layout);
  }
}

TEST_CASE("substitute_graph") {
  Context y({"y"});
  TermGraph yy = graph_from_term(parse_term("y @ y", {}, y), y);
  TermGraph sub = substitute_graph(yy, {{"y", y_graph()}}, Context{});
  CHECK(validate_graph(sub).ok());
  const GraphNode& root = sub.nodes[sub.root];
  REQUIRE(root.kind == TermKind::kApp);
  CHECK(root.children[0] == root.children[1]);
  CHECK(subtree_count(sub) == subtree_count(y_graph()) + 1);

  Rng rng(25);
  Signature sig = test_signature();
  Context a({"y", "z"});
  Context b({"u", "v"});
  Context c({"w"});
  auto random_sub = [&](const Context& from, const Context& to) {
    GraphSubstitution s;
    for (const auto& x : from.names()) s[x] = random_graph(rng, sig, to, 5);
    return s;
  };
  for (int i = 0; i < 100; ++i) {
    TermGraph g = random_graph(rng, sig, a, 8);
    GraphSubstitution unit;
    for (const auto& x : a.names()) unit[x] = single(GraphNode::free_var(x), a);
    CHECK(bisim_eq(substitute_graph(g, unit, a), g));
    auto s1 = random_sub(a, b);
    auto s2 = random_sub(b, c);
    GraphSubstitution composed;
    for (const auto& [x, h] : s1) composed[x] = substitute_graph(h, s2, c);
    TermGraph lhs = substitute_graph(substitute_graph(g, s1, b), s2, c);
    TermGraph rhs = substitute_graph(g, composed, c);
    CHECK(validate_graph(lhs, &sig).ok());
    CHECK(bisim_eq(lhs, rhs));
    // Agrees with finite substitution on cuts.
    std::size_t k = 1 + rng() % 6;
    Substitution cuts;
    for (const auto& [x, h] : s1) cuts[x] = unfold(h, k);
    CHECK(unfold(substitute_graph(g, s1, b), k) == cut(substitute(unfold(g, k), a, cuts), k));
    // Renaming.
    Renaming gamma = random_renaming(rng, a, b);
    GraphSubstitution as_sub;
    for (const auto& [x, v] : gamma) as_sub[x] = single(GraphNode::free_var(v), b);
    CHECK(bisim_eq(rename_graph(g, gamma, b), substitute_graph(g, as_sub, b)));
  }
  CHECK_THROWS_AS(substitute_graph(yy, {}, Context{}), InvariantError);
}

TEST_CASE("solve_flat_system") {
  // x = y @ x, a right-infinite spine.
  Context y({"y"});
  FlatSystem spine{y, {{"x", AppOf{"v", "x"}, 0, {}}, {"v", Const{single(GraphNode::free_var("y"), y)}, 0, {}}}};
  auto sol = solve_flat_system(spine);
  CHECK(sol.at("x").nodes.size() == 2);
  CHECK(print_term(unfold(sol.at("x"), 3), y) == "y @ (y @ (_|_ @ _|_))");

  // The body of an abstraction is solved beneath its binder.
  FlatSystem ident{{}, {{"i", AbsOf{"b", "x"}, 0, {}}, {"b", BoundOf{0}, 1, {"x"}}}};
  auto id = solve_flat_system(ident);
  CHECK(unfold(id.at("i"), 5) == Term::abs(Term::bound_var(0)));
  CHECK(unfold(id.at("b"), 5) == Term::abs(Term::bound_var(0)));

  FlatSystem escaping{{}, {{"x", AppOf{"b", "b"}, 0, {}}, {"b", BoundOf{0}, 0, {}}}};
  CHECK_THROWS_WITH_AS(solve_flat_system(escaping), doctest::Contains("binder-depth 0"), InvariantError);
  FlatSystem undefined{{}, {{"x", AppOf{"x", "q"}, 0, {}}}};
  CHECK_THROWS_AS(solve_flat_system(undefined), InvariantError);
  FlatSystem twice{{}, {{"x", AppOf{"x", "x"}, 0, {}}, {"x", AppOf{"x", "x"}, 0, {}}}};
  CHECK_THROWS_AS(solve_flat_system(twice), InvariantError);

  // Random closed systems: every solution validates and satisfies its equation.
  Rng rng(26);
  Signature sig = test_signature();
  for (int i = 0; i < 200; ++i) {
    std::size_t n = 1 + rng() % 6;
    FlatSystem s{y, {}};
    auto var = [&](std::size_t k) { return "v" + std::to_string(k); };
    auto any = [&] { return var(rng() % n); };
    for (std::size_t k = 0; k < n; ++k) {
      FlatEquation eq{var(k), Const{}, 0, {}};
      switch (rng() % 5) {
        case 0: eq.rule = AppOf{any(), any()}; break;
        case 1: eq.rule = AbsOf{any(), "x"}; break;
        case 2: eq.rule = OpOf{"s", {any(), any()}}; break;
        case 3: eq.rule = OpOf{"o", {any()}}; break;
        default: eq.rule = Const{random_graph(rng, sig, y, 4)}; break;
      }
      s.equations.push_back(std::move(eq));
    }
    auto solved = solve_flat_system(s);
    for (const auto& eq : s.equations) {
      const TermGraph& g = solved.at(eq.var);
      CHECK(validate_graph(g, &sig).ok());
      CHECK(minimize(g).nodes.size() == g.nodes.size());
      std::vector<GraphNode> nodes;
      NodeId root = 0;
      auto copy = [&](const std::string& v) { return graph_detail::copy_into(nodes, solved.at(v), solved.at(v).root); };
      if (const auto* r = std::get_if<AppOf>(&eq.rule)) {
        NodeId f = copy(r->fun);
        NodeId a = copy(r->arg);
        nodes.push_back(GraphNode::app(f, a));
        root = nodes.size() - 1;
      } else if (const auto* r = std::get_if<AbsOf>(&eq.rule)) {
        NodeId b = copy(r->body);
        nodes.push_back(GraphNode::abs(b));
        root = nodes.size() - 1;
      } else if (const auto* r = std::get_if<OpOf>(&eq.rule)) {
        std::vector<NodeId> args;
        for (const auto& a : r->args) args.push_back(copy(a));
        nodes.push_back(GraphNode::op(r->symbol, args));
        root = nodes.size() - 1;
      } else {
        root = graph_detail::copy_into(nodes, std::get<Const>(eq.rule).graph, std::get<Const>(eq.rule).graph.root);
      }
      CHECK(bisim_eq(reroot(TermGraph{y, nodes, root}, root), g));
    }
  }
}

TEST_CASE("to_dot") {
  std::string dot = to_dot(minimize(y_graph()), "Y");
  CHECK(check_dot_grammar(dot, 4) == "");
  CHECK(dot.find("digraph \"Y\" {") == 0);
  CHECK(dot.find("label=\"λf\"") != std::string::npos);
  CHECK(dot.find("n3 -> n0 [label=\"0\"];") != std::string::npos);
  Rng rng(27);
  Signature sig = test_signature();
  for (int i = 0; i < 50; ++i) {
    TermGraph g = random_graph(rng, sig, Context({"y"}), 8);
    CHECK(check_dot_grammar(to_dot(g), reroot(g, g.root).nodes.size()) == "");
    CHECK(to_dot(g) == to_dot(g));
  }
}
