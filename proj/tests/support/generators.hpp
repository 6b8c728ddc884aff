#pragma once

// Seeded random generators for terms, graphs, schemes and posets.

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "hors/cpo.hpp"
#include "hors/scheme.hpp"
#include "hors/semantics.hpp"
#include "hors/term.hpp"
#include "hors/term_graph.hpp"

namespace hors::testing {

using Rng = std::mt19937_64;

// s/2, o/1, c/0
Signature test_signature();

// Random well-formed term over `ctx` with at most `max_size` nodes, living
// beneath `outer` binders.
Term random_term(Rng& rng, const Signature& sig, const Context& ctx, std::size_t max_size,
                 std::size_t outer = 0, bool allow_bottom = false);

// Random valid graph with at most `max_nodes` nodes.
TermGraph random_graph(Rng& rng, const Signature& sig, const Context& ctx, std::size_t max_nodes);

// A bisimilar copy of `g`: every node duplicated, edges of the copy sent at
// random to the original or the copy, rooted in the copy.
TermGraph random_unrolling(Rng& rng, const TermGraph& g);

// `g` with node ids shuffled (root kept reachable).
TermGraph shuffle_nodes(Rng& rng, const TermGraph& g);

// Guarded scheme with 1..max_rules parameterless nonterminals.
RecursionScheme random_scheme(Rng& rng, const Signature& sig, const Context& ctx, std::size_t max_rules,
                              std::size_t max_body = 8);

Substitution random_substitution(Rng& rng, const Signature& sig, const Context& from, const Context& to,
                                 std::size_t max_size);

Renaming random_renaming(Rng& rng, const Context& from, const Context& to);

// Random poset on n elements with bottom 0 (order relation of a random DAG
// whose edges go from lower to higher index).
FinitePoset random_poset(Rng& rng, std::size_t n);

ContextMap random_monotone_map(Rng& rng, const Context& ctx, const Model& m);

// Pointwise order on candidates, nonterminal by nonterminal.
bool leq_solutions(const InterpretedSolution& a, const InterpretedSolution& b, const Model& m);

InterpretedSolution random_candidate(Rng& rng, const RecursionScheme& s, const Model& m);

// A post-fixed point above a random start: climb with c v Phi(c) until
// stable, then descend a few steps with Phi, which keeps it post-fixed.
InterpretedSolution random_post_fixed(Rng& rng, const RecursionScheme& s, const Model& m);

}  // namespace hors::testing
