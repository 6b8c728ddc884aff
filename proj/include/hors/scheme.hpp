#pragma once

// Higher-order recursion schemes p_i = f_i over lambda-Sigma-terms.
//
// Nonterminals are nullary leaves of the right-hand sides, living over the
// global context. A nonterminal may additionally declare parameters,
// `p[x, y] = ...`: its rule then lives beneath that many binders, every use
// of p must sit under at least as many enclosing abstractions, and the
// parameters bind to the innermost ones. Flattening produces such
// nonterminals for subterms that sit under a lambda; user schemes rarely
// need them.
//
// Scheme file:
//
//   signature { s/2; o/1 }        optional
//   context { y; z }              optional
//   nonterminals { p1; p2 }       optional; otherwise rule order
//   p1 = p1 @ (\x. p2)
//   p2 = y @ p1

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hors/flat_system.hpp"
#include "hors/term.hpp"
#include "hors/term_graph.hpp"

namespace hors {

struct Nonterminal {
  std::string name;
  std::vector<std::string> params;
  // Over RecursionScheme::extended_context(); closed under params.size()
  // enclosing binders.
  Term body;
};

struct RecursionScheme {
  Signature sig;
  Context ctx;
  std::vector<Nonterminal> rules;

  // Nonterminal names followed by the global context.
  Context extended_context() const;
  std::vector<std::string> nonterminal_names() const;
  const Nonterminal* find(const std::string& name) const;
};

// Throws InvariantError if names clash, a body is ill formed, or a
// nonterminal is used under fewer binders than it has parameters.
void validate_scheme(const RecursionScheme& s);

RecursionScheme parse_scheme(std::string_view text);
std::string print_scheme(const RecursionScheme& s);

// The first nonterminal whose right-hand side is a bare nonterminal, or
// nullopt when the scheme is guarded.
std::optional<std::string> check_guarded(const RecursionScheme& s);

// Replaces each bare-nonterminal right-hand side by the right-hand side of
// the nonterminal it names. One level only.
RecursionScheme inline_aliases(const RecursionScheme& s);

struct FlatScheme {
  RecursionScheme scheme;
  // Names introduced by flattening, in creation order (`_t<N>`).
  std::vector<std::string> introduced;
};

bool is_flat_rule(const Nonterminal& rule, const RecursionScheme& s);

// Gives every composite proper subterm of every rule its own rule. Fresh
// nonterminals take the binders enclosing their occurrence as parameters.
// Throws UnguardedError on unguarded input.
FlatScheme flatten(const RecursionScheme& s);

FlatSystem to_flat_system(const FlatScheme& flat);

// Unique solution of a guarded scheme: one minimized graph per nonterminal,
// abstracted over the nonterminal's parameters.
GraphSolution solve(const RecursionScheme& s);

// True iff substituting the candidates into every right-hand side reproduces
// each candidate up to bisimilarity. Throws InvariantError when a candidate is
// missing or malformed.
bool verify_solution(const RecursionScheme& s, const GraphSolution& candidate);

// Relabels the global context; nonterminals are untouched.
RecursionScheme rename_scheme(const RecursionScheme& s, const Renaming& gamma,
                              const Context& target);

// Solution file: one `solution P { flat rules }` block per nonterminal whose
// first rule is the root; each rule is one graph node.
std::string print_graph_rules(const TermGraph& g, const Signature& sig);
std::string print_solution(const RecursionScheme& s, const GraphSolution& solution);
GraphSolution parse_solution(std::string_view text, const RecursionScheme& s);

}  // namespace hors
