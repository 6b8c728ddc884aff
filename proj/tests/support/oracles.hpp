#pragma once

// Reference implementations that share no code with the library paths they
// check.

#include <cstddef>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hors/cpo.hpp"
#include "hors/scheme.hpp"
#include "hors/semantics.hpp"
#include "hors/term.hpp"
#include "hors/term_graph.hpp"

namespace hors::testing {

// Terms with named binders.
struct NamedTerm {
  enum class Kind { kVar, kApp, kLam, kOp };
  Kind kind = Kind::kVar;
  std::string name;  // variable, binder or symbol
  std::vector<NamedTerm> children;

  static NamedTerm var(std::string n) { return {Kind::kVar, std::move(n), {}}; }
  static NamedTerm app(NamedTerm f, NamedTerm a) { return {Kind::kApp, {}, {std::move(f), std::move(a)}}; }
  static NamedTerm lam(std::string x, NamedTerm b) { return {Kind::kLam, std::move(x), {std::move(b)}}; }
  static NamedTerm op(std::string s, std::vector<NamedTerm> args) { return {Kind::kOp, std::move(s), std::move(args)}; }
};

// Concrete syntax accepted by parse_term (fully parenthesized).
std::string to_text(const NamedTerm& t);

// Alpha-equivalence by renaming both binders of each lambda pair to a common
// fresh name.
bool named_alpha_equal(const NamedTerm& t, const NamedTerm& u);

// Binder names drawn from a small pool so shadowing is frequent; free
// variables from `ctx`.
NamedTerm random_named(std::mt19937_64& rng, const Signature& sig, const std::vector<std::string>& ctx,
                       std::size_t max_size);

// Consistently renames binders to random names that capture nothing.
NamedTerm random_alpha_variant(std::mt19937_64& rng, const NamedTerm& t);

// Every total table P -> Q filtered by a direct monotonicity check.
std::vector<std::vector<std::size_t>> brute_force_monotone(const FinitePoset& p, const FinitePoset& q);

// Unfolding from any node, open indices allowed, without validation.
Term naive_unfold(const TermGraph& g, NodeId v, std::size_t k);

// Number of distinct cuts at depth 2n+1 over the reachable nodes.
std::size_t subtree_count_by_cuts(const TermGraph& g);

// Iteration map of a parameterless scheme computed with mult over the
// interpretation of each rule in the extended context.
InterpretedSolution phi_by_mult(const RecursionScheme& s, const Model& m, const InterpretedSolution& cand);

// Checks the shape of to_dot output: header, root marker, one declaration
// per node, labelled edges, closing brace. Returns an empty string or the
// first problem found.
std::string check_dot_grammar(const std::string& dot, std::size_t expected_nodes);

}  // namespace hors::testing
