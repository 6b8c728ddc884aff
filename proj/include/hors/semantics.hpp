#pragma once

// Interpretation of finite terms in a tower model and least interpreted
// solutions of recursion schemes by Kleene iteration.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "hors/cpo.hpp"
#include "hors/scheme.hpp"
#include "hors/term.hpp"

namespace hors {

inline constexpr std::size_t kDefaultCellBudget = 1'000'000;

// A total table D^ctx -> D, row-major with the first context variable most
// significant.
struct ContextMap {
  Context ctx;
  std::vector<Element> table;

  Element at(const std::vector<Element>& rho, std::size_t d_size) const;
  bool operator==(const ContextMap&) const = default;
};

// |D|^arity, or throws ModelError if it exceeds `budget`.
std::size_t table_cells(const Model& m, std::size_t arity, std::size_t budget = kDefaultCellBudget);

// Row index of `rho` and its inverse.
std::size_t tuple_index(const std::vector<Element>& rho, std::size_t d_size);
std::vector<Element> tuple_at(std::size_t index, std::size_t arity, std::size_t d_size);

ContextMap constant_map(const Context& ctx, const Model& m, Element value,
                        std::size_t budget = kDefaultCellBudget);
ContextMap projection(const Context& ctx, const std::string& var, const Model& m,
                      std::size_t budget = kDefaultCellBudget);

bool leq(const ContextMap& a, const ContextMap& b, const Model& m);
bool is_monotone(const ContextMap& c, const Model& m);

struct InterpretOptions {
  bool interpret_bottom = false;
  std::size_t cell_budget = kDefaultCellBudget;
};

ContextMap interpret(const Term& t, const Context& ctx, const Model& m,
                     const InterpretOptions& options = {});

// Curries every coordinate into the domain with fold, innermost last.
Element interpret_in_D(const ContextMap& c, const Model& m);

// result(rho) = outer(assign(x_1)(rho), ..., assign(x_n)(rho)) over the
// target context shared by all entries of `assign`.
ContextMap mult(const ContextMap& outer, const std::map<std::string, ContextMap>& assign,
                const Context& target, const Model& m, std::size_t budget = kDefaultCellBudget);

// A candidate assigns each nonterminal p a table over ctx extended by p's
// parameters.
using InterpretedSolution = std::map<std::string, ContextMap>;

InterpretedSolution bottom_candidate(const RecursionScheme& s, const Model& m,
                                     std::size_t budget = kDefaultCellBudget);

// One application of the iteration map: every rule body evaluated with the
// nonterminals read from `cand`.
InterpretedSolution iterate_once(const RecursionScheme& s, const Model& m, const InterpretedSolution& cand,
                                 std::size_t budget = kDefaultCellBudget);

struct KleeneResult {
  InterpretedSolution solution;
  // Applications of the iteration map up to and including the one that
  // reproduced its input.
  std::size_t iterations = 0;
  std::size_t bound = 0;
};

KleeneResult solve_interpreted(const RecursionScheme& s, const Model& m,
                               std::size_t budget = kDefaultCellBudget);

enum class FixedPointStatus { kFixed, kPostFixed, kNeither };

FixedPointStatus check_interpreted(const RecursionScheme& s, const Model& m, const InterpretedSolution& cand,
                                   std::size_t budget = kDefaultCellBudget);

std::string to_string(FixedPointStatus s);

// Value tables with `#i` names, one block per nonterminal in rule order.
std::string print_interpreted(const RecursionScheme& s, const Model& m, const KleeneResult& result);

}  // namespace hors
