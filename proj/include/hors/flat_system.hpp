#pragma once

// Flat equation systems over rational terms and their unique solutions.

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "hors/term_graph.hpp"

namespace hors {

struct AppOf {
  std::string fun;
  std::string arg;
};
struct AbsOf {
  std::string body;
  std::string hint;
};
struct OpOf {
  std::string symbol;
  std::vector<std::string> args;
};
// The variable bound `index` binders above this equation variable.
struct BoundOf {
  std::size_t index = 0;
};
struct Const {
  TermGraph graph;
};

using FlatRule = std::variant<AppOf, AbsOf, OpOf, BoundOf, Const>;

struct FlatEquation {
  std::string var;
  FlatRule rule;
  // Enclosing binders the variable lives under (its context is the global
  // one extended by these); the solution is returned abstracted over them.
  std::size_t binders = 0;
  std::vector<std::string> binder_hints;
};

struct FlatSystem {
  Context context;
  std::vector<FlatEquation> equations;
};

using GraphSolution = std::map<std::string, TermGraph>;

// Throws InvariantError on undefined or doubly defined variables and on
// ill-formed constants.
void validate_flat_system(const FlatSystem& s);

// One graph node per equation variable (a Const splices a copy of its graph).
// Each solution is rooted at its variable, abstracted over the variable's
// binders, validated and minimized. Throws InvariantError with the witness
// path when the induced graph has an unbound index.
GraphSolution solve_flat_system(const FlatSystem& s);

}  // namespace hors
