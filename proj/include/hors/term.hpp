#pragma once

// Finite lambda-Sigma-terms in context.
//
// Bound variables are nameless: a BoundVar carries its distance to the binding
// abstraction (innermost = 0). Free variables stay named and are the only
// positions touched by renaming and substitution, so neither operation can
// capture. Abstractions keep the source name as a display hint that never
// takes part in equality.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hors {

// Reserved tokens of the term grammar; never valid symbol or variable names.
bool is_reserved_name(const std::string& name);
bool is_identifier(const std::string& name);

class Signature {
 public:
  Signature() = default;

  // Throws InvariantError on duplicates and reserved or malformed names.
  void add(const std::string& name, std::size_t arity);

  bool contains(const std::string& name) const { return symbols_.count(name) != 0; }
  std::optional<std::size_t> arity(const std::string& name) const;
  const std::map<std::string, std::size_t>& symbols() const { return symbols_; }
  bool empty() const { return symbols_.empty(); }

  bool operator==(const Signature&) const = default;

 private:
  std::map<std::string, std::size_t> symbols_;
};

// Ordered set of free-variable names. The order fixes coordinate order of
// valuation tuples and is significant for equality.
class Context {
 public:
  Context() = default;
  explicit Context(std::vector<std::string> names);

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  bool contains(const std::string& name) const;
  std::optional<std::size_t> position(const std::string& name) const;

  // This context followed by `more`; throws on clashes.
  Context extended(const std::vector<std::string>& more) const;

  bool operator==(const Context&) const = default;

 private:
  std::vector<std::string> names_;
};

enum class TermKind { kFreeVar, kBoundVar, kApp, kAbs, kOp, kBottom };

// Immutable, shared term node handle. Copies are cheap and share structure.
class Term {
 public:
  // Bottom.
  Term();

  static Term free_var(std::string name);
  static Term bound_var(std::size_t index);
  static Term app(Term fun, Term arg);
  static Term abs(Term body, std::string hint = {});
  static Term op(std::string symbol, std::vector<Term> args);
  static Term bottom();

  TermKind kind() const;
  bool is(TermKind k) const { return kind() == k; }

  // FreeVar name or Op symbol.
  const std::string& name() const;
  // Display hint of an Abs; may be empty.
  const std::string& hint() const;
  std::size_t index() const;
  const std::vector<Term>& children() const;

  const Term& fun() const { return children()[0]; }
  const Term& arg() const { return children()[1]; }
  const Term& body() const { return children()[0]; }

  // Address of the shared node; equal handles share a node.
  const void* identity() const { return node_.get(); }

  struct Node;

 private:
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

// Alpha-equivalence, which in the nameless representation is structural
// equality ignoring display hints. Shared subterms are compared once, so
// heavily shared unfoldings compare in time linear in their node count.
bool alpha_equal(const Term& t, const Term& u);
inline bool operator==(const Term& t, const Term& u) { return alpha_equal(t, u); }

// Checked variant: both terms must live in the same context.
bool alpha_eq_finite(const Term& t, const Context& t_ctx, const Term& u,
                     const Context& u_ctx);

// Throws InvariantError unless `t` is well formed over `ctx`: bound indices
// closed under `outer_binders` extra enclosing abstractions, free variables in
// `ctx`, operation arities per `sig`.
void check_term(const Term& t, const Signature& sig, const Context& ctx,
                std::size_t outer_binders = 0);

using Renaming = std::map<std::string, std::string>;
using Substitution = std::map<std::string, Term>;

// Relabels every free variable x of `t` (over `from`) to gamma(x) (in `to`).
Term rename(const Term& t, const Context& from, const Renaming& gamma,
            const Context& to);

// Simultaneous substitution of sigma(x) for every free x. `sigma` must be
// total on `from`; the inserted terms must be index-closed.
Term substitute(const Term& t, const Context& from, const Substitution& sigma);

// Replaces every node at depth k by Bottom (root at depth 0).
Term cut(const Term& t, std::size_t k);

// Depth of the deepest node; a leaf has depth 0.
std::size_t depth(const Term& t);
// Number of nodes of the tree (shared subterms counted per occurrence).
std::size_t size(const Term& t);

std::set<std::string> free_vars(const Term& t);

// Number of enclosing abstractions `t` needs for its bound indices to be
// closed; 0 for an index-closed term.
std::size_t open_binders(const Term& t);

}  // namespace hors
