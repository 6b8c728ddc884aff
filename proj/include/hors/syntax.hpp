#pragma once

// Text form of finite terms.
//
//   term := lam | app
//   lam  := "\" ident+ "." term
//   app  := atom ("@" atom)*            (left associative)
//   atom := ident | ident "(" term ("," term)* ")" | "(" term ")" | "_|_"
//
// An identifier resolves to the innermost enclosing binder of that name, else
// to a context variable, else to a signature symbol (nullary symbols are
// written bare, others need their exact argument list). As a convenience the
// last operand of an application may be an unparenthesized lambda.

#include <string>
#include <string_view>
#include <vector>

#include "hors/term.hpp"

namespace hors {

// Throws ParseError (with line:column) on syntax, resolution and arity errors.
Term parse_term(std::string_view text, const Signature& sig, const Context& ctx);

// Parses `text` beneath enclosing binders named `outer_binders` (outermost
// first); the result may refer to them with open indices.
Term parse_term_in_scope(std::string_view text, const Signature& sig,
                         const Context& ctx,
                         const std::vector<std::string>& outer_binders);

// Binder names come from display hints when that cannot capture, otherwise
// from x0, x1, ... skipping context names, symbols and enclosing binders.
std::string print_term(const Term& t, const Context& ctx, const Signature& sig = {});

struct ScopedText {
  std::vector<std::string> binders;  // chosen names for the outer binders
  std::string text;
};

// Prints `t` beneath `outer_hints.size()` enclosing binders, choosing their
// names first.
ScopedText print_term_in_scope(const Term& t, const Context& ctx, const Signature& sig,
                               const std::vector<std::string>& outer_hints);

}  // namespace hors
