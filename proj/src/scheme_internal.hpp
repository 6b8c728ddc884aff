#pragma once

#include <string>
#include <vector>

#include "hors/scheme.hpp"
#include "syntax_internal.hpp"

namespace hors::detail {

struct RawRule {
  syntax::Token name;
  std::vector<std::string> params;
  syntax::RawTerm body;
};

bool at_rule_start(const syntax::Lexer& lex);

// Rules up to (not including) `terminator`.
std::vector<RawRule> parse_raw_rules(syntax::Lexer& lex, syntax::Tok terminator);

// Resolves rule bodies over ctx + rule names. With `declared`, it fixes the
// nonterminal order and every rule must be declared.
RecursionScheme resolve_rules(const Signature& sig, const Context& ctx,
                              const std::vector<RawRule>& raw,
                              const std::vector<syntax::Token>* declared);

}  // namespace hors::detail
