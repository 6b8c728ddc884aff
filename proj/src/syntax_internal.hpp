#pragma once

// Lexer and unresolved term AST shared by the term, scheme, solution and
// model-ops readers.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hors/error.hpp"
#include "hors/term.hpp"

namespace hors::syntax {

enum class Tok {
  kIdent,
  kNumber,
  kElement,  // #i
  kBackslash,
  kDot,
  kAt,
  kLParen,
  kRParen,
  kLBrace,
  kRBrace,
  kLBracket,
  kRBracket,
  kComma,
  kSemicolon,
  kSlash,
  kEquals,
  kArrow,
  kBottom,
  kEnd,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  SourcePos pos;
};

std::string describe(Tok kind);

// Tokenizes the whole input up front. `//` starts a comment to end of line.
class Lexer {
 public:
  explicit Lexer(std::string_view text);

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool at(Tok kind) const { return peek().kind == kind; }
  bool accept(Tok kind);
  Token expect(Tok kind, const char* what);
  [[noreturn]] void fail(const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t cursor_ = 0;
};

// Term as written, before names are resolved.
struct RawTerm {
  enum class Kind { kIdent, kCall, kApp, kLam, kBottom };
  Kind kind = Kind::kBottom;
  std::string name;  // identifier, called symbol, or lambda binder
  std::vector<RawTerm> children;
  SourcePos pos;
};

RawTerm parse_raw_term(Lexer& lex);

// Name environment for resolution. Priority: innermost binder, then context
// variable, then signature symbol.
struct Scope {
  const Signature* sig = nullptr;
  const Context* ctx = nullptr;
  // Binder names visible at the top of the term, outermost first.
  std::vector<std::string> outer_binders;
  // For names in `ctx` that need enclosing binders at every use (nonterminals
  // with parameters): how many.
  std::function<std::size_t(const std::string&)> required_binders;
};

Term resolve(const RawTerm& raw, const Scope& scope);

}  // namespace hors::syntax
