#include "syntax_internal.hpp"

#include <algorithm>
#include <cctype>

namespace hors::syntax {

std::string describe(Tok kind) {
  switch (kind) {
    case Tok::kIdent: return "identifier";
    case Tok::kNumber: return "number";
    case Tok::kElement: return "element name";
    case Tok::kBackslash: return "'\\'";
    case Tok::kDot: return "'.'";
    case Tok::kAt: return "'@'";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kLBrace: return "'{'";
    case Tok::kRBrace: return "'}'";
    case Tok::kLBracket: return "'['";
    case Tok::kRBracket: return "']'";
    case Tok::kComma: return "','";
    case Tok::kSemicolon: return "';'";
    case Tok::kSlash: return "'/'";
    case Tok::kEquals: return "'='";
    case Tok::kArrow: return "'->'";
    case Tok::kBottom: return "'_|_'";
    case Tok::kEnd: return "end of input";
  }
  return "token";
}

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

Lexer::Lexer(std::string_view text) {
  std::size_t i = 0;
  SourcePos pos;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
        ++pos.column;
      }
    }
  };
  auto starts = [&](std::string_view s) { return text.substr(i, s.size()) == s; };
  auto push = [&](Tok kind, std::size_t len) {
    tokens_.push_back({kind, std::string(text.substr(i, len)), pos});
    advance(len);
  };

  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
    } else if (starts("//")) {
      while (i < text.size() && text[i] != '\n') advance(1);
    } else if (starts("_|_")) {
      push(Tok::kBottom, 3);
    } else if (starts("⊥")) {  // ⊥
      push(Tok::kBottom, 3);
    } else if (starts("λ")) {  // λ
      push(Tok::kBackslash, 2);
    } else if (starts("->")) {
      push(Tok::kArrow, 2);
    } else if (ident_start(c)) {
      std::size_t n = 1;
      while (i + n < text.size() && ident_char(text[i + n])) ++n;
      push(Tok::kIdent, n);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t n = 1;
      while (i + n < text.size() && std::isdigit(static_cast<unsigned char>(text[i + n]))) ++n;
      push(Tok::kNumber, n);
    } else if (c == '#') {
      std::size_t n = 1;
      while (i + n < text.size() && std::isdigit(static_cast<unsigned char>(text[i + n]))) ++n;
      if (n == 1) throw ParseError(pos, "expected digits after '#'");
      push(Tok::kElement, n);
    } else {
      Tok kind;
      switch (c) {
        case '\\': kind = Tok::kBackslash; break;
        case '.': kind = Tok::kDot; break;
        case '@': kind = Tok::kAt; break;
        case '(': kind = Tok::kLParen; break;
        case ')': kind = Tok::kRParen; break;
        case '{': kind = Tok::kLBrace; break;
        case '}': kind = Tok::kRBrace; break;
        case '[': kind = Tok::kLBracket; break;
        case ']': kind = Tok::kRBracket; break;
        case ',': kind = Tok::kComma; break;
        case ';': kind = Tok::kSemicolon; break;
        case '/': kind = Tok::kSlash; break;
        case '=': kind = Tok::kEquals; break;
        default:
          throw ParseError(pos, std::string("unexpected character '") + c + "'");
      }
      push(kind, 1);
    }
  }
  tokens_.push_back({Tok::kEnd, "", pos});
}

const Token& Lexer::peek(std::size_t ahead) const {
  return tokens_[std::min(cursor_ + ahead, tokens_.size() - 1)];
}

Token Lexer::next() {
  Token t = peek();
  if (cursor_ < tokens_.size() - 1) ++cursor_;
  return t;
}

bool Lexer::accept(Tok kind) {
  if (!at(kind)) return false;
  next();
  return true;
}

Token Lexer::expect(Tok kind, const char* what) {
  if (!at(kind)) {
    const auto& t = peek();
    std::string found = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.pos, std::string("expected ") + what + ", found " + found);
  }
  return next();
}

void Lexer::fail(const std::string& message) const {
  throw ParseError(peek().pos, message);
}

namespace {

RawTerm parse_app(Lexer& lex);

RawTerm parse_lambda(Lexer& lex) {
  Token lam = lex.expect(Tok::kBackslash, "'\\'");
  std::vector<Token> binders;
  binders.push_back(lex.expect(Tok::kIdent, "binder name"));
  while (lex.at(Tok::kIdent)) binders.push_back(lex.next());
  lex.expect(Tok::kDot, "'.' after binders");
  RawTerm body = parse_raw_term(lex);
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
    RawTerm r;
    r.kind = RawTerm::Kind::kLam;
    r.name = it->text;
    r.pos = it == binders.rend() - 1 ? lam.pos : it->pos;
    r.children.push_back(std::move(body));
    body = std::move(r);
  }
  return body;
}

RawTerm parse_atom(Lexer& lex) {
  const Token& t = lex.peek();
  switch (t.kind) {
    case Tok::kBottom: {
      RawTerm r;
      r.kind = RawTerm::Kind::kBottom;
      r.pos = lex.next().pos;
      return r;
    }
    case Tok::kLParen: {
      lex.next();
      RawTerm inner = parse_raw_term(lex);
      lex.expect(Tok::kRParen, "')'");
      return inner;
    }
    case Tok::kIdent: {
      Token id = lex.next();
      RawTerm r;
      r.name = id.text;
      r.pos = id.pos;
      if (lex.accept(Tok::kLParen)) {
        r.kind = RawTerm::Kind::kCall;
        r.children.push_back(parse_raw_term(lex));
        while (lex.accept(Tok::kComma)) r.children.push_back(parse_raw_term(lex));
        lex.expect(Tok::kRParen, "')' closing argument list");
      } else {
        r.kind = RawTerm::Kind::kIdent;
      }
      return r;
    }
    default: {
      std::string found = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
      throw ParseError(t.pos, "expected a term, found " + found);
    }
  }
}

RawTerm parse_app(Lexer& lex) {
  RawTerm left = parse_atom(lex);
  while (lex.at(Tok::kAt)) {
    Token at = lex.next();
    // A trailing lambda operand extends as far right as possible.
    RawTerm right = lex.at(Tok::kBackslash) ? parse_lambda(lex) : parse_atom(lex);
    RawTerm r;
    r.kind = RawTerm::Kind::kApp;
    r.pos = at.pos;
    r.children.push_back(std::move(left));
    r.children.push_back(std::move(right));
    left = std::move(r);
  }
  return left;
}

}  // namespace

RawTerm parse_raw_term(Lexer& lex) {
  if (lex.at(Tok::kBackslash)) return parse_lambda(lex);
  return parse_app(lex);
}

namespace {

class Resolver {
 public:
  explicit Resolver(const Scope& scope) : scope_(scope), binders_(scope.outer_binders) {}

  Term run(const RawTerm& r) {
    switch (r.kind) {
      case RawTerm::Kind::kBottom:
        return Term::bottom();
      case RawTerm::Kind::kApp:
        return Term::app(run(r.children[0]), run(r.children[1]));
      case RawTerm::Kind::kLam: {
        binders_.push_back(r.name);
        Term body = run(r.children[0]);
        binders_.pop_back();
        return Term::abs(std::move(body), r.name);
      }
      case RawTerm::Kind::kIdent:
        return ident(r);
      case RawTerm::Kind::kCall:
        return call(r);
    }
    return Term::bottom();
  }

 private:
  std::optional<std::size_t> bound_index(const std::string& name) const {
    for (std::size_t i = binders_.size(); i-- > 0;) {
      if (binders_[i] == name) return binders_.size() - 1 - i;
    }
    return std::nullopt;
  }

  bool is_context_var(const std::string& name) const {
    return scope_.ctx != nullptr && scope_.ctx->contains(name);
  }

  Term ident(const RawTerm& r) {
    if (auto i = bound_index(r.name)) return Term::bound_var(*i);
    if (is_context_var(r.name)) {
      if (scope_.required_binders) {
        auto need = scope_.required_binders(r.name);
        if (need > binders_.size()) {
          throw ParseError(r.pos, "'" + r.name + "' needs " + std::to_string(need) +
                                      " enclosing binders, found " +
                                      std::to_string(binders_.size()));
        }
      }
      return Term::free_var(r.name);
    }
    if (scope_.sig != nullptr) {
      if (auto arity = scope_.sig->arity(r.name)) {
        if (*arity != 0) {
          throw ParseError(r.pos, "arity mismatch: '" + r.name + "' expects " +
                                      std::to_string(*arity) + " arguments, got 0");
        }
        return Term::op(r.name, {});
      }
    }
    throw ParseError(r.pos, "unknown identifier '" + r.name + "'");
  }

  Term call(const RawTerm& r) {
    if (bound_index(r.name) || is_context_var(r.name)) {
      throw ParseError(r.pos, "'" + r.name +
                                  "' is a variable and cannot take an argument list; use '@'");
    }
    auto arity = scope_.sig != nullptr ? scope_.sig->arity(r.name) : std::nullopt;
    if (!arity) throw ParseError(r.pos, "unknown identifier '" + r.name + "'");
    if (*arity != r.children.size()) {
      throw ParseError(r.pos, "arity mismatch: '" + r.name + "' expects " +
                                  std::to_string(*arity) + " arguments, got " +
                                  std::to_string(r.children.size()));
    }
    std::vector<Term> args;
    for (const auto& c : r.children) args.push_back(run(c));
    return Term::op(r.name, std::move(args));
  }

  const Scope& scope_;
  std::vector<std::string> binders_;
};

}  // namespace

Term resolve(const RawTerm& raw, const Scope& scope) { return Resolver(scope).run(raw); }

}  // namespace hors::syntax
