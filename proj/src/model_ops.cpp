#include "hors/model_ops.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hors/error.hpp"
#include "hors/semantics.hpp"
#include "syntax_internal.hpp"

namespace hors {

using syntax::Lexer;
using syntax::Tok;
using syntax::Token;

TowerSpec parse_tower_spec(std::string_view text) {
  const std::string prefix = "tower:";
  std::string s(text);
  if (s.rfind(prefix, 0) != 0 || s.size() == prefix.size() ||
      s.find_first_not_of("0123456789", prefix.size()) != std::string::npos || s.size() > prefix.size() + 9) {
    throw ModelError("model spec must look like 'tower:N', got '" + s + "'");
  }
  TowerSpec spec;
  spec.rank = std::stoul(s.substr(prefix.size()));
  return spec;
}

namespace {

struct OpDecl {
  Token name;
  std::string shorthand;
  std::vector<std::pair<std::vector<Token>, Token>> rows;
  bool table = false;
};

std::size_t to_size(const Token& t) {
  if (t.text.size() > 9) throw ParseError(t.pos, "number too large");
  return std::stoul(t.text);
}

OpTable build_op(const OpDecl& d, std::size_t arity, const Model& m) {
  const FinitePoset& dom = m.domain();
  std::size_t n = m.size();
  OpTable op;
  op.arity = arity;
  std::size_t cells = table_cells(m, arity);
  op.values.assign(cells, dom.bottom());
  const std::string& sym = d.name.text;
  if (!d.table) {
    const std::string& k = d.shorthand;
    if ((k == "join" || k == "meet") && arity != 2) {
      throw ParseError(d.name.pos, "'" + k + "' needs a binary symbol, '" + sym + "' has arity " + std::to_string(arity));
    }
    if (k == "id" && arity != 1) {
      throw ParseError(d.name.pos, "'id' needs a unary symbol, '" + sym + "' has arity " + std::to_string(arity));
    }
    for (std::size_t row = 0; row < cells; ++row) {
      auto args = tuple_at(row, arity, n);
      if (k == "bot") {
        op.values[row] = dom.bottom();
      } else if (k == "id") {
        op.values[row] = args[0];
      } else {
        auto v = k == "join" ? dom.join(args[0], args[1]) : dom.meet(args[0], args[1]);
        if (!v) {
          throw ModelError("'" + k + "' of " + element_name(args[0]) + " and " + element_name(args[1]) +
                           " does not exist in this model");
        }
        op.values[row] = *v;
      }
    }
    return op;
  }
  std::vector<bool> seen(cells, false);
  for (const auto& [inputs, output] : d.rows) {
    if (inputs.size() != arity) {
      throw ParseError(output.pos, "row of '" + sym + "' has " + std::to_string(inputs.size()) +
                                       " inputs, expected " + std::to_string(arity));
    }
    std::vector<Element> args;
    try {
      for (const auto& t : inputs) args.push_back(parse_element(t.text, n));
      Element v = parse_element(output.text, n);
      std::size_t row = tuple_index(args, n);
      if (seen[row]) throw ParseError(output.pos, "duplicate row in table of '" + sym + "'");
      seen[row] = true;
      op.values[row] = v;
    } catch (const ModelError& e) {
      throw ParseError(output.pos, e.what());
    }
  }
  for (std::size_t row = 0; row < cells; ++row) {
    if (!seen[row]) {
      std::string tuple;
      for (Element e : tuple_at(row, arity, n)) tuple += " " + element_name(e);
      throw ParseError(d.name.pos, "table of '" + sym + "' is not total: no row for" + (tuple.empty() ? " ()" : tuple));
    }
  }
  ContextMap as_map{Context([&] {
                      std::vector<std::string> names;
                      for (std::size_t i = 0; i < arity; ++i) names.push_back("a" + std::to_string(i));
                      return names;
                    }()),
                    op.values};
  if (!is_monotone(as_map, m)) throw ModelError("table of '" + sym + "' is not monotone");
  return op;
}

}  // namespace

Model load_model(std::string_view ops_text, const Signature& sig, const std::optional<TowerSpec>& tower) {
  Lexer lex(ops_text);
  Token kw = lex.expect(Tok::kIdent, "'model'");
  if (kw.text != "model") throw ParseError(kw.pos, "expected 'model', found '" + kw.text + "'");
  Token kind = lex.expect(Tok::kIdent, "'tower'");
  if (kind.text != "tower") throw ParseError(kind.pos, "only 'tower' models are supported");
  TowerSpec spec;
  spec.rank = to_size(lex.expect(Tok::kNumber, "tower rank"));
  if (lex.at(Tok::kIdent) && lex.peek().text == "base") {
    lex.next();
    spec.base = to_size(lex.expect(Tok::kNumber, "base chain length"));
  }
  if (tower && (tower->rank != spec.rank || (tower->base != spec.base))) {
    throw ModelError("ops file describes tower " + std::to_string(spec.rank) + " but tower:" +
                     std::to_string(tower->rank) + " was requested");
  }

  std::map<std::string, OpDecl> decls;
  while (!lex.at(Tok::kEnd)) {
    Token op = lex.expect(Tok::kIdent, "'op'");
    if (op.text != "op") throw ParseError(op.pos, "expected 'op', found '" + op.text + "'");
    OpDecl d;
    d.name = lex.expect(Tok::kIdent, "symbol name");
    if (lex.accept(Tok::kEquals)) {
      Token k = lex.expect(Tok::kIdent, "join, meet, bot or id");
      static const std::set<std::string> kinds = {"join", "meet", "bot", "id"};
      if (!kinds.count(k.text)) throw ParseError(k.pos, "unknown shorthand '" + k.text + "'");
      d.shorthand = k.text;
    } else {
      lex.expect(Tok::kLBrace, "'=' or '{'");
      d.table = true;
      while (!lex.accept(Tok::kRBrace)) {
        std::vector<Token> inputs;
        while (lex.at(Tok::kElement)) inputs.push_back(lex.next());
        lex.expect(Tok::kArrow, "'->'");
        Token out = lex.expect(Tok::kElement, "result element");
        d.rows.emplace_back(std::move(inputs), out);
        if (!lex.accept(Tok::kSemicolon) && !lex.at(Tok::kRBrace)) lex.fail("expected ';' or '}' after a table row");
      }
    }
    if (!sig.contains(d.name.text)) throw ParseError(d.name.pos, "'" + d.name.text + "' is not in the signature");
    std::string key = d.name.text;
    if (!decls.emplace(key, std::move(d)).second) {
      throw ParseError(op.pos, "duplicate op for '" + key + "'");
    }
  }

  Model m = build_tower(spec.rank, spec.base);
  for (const auto& [sym, arity] : sig.symbols()) {
    auto it = decls.find(sym);
    if (it == decls.end()) throw ModelError("ops file has no table for symbol '" + sym + "'");
    m.ops().emplace(sym, build_op(it->second, arity, m));
  }
  return m;
}

Model load_model(const TowerSpec& tower, const Signature& sig) {
  if (!sig.empty()) throw ModelError("the signature has operations; an ops file is required");
  return build_tower(tower.rank, tower.base);
}

}  // namespace hors
