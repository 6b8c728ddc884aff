#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hors {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

// Syntax errors and identifier-resolution failures in any of the text formats.
class ParseError : public Error {
 public:
  ParseError(SourcePos pos, const std::string& message)
      : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) +
              ": " + message),
        pos_(pos) {}

  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

// A value violates a structural invariant (context mismatch, partial map,
// ill-formed term or graph).
class InvariantError : public Error {
 public:
  using Error::Error;
};

// A recursion scheme was rejected by the guardedness check.
class UnguardedError : public Error {
 public:
  UnguardedError(const std::string& nonterminal)
      : Error("scheme is unguarded at nonterminal '" + nonterminal + "'"),
        nonterminal_(nonterminal) {}

  const std::string& nonterminal() const { return nonterminal_; }

 private:
  std::string nonterminal_;
};

// Model construction or evaluation failed (missing operation table,
// tabulation budget exceeded, non-monotone table).
class ModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace hors
