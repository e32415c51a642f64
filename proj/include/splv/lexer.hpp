#pragma once

// Tokenizer shared by the predicate, model and manifest readers.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "splv/errors.hpp"
#include "splv/varlang.hpp"

namespace splv::text {

enum class Tok {
  Ident,   // [A-Za-z0-9_][A-Za-z0-9_.]*
  String,  // "..."
  LBrace, RBrace, LParen, RParen, Semi, Comma,
  Eq, Neq, Not, And, Or, Implies, Arrow,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

/// Splits `input` into tokens; `#` starts a comment running to end of line.
std::vector<Token> tokenize(std::string_view input, const std::string& source);

const char* describe(Tok kind);

/// Cursor over a token vector with error reporting.
class TokenStream {
 public:
  TokenStream(std::vector<Token> tokens, std::string source)
      : tokens_(std::move(tokens)), source_(std::move(source)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_word(std::string_view word) const { return peek().kind == Tok::Ident && peek().text == word; }
  bool accept(Tok kind);
  const Token& expect(Tok kind, std::string_view what);
  void expect_word(std::string_view word);

  [[noreturn]] void fail(const Token& at, const std::string& message) const;
  const std::string& source() const { return source_; }
  std::size_t position() const { return pos_; }

 private:
  std::vector<Token> tokens_;
  std::string source_;
  std::size_t pos_ = 0;
};

/// Parses one predicate from the stream, stopping at the first token that cannot
/// continue it. Atoms come back unresolved.
Predicate parse_predicate(TokenStream& ts);

/// Resolves `p` against `scope`, converting a ScopeError into a ParseError at `where`.
Predicate resolve_at(const Predicate& p, const Scope& scope, const Token& where, const std::string& source);

}  // namespace splv::text
