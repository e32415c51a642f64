#include <cctype>

#include "splv/lexer.hpp"
#include "splv/varlang.hpp"

namespace splv::text {

namespace {

bool ident_start(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return ident_start(c) || c == '.'; }

}  // namespace

std::vector<Token> tokenize(std::string_view input, const std::string& source) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (input[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < input.size()) {
    char c = input[i];
    if (c == '#') {
      while (i < input.size() && input[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token tok{Tok::End, {}, line, col};
    auto two = input.substr(i, 2);
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < input.size() && ident_char(input[j])) ++j;
      tok.kind = Tok::Ident;
      tok.text = std::string(input.substr(i, j - i));
      advance(j - i);
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < input.size() && input[j] != '"' && input[j] != '\n') ++j;
      if (j >= input.size() || input[j] != '"') throw ParseError(source, line, col, "unterminated string");
      tok.kind = Tok::String;
      tok.text = std::string(input.substr(i + 1, j - i - 1));
      advance(j + 1 - i);
    } else if (two == "!=") {
      tok.kind = Tok::Neq, advance(2);
    } else if (two == "&&") {
      tok.kind = Tok::And, advance(2);
    } else if (two == "||") {
      tok.kind = Tok::Or, advance(2);
    } else if (two == "=>") {
      tok.kind = Tok::Implies, advance(2);
    } else if (two == "->") {
      tok.kind = Tok::Arrow, advance(2);
    } else {
      switch (c) {
        case '{': tok.kind = Tok::LBrace; break;
        case '}': tok.kind = Tok::RBrace; break;
        case '(': tok.kind = Tok::LParen; break;
        case ')': tok.kind = Tok::RParen; break;
        case ';': tok.kind = Tok::Semi; break;
        case ',': tok.kind = Tok::Comma; break;
        case '=': tok.kind = Tok::Eq; break;
        case '!': tok.kind = Tok::Not; break;
        default:
          throw ParseError(source, line, col, std::string("unexpected character '") + c + "'");
      }
      advance(1);
    }
    if (tok.kind != Tok::Ident && tok.kind != Tok::String) tok.text = describe(tok.kind);
    out.push_back(std::move(tok));
  }
  out.push_back(Token{Tok::End, "end of input", line, col});
  return out;
}

const char* describe(Tok kind) {
  switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::String: return "string";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::Eq: return "'='";
    case Tok::Neq: return "'!='";
    case Tok::Not: return "'!'";
    case Tok::And: return "'&&'";
    case Tok::Or: return "'||'";
    case Tok::Implies: return "'=>'";
    case Tok::Arrow: return "'->'";
    case Tok::End: return "end of input";
  }
  return "?";
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
  return tokens_[i];
}

const Token& TokenStream::next() {
  const Token& t = tokens_[pos_];
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool TokenStream::accept(Tok kind) {
  if (!at(kind)) return false;
  next();
  return true;
}

const Token& TokenStream::expect(Tok kind, std::string_view what) {
  if (!at(kind)) fail(peek(), "expected " + std::string(what) + ", found " + peek().text);
  return next();
}

void TokenStream::expect_word(std::string_view word) {
  if (!at_word(word)) fail(peek(), "expected '" + std::string(word) + "', found " + peek().text);
  next();
}

void TokenStream::fail(const Token& at, const std::string& message) const {
  throw ParseError(source_, at.line, at.column, message);
}

namespace {

// implies := or ( '=>' implies )?
// or      := and ( '||' and )*
// and     := unary ( '&&' unary )*
// unary   := '!' unary | '(' implies ')' | 'true' | 'false' | ident ('='|'!=') ident
Predicate parse_implies(TokenStream& ts);

Predicate parse_unary(TokenStream& ts) {
  if (ts.accept(Tok::Not)) return Predicate::negate(parse_unary(ts));
  if (ts.accept(Tok::LParen)) {
    Predicate p = parse_implies(ts);
    ts.expect(Tok::RParen, "')'");
    return p;
  }
  const Token& first = ts.expect(Tok::Ident, "a predicate");
  if (!ts.at(Tok::Eq) && !ts.at(Tok::Neq)) {
    if (first.text == "true") return Predicate::truth();
    if (first.text == "false") return Predicate::falsity();
    ts.fail(ts.peek(), "expected '=' or '!=' after '" + first.text + "'");
  }
  bool negated = ts.next().kind == Tok::Neq;
  const Token& rhs = ts.expect(Tok::Ident, "a value or variable");
  return Predicate::atom(Atom{first.text, rhs.text, negated, RhsKind::Unresolved});
}

Predicate parse_and(TokenStream& ts) {
  std::vector<Predicate> ops{parse_unary(ts)};
  while (ts.accept(Tok::And)) ops.push_back(parse_unary(ts));
  return ops.size() == 1 ? ops.front() : Predicate::conj(std::move(ops));
}

Predicate parse_or(TokenStream& ts) {
  std::vector<Predicate> ops{parse_and(ts)};
  while (ts.accept(Tok::Or)) ops.push_back(parse_and(ts));
  return ops.size() == 1 ? ops.front() : Predicate::disj(std::move(ops));
}

Predicate parse_implies(TokenStream& ts) {
  Predicate lhs = parse_or(ts);
  if (ts.accept(Tok::Implies)) return Predicate::implies(lhs, parse_implies(ts));
  return lhs;
}

}  // namespace

Predicate parse_predicate(TokenStream& ts) { return parse_implies(ts); }

Predicate resolve_at(const Predicate& p, const Scope& scope, const Token& where, const std::string& source) {
  try {
    return resolve(p, scope);
  } catch (const ScopeError& e) {
    throw ParseError(source, where.line, where.column, e.what());
  }
}

}  // namespace splv::text

namespace splv {

Predicate parse_predicate(std::string_view input, const std::string& source) {
  text::TokenStream ts(text::tokenize(input, source), source);
  Predicate p = text::parse_predicate(ts);
  if (!ts.at(text::Tok::End)) ts.fail(ts.peek(), "unexpected " + ts.peek().text + " after predicate");
  return p;
}

}  // namespace splv
