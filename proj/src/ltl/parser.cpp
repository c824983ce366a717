#include "mvtl/ltl/parser.hpp"

#include <cctype>
#include <optional>
#include <utility>

namespace mvtl::ltl {

SyntaxError::SyntaxError(const std::string& message, std::size_t position)
    : std::runtime_error("syntax error at position " + std::to_string(position) + ": " + message),
      position_(position) {}

UndeclaredAtomError::UndeclaredAtomError(std::string atom, std::size_t position)
    : std::runtime_error("undeclared atomic proposition '" + atom + "' at position " +
                         std::to_string(position)),
      atom_(std::move(atom)),
      position_(position) {}

namespace {

enum class Tok {
  End,
  LParen,
  RParen,
  Not,
  And,
  Or,
  Implies,
  Next,
  Until,
  Eventually,
  Always,
  True,
  False,
  Ident,
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Not: return "'!'";
    case Tok::And: return "'&&'";
    case Tok::Or: return "'||'";
    case Tok::Implies: return "'->'";
    case Tok::Next: return "'X'";
    case Tok::Until: return "'U'";
    case Tok::Eventually: return "'<>'";
    case Tok::Always: return "'[]'";
    case Tok::True: return "'true'";
    case Tok::False: return "'false'";
    case Tok::Ident: return "identifier";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::End;
  std::size_t pos = 0;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    Token t;
    t.pos = i_;
    if (i_ >= src_.size()) return t;
    const char c = src_[i_];
    auto two = [&](char a, char b) {
      return c == a && i_ + 1 < src_.size() && src_[i_ + 1] == b;
    };
    if (c == '(') { ++i_; t.kind = Tok::LParen; return t; }
    if (c == ')') { ++i_; t.kind = Tok::RParen; return t; }
    if (c == '!') { ++i_; t.kind = Tok::Not; return t; }
    if (two('&', '&')) { i_ += 2; t.kind = Tok::And; return t; }
    if (two('|', '|')) { i_ += 2; t.kind = Tok::Or; return t; }
    if (two('-', '>')) { i_ += 2; t.kind = Tok::Implies; return t; }
    if (two('<', '>')) { i_ += 2; t.kind = Tok::Eventually; return t; }
    if (two('[', ']')) { i_ += 2; t.kind = Tok::Always; return t; }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) {
        ++j;
      }
      t.text = std::string(src_.substr(i_, j - i_));
      i_ = j;
      if (t.text == "true") t.kind = Tok::True;
      else if (t.text == "false") t.kind = Tok::False;
      else if (t.text == "X") t.kind = Tok::Next;
      else if (t.text == "U") t.kind = Tok::Until;
      else t.kind = Tok::Ident;
      return t;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", i_);
  }

 private:
  std::string_view src_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  Parser(std::string_view src, const Alphabet& ap, std::vector<ParseWarning>* warnings)
      : lex_(src), ap_(ap), warnings_(warnings) {
    advance();
  }

  LtlAst parse() {
    LtlAst f = parse_implies();
    if (cur_.kind != Tok::End) {
      throw SyntaxError(std::string("unexpected ") + describe(cur_.kind), cur_.pos);
    }
    return f;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  bool accept(Tok k) {
    if (cur_.kind != k) return false;
    advance();
    return true;
  }

  LtlAst parse_implies() {
    LtlAst lhs = parse_or();
    if (accept(Tok::Implies)) return implies(std::move(lhs), parse_implies());
    return lhs;
  }

  LtlAst parse_or() {
    LtlAst lhs = parse_and();
    while (accept(Tok::Or)) lhs = or_(std::move(lhs), parse_and());
    return lhs;
  }

  LtlAst parse_and() {
    LtlAst lhs = parse_until();
    while (accept(Tok::And)) lhs = and_(std::move(lhs), parse_until());
    return lhs;
  }

  LtlAst parse_until() {
    LtlAst lhs = parse_unary();
    if (accept(Tok::Until)) return until(std::move(lhs), parse_until());
    return lhs;
  }

  LtlAst parse_unary() {
    const Token t = cur_;
    switch (t.kind) {
      case Tok::Not: advance(); return not_(parse_unary());
      case Tok::Eventually: advance(); return eventually(parse_unary());
      case Tok::Always: advance(); return always(parse_unary());
      case Tok::Next:
        advance();
        if (warnings_) {
          warnings_->push_back({t.pos, "next operator used; it has no continuous-time meaning and "
                                       "is interpreted as a discrete automaton step"});
        }
        return next(parse_unary());
      default: return parse_primary();
    }
  }

  LtlAst parse_primary() {
    const Token t = cur_;
    switch (t.kind) {
      case Tok::True: advance(); return LtlAst::truth();
      case Tok::False: advance(); return not_(LtlAst::truth());
      case Tok::Ident:
        if (!ap_.contains(t.text)) throw UndeclaredAtomError(t.text, t.pos);
        advance();
        return atom(t.text);
      case Tok::LParen: {
        advance();
        LtlAst inner = parse_implies();
        if (!accept(Tok::RParen)) {
          throw SyntaxError(std::string("expected ')' but found ") + describe(cur_.kind), cur_.pos);
        }
        return inner;
      }
      default:
        throw SyntaxError(std::string("expected a formula but found ") + describe(t.kind), t.pos);
    }
  }

  Lexer lex_;
  const Alphabet& ap_;
  std::vector<ParseWarning>* warnings_;
  Token cur_;
};

}  // namespace

LtlAst parse_ltl(std::string_view text, const Alphabet& ap, std::vector<ParseWarning>* warnings) {
  if (ap.size() == 0) throw std::invalid_argument("parse_ltl: empty atomic-proposition set");
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw SyntaxError("empty formula", 0);
  }
  return Parser(text, ap, warnings).parse();
}

}  // namespace mvtl::ltl
