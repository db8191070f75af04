// Recursive-descent parser for polynomial expressions.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' nat)?
//   base   := ident | rational | '(' expr ')' | '-' base
//
// Multiplication is always explicit; rationals are written a/b.
#pragma once

#include <cctype>
#include <string>

#include "valdeg/polynomial.hpp"

namespace valdeg {

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, size_t pos)
      : Error(msg + " at position " + std::to_string(pos)), pos(pos) {}
  size_t pos;
};

template <class K>
class ExprParser {
 public:
  ExprParser(std::string text, RingPtr ring) : text_(std::move(text)), ring_(std::move(ring)) {}

  Polynomial<K> parse() {
    Polynomial<K> p = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return p;
  }

 private:
  Polynomial<K> parse_expr() {
    Polynomial<K> acc = parse_term();
    while (true) {
      skip_ws();
      if (peek() == '+') {
        ++pos_;
        acc = acc + parse_term();
      } else if (peek() == '-') {
        ++pos_;
        acc = acc - parse_term();
      } else {
        return acc;
      }
    }
  }

  Polynomial<K> parse_term() {
    Polynomial<K> acc = parse_factor();
    while (true) {
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        acc = acc * parse_factor();
      } else {
        // Adjacent operands without '*' are a syntax error, not implicit
        // multiplication; report them eagerly for a clear message.
        char c = peek();
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '(')
          throw ParseError("missing '*' (implicit multiplication is not allowed)", pos_);
        return acc;
      }
    }
  }

  Polynomial<K> parse_factor() {
    Polynomial<K> base = parse_base();
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      if (peek() == '-') throw ParseError("negative exponent", pos_);
      size_t start = pos_;
      std::string digits = lex_digits();
      if (digits.empty()) throw ParseError("expected nonnegative integer exponent", start);
      unsigned long e;
      try {
        e = std::stoul(digits);
      } catch (...) {
        throw ParseError("exponent out of range", start);
      }
      if (e > 100000) throw ParseError("exponent out of range", start);
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  Polynomial<K> parse_base() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      ++pos_;
      Polynomial<K> p = parse_expr();
      skip_ws();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return p;
    }
    if (c == '-') {
      ++pos_;
      return -parse_base();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_rational_literal();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      std::string name = lex_ident();
      int idx = ring_->var_index(name);
      if (idx < 0) throw ParseError("unknown variable '" + name + "'", start);
      return Polynomial<K>::variable(ring_, static_cast<size_t>(idx));
    }
    throw ParseError(c ? std::string("unexpected character '") + c + "'" : "unexpected end of input",
                     pos_);
  }

  Polynomial<K> parse_rational_literal() {
    size_t start = pos_;
    std::string num = lex_digits();
    if (num.empty()) throw ParseError("expected number", start);
    std::string lit = num;
    if (peek() == '/') {
      ++pos_;
      std::string den = lex_digits();
      if (den.empty()) throw ParseError("expected denominator", pos_);
      lit += "/" + den;
    }
    Rational q = parse_rational(lit);
    return Polynomial<K>::constant(ring_, K::from_rational(q, ring_->field()));
  }

  std::string lex_digits() {
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }
  std::string lex_ident() {
    size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_'))
      ++pos_;
    return text_.substr(start, pos_ - start);
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  std::string text_;
  RingPtr ring_;
  size_t pos_ = 0;
};

template <class K>
Polynomial<K> parse_poly(const std::string& text, const RingPtr& ring) {
  return ExprParser<K>(text, ring).parse();
}

}  // namespace valdeg
