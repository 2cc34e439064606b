#include "crsing/series_parse.hpp"

#include <cctype>
#include <string>

#include "crsing/errors.hpp"

namespace crs {

namespace {

class Parser {
 public:
  Parser(std::string_view text, SpacePtr space, int trunc, std::size_t line, std::size_t column)
      : text_(text), space_(std::move(space)), trunc_(trunc), line_(line), column_(column) {}

  Series parse() {
    skip_ws();
    if (at_end()) fail("empty series literal");
    Series out = expr();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected character '") + text_[pos_] + "'");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, column_ + pos_); }

  bool at_end() const { return pos_ >= text_.size(); }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char ch) {
    skip_ws();
    if (!at_end() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  Series constant(const GaussRational& v) const { return Series::constant(space_, trunc_, v); }

  Series expr() {
    Series acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Series term() {
    Series acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = multiply(acc, unary());
      } else if (accept('/')) {
        const std::size_t at = pos_;
        Series d = unary();
        if (d.degree() > 0) {
          pos_ = at;
          fail("division by a non-constant expression");
        }
        GaussRational c = d.constant_term();
        if (c.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        acc *= c.inverse();
      } else {
        return acc;
      }
    }
  }

  Series unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Series power() {
    Series base = primary();
    if (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a nonnegative integer exponent after '^'");
      const std::string digits(text_.substr(start, pos_ - start));
      if (digits.size() > 4) fail("exponent too large");
      return pow(base, static_cast<unsigned>(std::stoul(digits)));
    }
    return base;
  }

  Series primary() {
    skip_ws();
    if (at_end()) fail("unexpected end of literal");
    const char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      Series inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      const std::size_t start = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (!at_end() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
        fail("non-rational literal; write fractions as p/q");
      }
      return constant(GaussRational(mpq_class(std::string(text_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      const std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (auto idx = space_->index_of(name)) return Series::variable(space_, trunc_, *idx);
      if (name == "i") return constant(GaussRational::i());
      pos_ = start;
      fail("unknown variable '" + std::string(name) + "' for this input");
    }
    fail(std::string("unexpected character '") + ch + "'");
  }

  std::string_view text_;
  SpacePtr space_;
  int trunc_;
  std::size_t line_;
  std::size_t column_;
  std::size_t pos_ = 0;
};

}  // namespace

Series parse_series(std::string_view text, SpacePtr space, int trunc, std::size_t line, std::size_t column) {
  return Parser(text, std::move(space), trunc, line, column).parse();
}

GaussRational parse_constant(std::string_view text, std::size_t line, std::size_t column) {
  static const SpacePtr kEmpty = VarSpace::make({});
  Series s = parse_series(text, kEmpty, kExact, line, column);
  return s.constant_term();
}

}  // namespace crs
