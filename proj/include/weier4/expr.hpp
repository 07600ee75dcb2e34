#pragma once

// Holomorphic expressions in one complex variable z, expanded into Taylor
// series.
//
// Grammar (precedence low to high):
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('-' | '+') unary | power
//   power  := atom ('^' ['-' | '+'] integer)?
//   atom   := number ['i'] | 'i' | 'z' | 'pi' | func '(' expr ')' | '(' expr ')'
//   func   := exp | cosh | sinh | cos | sin | log | sqrt
// Whitespace is insignificant. Integer exponents are limited to |n| <= 16.

#include <cctype>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "weier4/series.hpp"

namespace weier4 {

inline constexpr int kMaxExponent = 16;

struct HoloExpr {
  enum class Kind { literal, variable, add, sub, mul, div, neg, pow, call };

  Kind kind = Kind::literal;
  Complex value{};       // literal
  int exponent = 0;      // pow
  std::string function;  // call
  std::size_t offset = 0;
  std::vector<std::unique_ptr<HoloExpr>> args;
};

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view src) : src_(src) {}

  std::unique_ptr<HoloExpr> parse() {
    auto e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  using Ptr = std::unique_ptr<HoloExpr>;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::SyntaxError, "syntax error at offset " + std::to_string(pos_) + ": " + msg, pos_);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  static Ptr node(HoloExpr::Kind k, std::size_t at) {
    auto n = std::make_unique<HoloExpr>();
    n->kind = k;
    n->offset = at;
    return n;
  }

  static Ptr binary(HoloExpr::Kind k, Ptr lhs, Ptr rhs, std::size_t at) {
    auto n = node(k, at);
    n->args.push_back(std::move(lhs));
    n->args.push_back(std::move(rhs));
    return n;
  }

  Ptr expr() {
    Ptr lhs = term();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('+')) lhs = binary(HoloExpr::Kind::add, std::move(lhs), term(), at);
      else if (accept('-')) lhs = binary(HoloExpr::Kind::sub, std::move(lhs), term(), at);
      else return lhs;
    }
  }

  Ptr term() {
    Ptr lhs = unary();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('*')) lhs = binary(HoloExpr::Kind::mul, std::move(lhs), unary(), at);
      else if (accept('/')) lhs = binary(HoloExpr::Kind::div, std::move(lhs), unary(), at);
      else return lhs;
    }
  }

  Ptr unary() {
    skip_ws();
    const std::size_t at = pos_;
    if (accept('-')) {
      auto n = node(HoloExpr::Kind::neg, at);
      n->args.push_back(unary());
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  Ptr power() {
    Ptr base = atom();
    skip_ws();
    const std::size_t at = pos_;
    if (!accept('^')) return base;
    skip_ws();
    int sign = 1;
    if (accept('-')) sign = -1;
    else accept('+');
    skip_ws();
    const std::size_t digits = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (digits == pos_) {
      pos_ = digits;
      fail("expected an integer exponent");
    }
    const long n = std::strtol(std::string(src_.substr(digits, pos_ - digits)).c_str(), nullptr, 10);
    if (n > kMaxExponent) {
      pos_ = digits;
      fail("exponent exceeds " + std::to_string(kMaxExponent));
    }
    auto p = node(HoloExpr::Kind::pow, at);
    p->exponent = sign * static_cast<int>(n);
    p->args.push_back(std::move(base));
    return p;
  }

  Ptr atom() {
    skip_ws();
    const std::size_t at = pos_;
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char ch = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      std::string id;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        id += src_[pos_++];
      if (id == "z") return node(HoloExpr::Kind::variable, at);
      if (id == "i" || id == "pi") {
        auto n = node(HoloExpr::Kind::literal, at);
        n->value = id == "i" ? Complex(0.0, 1.0) : Complex(std::numbers::pi, 0.0);
        return n;
      }
      static const char* const kFunctions[] = {"exp", "cosh", "sinh", "cos", "sin", "log", "sqrt"};
      for (const char* f : kFunctions) {
        if (id == f) {
          auto n = node(HoloExpr::Kind::call, at);
          n->function = id;
          expect('(');
          n->args.push_back(expr());
          expect(')');
          return n;
        }
      }
      throw Error(Errc::UnknownIdentifier, "unknown identifier '" + id + "' at offset " + std::to_string(at), at);
    }
    if (accept('(')) {
      Ptr e = expr();
      expect(')');
      return e;
    }
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  Ptr number() {
    const std::size_t at = pos_;
    const std::string rest(src_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    auto n = node(HoloExpr::Kind::literal, at);
    n->value = v;
    // Imaginary literal: "2i" or "2 i".
    const std::size_t save = pos_;
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == 'i' &&
        (pos_ + 1 == src_.size() || !std::isalnum(static_cast<unsigned char>(src_[pos_ + 1])))) {
      ++pos_;
      n->value = Complex(0.0, v);
    } else {
      pos_ = save;
    }
    return n;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::unique_ptr<HoloExpr> parse_expr(std::string_view src) { return detail::ExprParser(src).parse(); }

inline TaylorSeries expand(const HoloExpr& e, Complex base, int order) {
  using K = HoloExpr::Kind;
  switch (e.kind) {
    case K::literal: return TaylorSeries::constant(e.value, order, base);
    case K::variable: return TaylorSeries::variable(order, base);
    case K::add: return expand(*e.args[0], base, order) + expand(*e.args[1], base, order);
    case K::sub: return expand(*e.args[0], base, order) - expand(*e.args[1], base, order);
    case K::mul: return expand(*e.args[0], base, order) * expand(*e.args[1], base, order);
    case K::div: return expand(*e.args[0], base, order) / expand(*e.args[1], base, order);
    case K::neg: return -expand(*e.args[0], base, order);
    case K::pow: return pow(expand(*e.args[0], base, order), e.exponent);
    case K::call: {
      const TaylorSeries a = expand(*e.args[0], base, order);
      if (e.function == "exp") return exp(a);
      if (e.function == "cosh") return cosh(a);
      if (e.function == "sinh") return sinh(a);
      if (e.function == "cos") return cos(a);
      if (e.function == "sin") return sin(a);
      if (e.function == "log") return log(a);
      if (e.function == "sqrt") return sqrt(a);
      throw Error(Errc::UnknownIdentifier, "unknown function '" + e.function + "'", e.offset);
    }
  }
  throw Error(Errc::InvalidArgument, "malformed expression tree");
}

/// Parses `src` and expands it around `base` to the given truncation order.
inline TaylorSeries parse_holo(std::string_view src, Complex base = {}, int order = TaylorSeries::kDefaultOrder) {
  return expand(*parse_expr(src), base, order);
}

}  // namespace weier4
