#pragma once

/// Surface syntax for germs.
///
///   germ   := [sign] term (sign term)*
///   term   := factor ('*' factor)*          at most one power per term
///   factor := coeff | power
///   power  := 'x' ['^' ('(' [sign] rational ')' | integer)]
///   coeff  := number ['i'] | 'i' | '(' [sign] rational ')' | '(' complex ')'
///
/// x is z - a at a finite point and z at infinity; exponents are written in
/// that coordinate, so x^(-3/2) at a finite point is a pole of order 3/2 and
/// x^(3) at infinity is a pole of order 3. Parsed germs are exact.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

#include "sphase/error.hpp"
#include "sphase/puiseux.hpp"
#include "sphase/rational.hpp"

namespace sphase {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(ErrorCode::SyntaxError, what + " at position " + std::to_string(position)), position_{position} {}
  [[nodiscard]] std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Shortest of %.15g / %.17g that reads back to the same double.
inline std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

class GermParser {
 public:
  explicit GermParser(std::string_view s) : s_{s} {}

  PuiseuxGerm::TermMap parse_germ(bool at_infinity) {
    PuiseuxGerm::TermMap terms;
    skip();
    double sign = 1.0;
    if (peek('+') || peek('-')) sign = take() == '-' ? -1.0 : 1.0;
    for (;;) {
      auto [e, c] = parse_term();
      terms[at_infinity ? e : -e] += sign * c;
      skip();
      if (at_end()) break;
      if (!(peek('+') || peek('-'))) fail("expected '+' or '-'");
      sign = take() == '-' ? -1.0 : 1.0;
    }
    return terms;
  }

  Complex parse_complex_only() {
    skip();
    Complex c = parse_signed_complex();
    skip();
    if (!at_end()) fail("trailing input");
    return c;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[nodiscard]] bool at_end() const { return pos_ >= s_.size(); }
  [[nodiscard]] bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  char take() {
    skip();
    return s_[pos_++];
  }
  void expect(char c) {
    skip();
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[nodiscard]] bool digit_ahead() const {
    return pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.');
  }

  double parse_number() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (peek('.')) {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ == start || (pos_ == start + 1 && s_[start] == '.')) {
      pos_ = start;
      fail("expected a number");
    }
    if (peek('e') || peek('E')) {
      std::size_t save = pos_++;
      if (peek('+') || peek('-')) ++pos_;
      const std::size_t digits = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == digits) pos_ = save;
    }
    return std::strtod(std::string(s_.substr(start, pos_ - start)).c_str(), nullptr);
  }

  std::int64_t parse_integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected an integer");
    const std::string digits(s_.substr(start, pos_ - start));
    if (digits.size() > 15) {
      pos_ = start;
      fail("integer too large");
    }
    return std::stoll(digits);
  }

  Rational parse_signed_rational() {
    skip();
    std::int64_t sign = 1;
    if (peek('+') || peek('-')) sign = take() == '-' ? -1 : 1;
    const std::int64_t n = parse_integer();
    skip();
    if (peek('/')) {
      ++pos_;
      const std::int64_t d = parse_integer();
      if (d == 0) fail("zero denominator");
      return Rational{sign * n, d};
    }
    return Rational{sign * n};
  }

  /// real ['i'] | 'i' ; a leading '/' makes a rational
  Complex parse_part(bool allow_rational) {
    skip();
    if (peek('i')) {
      ++pos_;
      return {0.0, 1.0};
    }
    const std::size_t start = pos_;
    double v = parse_number();
    skip();
    if (allow_rational && peek('/')) {
      const std::string lit(s_.substr(start, pos_ - start));
      if (lit.find_first_not_of("0123456789 ") != std::string::npos) fail("rational needs integer parts");
      ++pos_;
      const std::int64_t d = parse_integer();
      if (d == 0) fail("zero denominator");
      v /= static_cast<double>(d);
      skip();
    }
    if (peek('i')) {
      ++pos_;
      return {0.0, v};
    }
    return {v, 0.0};
  }

  Complex parse_signed_complex() {
    skip();
    double sign = 1.0;
    if (peek('+') || peek('-')) sign = take() == '-' ? -1.0 : 1.0;
    Complex c = sign * parse_part(true);
    skip();
    if ((peek('+') || peek('-')) && c.imag() == 0.0) {
      const double s2 = take() == '-' ? -1.0 : 1.0;
      const Complex d = parse_part(true);
      if (d.imag() == 0.0) fail("expected an imaginary part");
      c += s2 * d;
    }
    return c;
  }

  Complex parse_coeff() {
    skip();
    if (peek('(')) {
      ++pos_;
      const Complex c = parse_signed_complex();
      expect(')');
      return c;
    }
    return parse_part(false);
  }

  Rational parse_power() {
    expect('x');
    skip();
    if (!peek('^')) return Rational{1};
    ++pos_;
    skip();
    if (peek('(')) {
      ++pos_;
      const Rational r = parse_signed_rational();
      expect(')');
      return r;
    }
    return Rational{parse_integer()};
  }

  std::pair<Rational, Complex> parse_term() {
    Complex c{1.0, 0.0};
    std::optional<Rational> e;
    for (;;) {
      skip();
      if (peek('x')) {
        const std::size_t at = pos_;
        if (e) {
          pos_ = at;
          fail("a term may contain only one power of x");
        }
        e = parse_power();
      } else if (peek('(') || peek('i') || digit_ahead()) {
        c *= parse_coeff();
      } else {
        fail(at_end() ? "unexpected end of input" : std::string("unexpected '") + s_[pos_] + "'");
      }
      skip();
      if (!peek('*')) break;
      ++pos_;
    }
    return {e.value_or(Rational{0}), c};
  }
};

}  // namespace detail

/// ramification 0 takes the lattice of the written exponents.
[[nodiscard]] inline PuiseuxGerm parse_germ(std::string_view expr, const BasePoint& base, int ramification = 0) {
  detail::GermParser parser(expr);
  PuiseuxGerm::TermMap terms = parser.parse_germ(base.is_infinity());
  if (ramification == 0) {
    std::int64_t l = 1;
    for (const auto& [mu, c] : terms) l = lcm(l, mu.den());
    ramification = static_cast<int>(l);
  }
  return PuiseuxGerm(base, ramification, std::move(terms));
}

/// Complex literal ("2", "-1.5", "3i", "1+2i", "(1/3)") or "inf" / "infinity".
[[nodiscard]] inline BasePoint parse_point(std::string_view text) {
  std::string t(text);
  if (t == "inf" || t == "infinity" || t == "oo") return BasePoint::infinity();
  if (t.size() >= 2 && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
  detail::GermParser parser(t);
  return BasePoint::finite(parser.parse_complex_only());
}

[[nodiscard]] inline std::string format_complex(Complex c) {
  if (c.imag() == 0.0) return format_double(c.real());
  if (c.real() == 0.0) return format_double(c.imag()) + "i";
  std::string im = format_double(c.imag());
  if (im.front() != '-') im = "+" + im;
  return format_double(c.real()) + im + "i";
}

[[nodiscard]] inline std::string format_point(const BasePoint& p) {
  return p.is_infinity() ? "inf" : format_complex(p.value());
}

/// Inverse of parse_germ: parse_germ(print_germ(g), g.base(), g.ramification()) == g.
[[nodiscard]] inline std::string print_germ(const PuiseuxGerm& g) {
  if (g.empty()) return "0";
  std::string out;
  const bool inf = g.base().is_infinity();
  for (const auto& [mu, c] : g.terms()) {
    const Rational e = inf ? mu : -mu;
    std::string coeff;
    bool negative = false;
    if (c.imag() == 0.0) {
      negative = std::signbit(c.real());
      coeff = format_double(std::abs(c.real()));
    } else if (c.real() == 0.0) {
      negative = std::signbit(c.imag());
      coeff = format_double(std::abs(c.imag())) + "i";
    } else {
      coeff = "(" + format_complex(c) + ")";
    }
    std::string power;
    if (e != Rational{0}) power = "x^(" + e.str() + ")";
    std::string term;
    if (power.empty()) {
      term = coeff;
    } else if (coeff == "1") {
      term = power;
    } else {
      term = coeff + "*" + power;
    }
    if (out.empty()) {
      out = negative ? "-" + term : term;
    } else {
      out += negative ? " - " : " + ";
      out += term;
    }
  }
  return out;
}

}  // namespace sphase
