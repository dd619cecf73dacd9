#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "cendkit/matrix.hpp"

namespace cendkit {

// Parse failure with a 1-based column for CLI diagnostics.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, size_t column)
      : std::runtime_error(msg + " at column " + std::to_string(column)), column_(column) {}
  size_t column() const { return column_; }

 private:
  size_t column_;
};

namespace detail {

// Recursive-descent parser for the polynomial grammar:
//   rational literals (3, -5/2), variables D and v, operators + - * ^,
//   parentheses. Whitespace insignificant.
class PolyParser {
 public:
  explicit PolyParser(std::string_view s) : s_(s) {}

  PolyDV parse_all() {
    PolyDV r = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return r;
  }

  PolyDV expr() {
    PolyDV r = term();
    for (;;) {
      skip_ws();
      if (accept('+'))
        r += term();
      else if (accept('-'))
        r -= term();
      else
        return r;
    }
  }

  size_t pos() const { return pos_; }
  void set_pos(size_t p) { pos_ = p; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c, const char* what) {
    if (!accept(c)) fail(what);
  }
  [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, pos_ + 1); }

 private:
  PolyDV term() {
    PolyDV r = factor();
    for (;;) {
      skip_ws();
      if (accept('*'))
        r = r * factor();
      else
        return r;
    }
  }

  PolyDV factor() {
    skip_ws();
    if (accept('-')) return -factor();
    PolyDV base = atom();
    skip_ws();
    if (accept('^')) {
      int e = parse_uint();
      PolyDV r{Rational(1)};
      for (int i = 0; i < e; ++i) r = r * base;
      return r;
    }
    return base;
  }

  PolyDV atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      PolyDV r = expr();
      expect(')', "expected ')'");
      return r;
    }
    if (c == 'D') {
      ++pos_;
      return PolyDV::variable_d();
    }
    if (c == 'v') {
      ++pos_;
      return PolyDV::variable_v();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Integer num = parse_integer();
      if (accept('/')) {
        Integer den = parse_integer();
        if (den == 0) fail("zero denominator");
        return PolyDV(Rational(num, den));
      }
      return PolyDV(Rational(num));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Integer parse_integer() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected integer");
    return Integer(std::string(s_.substr(start, pos_ - start)));
  }

  int parse_uint() {
    Integer i = parse_integer();
    if (i > 1024) fail("exponent too large");
    return static_cast<int>(i);
  }

  std::string_view s_;
  size_t pos_ = 0;
};

}  // namespace detail

inline PolyDV parse_poly(std::string_view s) { return detail::PolyParser(s).parse_all(); }

// Element grammar: [[p11, p12],[p21, p22]] with entries in the polynomial
// grammar; size inferred; 1x1 matrices may omit brackets.
inline MatrixDV parse_element(std::string_view s) {
  detail::PolyParser p(s);
  p.skip_ws();
  if (!p.accept('[')) {
    return MatrixDV::scalar(1, p.parse_all());
  }
  std::vector<std::vector<PolyDV>> rows;
  for (;;) {
    p.expect('[', "expected '['");
    std::vector<PolyDV> row;
    for (;;) {
      row.push_back(p.expr());
      if (!p.accept(',')) break;
    }
    p.expect(']', "unbalanced bracket");
    rows.push_back(std::move(row));
    if (!p.accept(',')) break;
  }
  p.expect(']', "unbalanced bracket");
  p.skip_ws();
  if (p.pos() != s.size()) p.fail("unexpected trailing input");

  size_t n = rows.size();
  for (const auto& r : rows)
    if (r.size() != n) throw parse_error("matrix is not square", s.size());
  MatrixDV m(static_cast<int>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return m;
}

namespace detail {

inline void print_monomial(std::string& out, const Rational& c, int d_deg, int v_deg,
                           bool first) {
  Rational a = c < 0 ? Rational(-c) : c;
  if (first) {
    if (c < 0) out += "-";
  } else {
    out += c < 0 ? " - " : " + ";
  }
  bool have_coeff = (a != 1) || (d_deg == 0 && v_deg == 0);
  if (have_coeff) out += to_string(a);
  if (d_deg > 0) {
    if (have_coeff) out += "*";
    out += d_deg == 1 ? "D" : "D^" + std::to_string(d_deg);
  }
  if (v_deg > 0) {
    if (have_coeff || d_deg > 0) out += "*";
    out += v_deg == 1 ? "v" : "v^" + std::to_string(v_deg);
  }
}

}  // namespace detail

// Canonical form: D-degree ascending, v-degree descending within each
// D-degree. Parsing then printing reproduces this form.
inline std::string to_string(const PolyDV& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (int d = 0; d <= p.deg_d(); ++d) {
    const Poly& f = p.d_coeff(d);
    for (int v = f.degree(); v >= 0; --v) {
      if (f[v] == 0) continue;
      detail::print_monomial(out, f[v], d, v, first);
      first = false;
    }
  }
  return out;
}

inline std::string to_string(const MatrixDV& m) {
  std::string out = "[";
  for (int i = 0; i < m.size(); ++i) {
    if (i) out += ",";
    out += "[";
    for (int j = 0; j < m.size(); ++j) {
      if (j) out += ", ";
      out += to_string(m.at(i, j));
    }
    out += "]";
  }
  out += "]";
  return out;
}

}  // namespace cendkit
