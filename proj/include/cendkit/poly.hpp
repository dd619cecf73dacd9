#pragma once

#include <algorithm>
#include <vector>

#include "cendkit/rational.hpp"

namespace cendkit {

// Dense univariate polynomial over Q. Used both for polynomials in v
// (coefficients of PolyDV) and for polynomials in D (span coordinates).
// Invariant: leading coefficient nonzero unless the polynomial is zero.
class Poly {
 public:
  Poly() = default;
  explicit Poly(Rational c) {
    if (c != 0) coeffs_.push_back(std::move(c));
  }
  explicit Poly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static Poly monomial(int deg, Rational c = Rational(1)) {
    if (c == 0 || deg < 0) return {};
    std::vector<Rational> v(static_cast<size_t>(deg) + 1);
    v.back() = std::move(c);
    return Poly(std::move(v));
  }
  static Poly variable() { return monomial(1); }

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  const Rational& operator[](int i) const {
    static const Rational zero{0};
    if (i < 0 || i >= static_cast<int>(coeffs_.size())) return zero;
    return coeffs_[static_cast<size_t>(i)];
  }
  const Rational& leading() const { return coeffs_.back(); }

  void set(int i, Rational c) {
    if (i >= static_cast<int>(coeffs_.size())) coeffs_.resize(static_cast<size_t>(i) + 1);
    coeffs_[static_cast<size_t>(i)] = std::move(c);
    trim();
  }

  Poly& operator+=(const Poly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
  }
  // *this += c * o without an intermediate polynomial.
  Poly& add_scaled(const Rational& c, const Poly& o) {
    if (c == 0 || o.is_zero()) return *this;
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (size_t i = 0; i < o.coeffs_.size(); ++i)
      if (o.coeffs_[i] != 0) coeffs_[i] += c * o.coeffs_[i];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a) {
    Poly r = a;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (size_t j = 0; j < b.coeffs_.size(); ++j)
        if (b.coeffs_[j] != 0) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Poly(std::move(r));
  }
  friend Poly operator*(const Rational& c, Poly p) {
    if (c == 0) return {};
    for (auto& x : p.coeffs_) x *= c;
    return p;
  }
  bool operator==(const Poly& o) const { return coeffs_ == o.coeffs_; }

  // k-th derivative.
  Poly deriv(int k = 1) const {
    Poly r = *this;
    for (int step = 0; step < k; ++step) {
      if (r.coeffs_.empty()) return {};
      std::vector<Rational> d(r.coeffs_.size() > 1 ? r.coeffs_.size() - 1 : 0);
      for (size_t i = 1; i < r.coeffs_.size(); ++i) d[i - 1] = Rational(i) * r.coeffs_[i];
      r = Poly(std::move(d));
    }
    return r;
  }

  // Euclidean division: *this = q*b + r with deg r < deg b. b must be nonzero.
  std::pair<Poly, Poly> divmod(const Poly& b) const {
    if (b.is_zero()) throw std::invalid_argument("Poly::divmod by zero");
    Poly q, r = *this;
    while (!r.is_zero() && r.degree() >= b.degree()) {
      int d = r.degree() - b.degree();
      Rational c = r.leading() / b.leading();
      Poly t = monomial(d, c);
      q += t;
      r -= t * b;
    }
    return {q, r};
  }

  const std::vector<Rational>& coefficients() const { return coeffs_; }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }
  std::vector<Rational> coeffs_;
};

}  // namespace cendkit
