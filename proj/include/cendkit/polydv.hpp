#pragma once

#include <utility>
#include <vector>

#include "cendkit/poly.hpp"

namespace cendkit {

// Bivariate polynomial in D and v over Q, dense by D-degree; each
// D-coefficient is a dense polynomial in v. D-degrees stay small in
// practice (locality), v-degrees dominate.
class PolyDV {
 public:
  PolyDV() = default;
  explicit PolyDV(Poly v_poly) {
    if (!v_poly.is_zero()) d_coeffs_.push_back(std::move(v_poly));
  }
  explicit PolyDV(Rational c) : PolyDV(Poly(std::move(c))) {}
  explicit PolyDV(std::vector<Poly> d_coeffs) : d_coeffs_(std::move(d_coeffs)) { trim(); }

  static PolyDV variable_v() { return PolyDV(Poly::variable()); }
  static PolyDV variable_d() { return PolyDV(std::vector<Poly>{Poly(), Poly(Rational(1))}); }
  static PolyDV monomial(int d_deg, int v_deg, Rational c = Rational(1)) {
    if (c == 0) return {};
    std::vector<Poly> v(static_cast<size_t>(d_deg) + 1);
    v.back() = Poly::monomial(v_deg, std::move(c));
    return PolyDV(std::move(v));
  }

  bool is_zero() const { return d_coeffs_.empty(); }
  int deg_d() const { return static_cast<int>(d_coeffs_.size()) - 1; }
  int deg_v() const {
    int m = -1;
    for (const auto& p : d_coeffs_) m = std::max(m, p.degree());
    return m;
  }
  const Poly& d_coeff(int i) const {
    static const Poly zero;
    if (i < 0 || i >= static_cast<int>(d_coeffs_.size())) return zero;
    return d_coeffs_[static_cast<size_t>(i)];
  }
  const Rational& coeff(int d_deg, int v_deg) const { return d_coeff(d_deg)[v_deg]; }

  PolyDV& operator+=(const PolyDV& o) {
    if (o.d_coeffs_.size() > d_coeffs_.size()) d_coeffs_.resize(o.d_coeffs_.size());
    for (size_t i = 0; i < o.d_coeffs_.size(); ++i) d_coeffs_[i] += o.d_coeffs_[i];
    trim();
    return *this;
  }
  PolyDV& operator-=(const PolyDV& o) {
    if (o.d_coeffs_.size() > d_coeffs_.size()) d_coeffs_.resize(o.d_coeffs_.size());
    for (size_t i = 0; i < o.d_coeffs_.size(); ++i) d_coeffs_[i] -= o.d_coeffs_[i];
    trim();
    return *this;
  }
  // *this += c * D^dshift * o without intermediate polynomials.
  PolyDV& add_scaled(const Rational& c, const PolyDV& o, int dshift = 0) {
    if (c == 0 || o.is_zero()) return *this;
    size_t need = o.d_coeffs_.size() + static_cast<size_t>(dshift);
    if (need > d_coeffs_.size()) d_coeffs_.resize(need);
    for (size_t i = 0; i < o.d_coeffs_.size(); ++i)
      d_coeffs_[i + static_cast<size_t>(dshift)].add_scaled(c, o.d_coeffs_[i]);
    trim();
    return *this;
  }
  friend PolyDV operator+(PolyDV a, const PolyDV& b) { return a += b; }
  friend PolyDV operator-(PolyDV a, const PolyDV& b) { return a -= b; }
  friend PolyDV operator-(const PolyDV& a) {
    PolyDV r = a;
    for (auto& p : r.d_coeffs_) p = -p;
    return r;
  }
  friend PolyDV operator*(const PolyDV& a, const PolyDV& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Poly> r(a.d_coeffs_.size() + b.d_coeffs_.size() - 1);
    for (size_t i = 0; i < a.d_coeffs_.size(); ++i)
      for (size_t j = 0; j < b.d_coeffs_.size(); ++j)
        r[i + j] += a.d_coeffs_[i] * b.d_coeffs_[j];
    return PolyDV(std::move(r));
  }
  friend PolyDV operator*(const Rational& c, PolyDV p) {
    if (c == 0) return {};
    for (auto& x : p.d_coeffs_) x = c * x;
    return p;
  }
  friend PolyDV operator*(const Poly& f, PolyDV p) {
    if (f.is_zero()) return {};
    for (auto& x : p.d_coeffs_) x = f * x;
    p.trim();
    return p;
  }
  bool operator==(const PolyDV& o) const { return d_coeffs_ == o.d_coeffs_; }

  // Multiply by D (the H-action on coefficients).
  PolyDV mul_d() const {
    if (is_zero()) return {};
    std::vector<Poly> r(d_coeffs_.size() + 1);
    for (size_t i = 0; i < d_coeffs_.size(); ++i) r[i + 1] = d_coeffs_[i];
    return PolyDV(std::move(r));
  }

  // k-th partial derivative in v.
  PolyDV deriv_v(int k = 1) const {
    std::vector<Poly> r(d_coeffs_.size());
    for (size_t i = 0; i < d_coeffs_.size(); ++i) r[i] = d_coeffs_[i].deriv(k);
    return PolyDV(std::move(r));
  }

  const std::vector<Poly>& d_coefficients() const { return d_coeffs_; }

 private:
  void trim() {
    while (!d_coeffs_.empty() && d_coeffs_.back().is_zero()) d_coeffs_.pop_back();
  }
  std::vector<Poly> d_coeffs_;
};

// f(v) |-> f(v - D), expanded into the canonical PolyDV form.
inline PolyDV shift_v_minus_d(const Poly& f) {
  PolyDV base = PolyDV::variable_v() - PolyDV::variable_d();
  PolyDV result, power{Rational(1)};
  for (int i = 0; i <= f.degree(); ++i) {
    if (f[i] != 0) result += f[i] * power;
    if (i < f.degree()) power = power * base;
  }
  return result;
}

}  // namespace cendkit
