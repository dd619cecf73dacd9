#pragma once

#include <stdexcept>
#include <vector>

#include "cendkit/polydv.hpp"

namespace cendkit {

// Square matrix over Q[D,v]. Houses elements of Cend_n = M_n(k[D,v]).
class MatrixDV {
 public:
  MatrixDV() : n_(0) {}
  explicit MatrixDV(int n) : n_(n), entries_(static_cast<size_t>(n) * n) {
    if (n <= 0) throw std::invalid_argument("MatrixDV: size must be positive");
  }

  static MatrixDV identity(int n) {
    MatrixDV m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = PolyDV(Rational(1));
    return m;
  }
  static MatrixDV scalar(int n, PolyDV p) {
    MatrixDV m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = p;
    return m;
  }
  static MatrixDV unit(int n, int i, int j, PolyDV p = PolyDV(Rational(1))) {
    MatrixDV m(n);
    m.at(i, j) = std::move(p);
    return m;
  }

  int size() const { return n_; }
  PolyDV& at(int i, int j) { return entries_[static_cast<size_t>(i) * n_ + j]; }
  const PolyDV& at(int i, int j) const { return entries_[static_cast<size_t>(i) * n_ + j]; }

  bool is_zero() const {
    for (const auto& e : entries_)
      if (!e.is_zero()) return false;
    return true;
  }
  int deg_d() const {
    int m = -1;
    for (const auto& e : entries_) m = std::max(m, e.deg_d());
    return m;
  }
  int deg_v() const {
    int m = -1;
    for (const auto& e : entries_) m = std::max(m, e.deg_v());
    return m;
  }

  MatrixDV& operator+=(const MatrixDV& o) {
    check_size(o);
    for (size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
    return *this;
  }
  MatrixDV& operator-=(const MatrixDV& o) {
    check_size(o);
    for (size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
    return *this;
  }
  // *this += c * D^dshift * o without intermediate matrices.
  MatrixDV& add_scaled(const Rational& c, const MatrixDV& o, int dshift = 0) {
    check_size(o);
    for (size_t i = 0; i < entries_.size(); ++i) entries_[i].add_scaled(c, o.entries_[i], dshift);
    return *this;
  }
  friend MatrixDV operator+(MatrixDV a, const MatrixDV& b) { return a += b; }
  friend MatrixDV operator-(MatrixDV a, const MatrixDV& b) { return a -= b; }
  friend MatrixDV operator-(const MatrixDV& a) {
    MatrixDV r = a;
    for (auto& e : r.entries_) e = -e;
    return r;
  }
  friend MatrixDV operator*(const MatrixDV& a, const MatrixDV& b) {
    a.check_size(b);
    MatrixDV r(a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int k = 0; k < a.n_; ++k) {
        if (a.at(i, k).is_zero()) continue;
        for (int j = 0; j < a.n_; ++j)
          if (!b.at(k, j).is_zero()) r.at(i, j) += a.at(i, k) * b.at(k, j);
      }
    return r;
  }
  friend MatrixDV operator*(const Rational& c, MatrixDV m) {
    for (auto& e : m.entries_) e = c * e;
    return m;
  }
  friend MatrixDV operator*(const PolyDV& p, MatrixDV m) {
    for (auto& e : m.entries_) e = p * e;
    return m;
  }
  bool operator==(const MatrixDV& o) const { return n_ == o.n_ && entries_ == o.entries_; }

  MatrixDV mul_d() const {
    MatrixDV r = *this;
    for (auto& e : r.entries_) e = e.mul_d();
    return r;
  }
  MatrixDV deriv_v(int k = 1) const {
    MatrixDV r = *this;
    for (auto& e : r.entries_) e = e.deriv_v(k);
    return r;
  }

 private:
  void check_size(const MatrixDV& o) const {
    if (n_ != o.n_) throw std::invalid_argument("MatrixDV: size mismatch");
  }
  int n_;
  std::vector<PolyDV> entries_;
};

}  // namespace cendkit
