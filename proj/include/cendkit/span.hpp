#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cendkit/conformal.hpp"

namespace cendkit {

// Thrown when an element or a product escapes the declared v-degree window.
class bound_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Echelon form of a Q[D]-submodule of the free module with basis
// {v^k E_ij : k <= v_bound}. Coordinates are polynomials in D; positions are
// ordered lexicographically by (matrix position, v-degree). Insertion keeps
// rows in echelon via Euclidean division on pivot entries (Hermite style),
// so membership is decided by division with remainder.
class Echelon {
 public:
  using Vec = std::vector<Poly>;

  Echelon(int n, int v_bound) : n_(n), vb_(v_bound) {
    if (n <= 0 || v_bound < 0) throw std::invalid_argument("Echelon: bad dimensions");
  }

  int size() const { return n_; }
  int v_bound() const { return vb_; }
  int dim() const { return n_ * n_ * (vb_ + 1); }
  int rank() const { return static_cast<int>(rows_.size()); }

  Vec flatten(const CendElem& x) const {
    if (x.size() != n_) throw std::invalid_argument("Echelon: element size mismatch");
    if (x.deg_v() > vb_)
      throw bound_exceeded("v-degree " + std::to_string(x.deg_v()) + " exceeds bound " +
                           std::to_string(vb_));
    Vec w(static_cast<size_t>(dim()));
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        const PolyDV& p = x.at(i, j);
        for (int d = 0; d <= p.deg_d(); ++d) {
          const Poly& c = p.d_coeff(d);
          for (int k = 0; k <= c.degree(); ++k)
            if (c[k] != 0) w[idx(i, j, k)] += Poly::monomial(d, c[k]);
        }
      }
    return w;
  }

  CendElem unflatten(const Vec& w) const {
    CendElem x(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k <= vb_; ++k) {
          const Poly& c = w[idx(i, j, k)];
          for (int d = 0; d <= c.degree(); ++d)
            if (c[d] != 0) x.at(i, j) += PolyDV::monomial(d, k, c[d]);
        }
    return x;
  }

  // Adjoins w; returns true if the module grew.
  bool insert(Vec w) {
    bool grew = false;
    size_t r = 0;
    while (true) {
      int c = pivot(w);
      if (c < 0) return grew;
      while (r < rows_.size() && pivot(rows_[r]) < c) ++r;
      if (r == rows_.size() || pivot(rows_[r]) > c) {
        make_monic(w);
        rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(r), std::move(w));
        return true;
      }
      // Same pivot: Euclid on the pivot entries.
      auto [q, rem] = w[static_cast<size_t>(c)].divmod(rows_[r][static_cast<size_t>(c)]);
      axpy(w, -q, rows_[r]);
      if (!rem.is_zero()) {
        std::swap(w, rows_[r]);
        make_monic(rows_[r]);
        grew = true;  // the pivot entry strictly shrank: finer module
      }
    }
  }

  // Division reduction of w by the echelon rows; the remainder is the
  // canonical representative. Quotients per row are reported as the witness.
  Vec reduce(Vec w, std::vector<std::pair<int, Poly>>* witness = nullptr) const {
    for (size_t r = 0; r < rows_.size(); ++r) {
      int c = pivot(rows_[r]);
      if (w[static_cast<size_t>(c)].is_zero()) continue;
      auto [q, rem] = w[static_cast<size_t>(c)].divmod(rows_[r][static_cast<size_t>(c)]);
      if (q.is_zero()) continue;
      axpy(w, -q, rows_[r]);
      if (witness) witness->push_back({static_cast<int>(r), q});
    }
    return w;
  }

  static bool is_zero_vec(const Vec& w) {
    for (const auto& c : w)
      if (!c.is_zero()) return false;
    return true;
  }

  // Reduce every entry above each pivot: canonical basis for golden output.
  void back_reduce() {
    for (size_t r = rows_.size(); r-- > 0;) {
      int c = pivot(rows_[r]);
      for (size_t s = 0; s < r; ++s) {
        auto [q, rem] = rows_[s][static_cast<size_t>(c)].divmod(rows_[r][static_cast<size_t>(c)]);
        if (!q.is_zero()) axpy(rows_[s], -q, rows_[r]);
      }
    }
  }

  const std::vector<Vec>& rows() const { return rows_; }

 private:
  int idx(int i, int j, int k) const { return (i * n_ + j) * (vb_ + 1) + k; }

  static int pivot(const Vec& w) {
    for (size_t c = 0; c < w.size(); ++c)
      if (!w[c].is_zero()) return static_cast<int>(c);
    return -1;
  }

  static void axpy(Vec& w, const Poly& a, const Vec& u) {
    for (size_t c = 0; c < w.size(); ++c)
      if (!u[c].is_zero()) w[c] += a * u[c];
  }

  void make_monic(Vec& w) const {
    int c = pivot(w);
    if (c < 0) return;
    const Poly& lead = w[static_cast<size_t>(c)];
    Rational lc = lead[lead.degree()];
    if (lc == 1) return;
    Rational inv = Rational(1) / lc;
    for (auto& e : w) e = inv * e;
  }

  int n_, vb_;
  std::vector<Vec> rows_;
};

}  // namespace detail

// A Q[D]-module span inside Cend_n with an explicit v-degree window.
// Echelon data is computed eagerly; the object is immutable afterwards.
class HSpan {
 public:
  HSpan(int n, int v_degree_bound, std::vector<CendElem> generators)
      : gens_(std::move(generators)), ech_(n, v_degree_bound) {
    for (const auto& g : gens_) ech_.insert(ech_.flatten(g));
    ech_.back_reduce();
  }

  static HSpan zero(int n, int v_degree_bound) { return HSpan(n, v_degree_bound, {}); }

  int size() const { return ech_.size(); }
  int v_degree_bound() const { return ech_.v_bound(); }
  const std::vector<CendElem>& generators() const { return gens_; }
  // Rank over the fraction field Q(D); the ambient module is free, so this
  // is the number of echelon rows.
  int rank() const { return ech_.rank(); }
  bool is_zero_span() const { return ech_.rank() == 0; }

  std::vector<CendElem> basis() const {
    std::vector<CendElem> out;
    out.reserve(ech_.rows().size());
    for (const auto& r : ech_.rows()) out.push_back(ech_.unflatten(r));
    return out;
  }

  struct Membership {
    bool member = false;
    // Coefficients in Q[D] against the echelon basis, by row index.
    std::vector<std::pair<int, Poly>> witness;
  };

  Membership membership(const CendElem& x) const {
    Membership m;
    auto rem = ech_.reduce(ech_.flatten(x), &m.witness);
    m.member = detail::Echelon::is_zero_vec(rem);
    if (!m.member) m.witness.clear();
    return m;
  }

  bool contains(const CendElem& x) const { return membership(x).member; }

  bool contains_span(const HSpan& other) const {
    for (const auto& b : other.basis())
      if (!contains(b)) return false;
    return true;
  }

  // Canonical representative of x modulo the span; idempotent.
  CendElem reduce(const CendElem& x) const { return ech_.unflatten(ech_.reduce(ech_.flatten(x))); }

  friend HSpan span_sum(const HSpan& a, const HSpan& b) {
    if (a.size() != b.size() || a.v_degree_bound() != b.v_degree_bound())
      throw std::invalid_argument("span_sum: ambient mismatch");
    std::vector<CendElem> gens = a.basis();
    for (auto& g : b.basis()) gens.push_back(std::move(g));
    return HSpan(a.size(), a.v_degree_bound(), std::move(gens));
  }

 private:
  std::vector<CendElem> gens_;
  detail::Echelon ech_;
};

struct SubalgebraPresentation {
  HSpan span;
  bool closed_under_products = false;
  int product_bound = 0;  // largest locality bound swept during closure
};

struct IdealPresentation {
  HSpan span;
  std::optional<int> nilpotency_index;
};

// Saturates the Q[D]-span of gens under all n-products until stable.
// Terminates because submodules of the bounded-window free module satisfy
// the ascending chain condition. Throws bound_exceeded (with the offending
// pair) if any product escapes the window.
inline SubalgebraPresentation close_subalgebra(std::vector<CendElem> gens, int n,
                                               int v_degree_bound) {
  HSpan span(n, v_degree_bound, std::move(gens));
  int bound_used = 0;
  while (true) {
    std::vector<CendElem> bas = span.basis();
    std::vector<CendElem> fresh;
    for (size_t i = 0; i < bas.size(); ++i)
      for (size_t j = 0; j < bas.size(); ++j) {
        int lb = locality_bound(bas[i], bas[j]);
        bound_used = std::max(bound_used, lb);
        for (int k = 0; k < lb; ++k) {
          CendElem p = nth_product(bas[i], bas[j], k);
          if (p.is_zero()) continue;
          if (p.deg_v() > v_degree_bound)
            throw bound_exceeded("closure escapes v-degree bound " +
                                 std::to_string(v_degree_bound) + ": (" + to_string(bas[i]) +
                                 ") (" + std::to_string(k) + ") (" + to_string(bas[j]) + ")");
          if (!span.contains(p)) fresh.push_back(std::move(p));
        }
      }
    if (fresh.empty()) break;
    std::vector<CendElem> next = span.basis();
    for (auto& p : fresh) next.push_back(std::move(p));
    span = HSpan(n, v_degree_bound, std::move(next));
  }
  return SubalgebraPresentation{std::move(span), true, bound_used};
}

struct IdealCheck {
  bool ok = true;
  std::string witness;  // first failing action, when any
};

// Two-sided action test: x (n) a, a (n) x and both braces land in the ideal
// for every algebra generator x and ideal generator a.
inline IdealCheck verify_ideal(const HSpan& ideal, const SubalgebraPresentation& algebra) {
  IdealCheck res;
  for (const auto& b : ideal.basis())
    if (!algebra.span.contains(b)) {
      res.ok = false;
      res.witness = "ideal not contained in algebra: " + to_string(b);
      return res;
    }
  auto fail = [&](const std::string& what, const CendElem& val) {
    res.ok = false;
    res.witness = what + " escapes the ideal: " + to_string(val);
  };
  for (const auto& x : algebra.span.basis()) {
    for (const auto& a : ideal.basis()) {
      int lb = std::max(locality_bound(x, a), locality_bound(a, x));
      for (int k = 0; k < lb; ++k) {
        CendElem xa = nth_product(x, a, k);
        if (!ideal.contains(xa)) return fail("x (" + std::to_string(k) + ") a", xa), res;
        CendElem ax = nth_product(a, x, k);
        if (!ideal.contains(ax)) return fail("a (" + std::to_string(k) + ") x", ax), res;
        CendElem bxa = brace_product(x, a, k);
        if (!ideal.contains(bxa)) return fail("{x (" + std::to_string(k) + ") a}", bxa), res;
        CendElem bax = brace_product(a, x, k);
        if (!ideal.contains(bax)) return fail("{a (" + std::to_string(k) + ") x}", bax), res;
      }
    }
  }
  return res;
}

// Span of all k-products of elements of a with elements of b, all k.
inline HSpan product_span(const HSpan& a, const HSpan& b) {
  std::vector<CendElem> gens;
  for (const auto& x : a.basis())
    for (const auto& y : b.basis())
      for (int k = 0; k < locality_bound(x, y); ++k) {
        CendElem p = nth_product(x, y, k);
        if (!p.is_zero()) gens.push_back(std::move(p));
      }
  return HSpan(a.size(), a.v_degree_bound(), std::move(gens));
}

// Smallest m <= cap with the m-fold product span zero.
inline std::optional<int> nilpotency_index(const HSpan& ideal, int cap) {
  HSpan power = ideal;
  for (int m = 1; m <= cap; ++m) {
    if (power.is_zero_span()) return m;
    power = product_span(power, ideal);
  }
  return std::nullopt;
}

// Canonical representative of x + I.
inline CendElem quotient_reduce(const CendElem& x, const HSpan& ideal) { return ideal.reduce(x); }

struct PierceDecomposition {
  // e-corner, (1-e)..e, e..(1-e), (1-e)-corner — in this order.
  std::vector<HSpan> parts;
  bool verified = false;  // parts independent and summing to the algebra
};

// Four-corner decomposition of the algebra by the idempotent e:
//   a = e(0){a(0)e} + [{a(0)e} - e(0){a(0)e}] + [e(0)a - e(0){a(0)e}] + rest.
inline PierceDecomposition pierce_decompose(const SubalgebraPresentation& algebra,
                                            const CendElem& e) {
  if (!is_idempotent(e)) throw std::invalid_argument("pierce_decompose: e is not idempotent");
  if (!e.is_zero() && !algebra.span.contains(e))
    throw std::invalid_argument("pierce_decompose: e is not in the algebra");
  int n = algebra.span.size(), vb = algebra.span.v_degree_bound();
  std::vector<std::vector<CendElem>> gens(4);
  for (const auto& a : algebra.span.basis()) {
    CendElem ra = brace_product(a, e, 0);          // {a (0) e}
    CendElem la = nth_product(e, a, 0);            // e (0) a
    CendElem corner = nth_product(e, ra, 0);       // e (0) {a (0) e}
    gens[0].push_back(corner);
    gens[1].push_back(ra - corner);
    gens[2].push_back(la - corner);
    gens[3].push_back(a - la - ra + corner);
  }
  PierceDecomposition dec;
  int total = 0;
  std::optional<HSpan> sum;
  for (auto& g : gens) {
    dec.parts.emplace_back(n, vb, std::move(g));
    total += dec.parts.back().rank();
    sum = sum ? span_sum(*sum, dec.parts.back()) : dec.parts.back();
  }
  dec.verified = (total == algebra.span.rank()) && (sum->rank() == algebra.span.rank()) &&
                 algebra.span.contains_span(*sum);
  return dec;
}

}  // namespace cendkit
