#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cendkit/conformal.hpp"

namespace cendkit {

// Element of the first Weyl algebra W = k<p,q | qp - pq = 1> in the
// normal form p-before-q: every monomial is p^i q^j.
class WeylPoly {
 public:
  WeylPoly() = default;
  explicit WeylPoly(Rational c) {
    if (c != 0) terms_[{0, 0}] = std::move(c);
  }
  static WeylPoly p(int exp = 1) { return monomial(exp, 0); }
  static WeylPoly q(int exp = 1) { return monomial(0, exp); }
  static WeylPoly monomial(int p_deg, int q_deg, Rational c = Rational(1)) {
    WeylPoly w;
    if (c != 0) w.terms_[{p_deg, q_deg}] = std::move(c);
    return w;
  }
  // f(v) as f(p).
  static WeylPoly from_p_poly(const Poly& f, int q_deg = 0, const Rational& scale = Rational(1)) {
    WeylPoly w;
    for (int i = 0; i <= f.degree(); ++i)
      if (f[i] != 0) w.add_term(i, q_deg, scale * f[i]);
    return w;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_p_free() const {
    for (const auto& [k, c] : terms_)
      if (k.first != 0) return false;
    return true;
  }
  bool is_p_only() const {
    for (const auto& [k, c] : terms_)
      if (k.second != 0) return false;
    return true;
  }
  // The polynomial in p, valid when is_p_only().
  Poly p_poly() const {
    Poly f;
    for (const auto& [k, c] : terms_) f += Poly::monomial(k.first, c);
    return f;
  }

  void add_term(int p_deg, int q_deg, const Rational& c) {
    if (c == 0) return;
    auto key = std::make_pair(p_deg, q_deg);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_[key] = c;
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  WeylPoly& operator+=(const WeylPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
    return *this;
  }
  WeylPoly& operator-=(const WeylPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
    return *this;
  }
  friend WeylPoly operator+(WeylPoly a, const WeylPoly& b) { return a += b; }
  friend WeylPoly operator-(WeylPoly a, const WeylPoly& b) { return a -= b; }
  friend WeylPoly operator-(const WeylPoly& a) {
    WeylPoly r;
    for (const auto& [k, c] : a.terms_) r.terms_[k] = -c;
    return r;
  }
  friend WeylPoly operator*(const Rational& c, const WeylPoly& w) {
    WeylPoly r;
    if (c == 0) return r;
    for (const auto& [k, x] : w.terms_) r.terms_[k] = c * x;
    return r;
  }
  // Noncommutative product: (p^a q^b)(p^c q^d) is rewritten with
  // q^b p^c = sum_t C(b,t) c^(t) p^{c-t} q^{b-t}.
  friend WeylPoly operator*(const WeylPoly& x, const WeylPoly& y) {
    WeylPoly r;
    for (const auto& [kx, cx] : x.terms_)
      for (const auto& [ky, cy] : y.terms_) {
        int a = kx.first, b = kx.second, c = ky.first, d = ky.second;
        for (int t = 0; t <= std::min(b, c); ++t) {
          Integer f = binom(b, t) * falling(c, t);
          if (f == 0) continue;
          r.add_term(a + c - t, b + d - t, cx * cy * Rational(f));
        }
      }
    return r;
  }
  bool operator==(const WeylPoly& o) const { return terms_ == o.terms_; }

  // Rewritten with q on the left: returns map (q_deg, p_deg) -> coefficient,
  // using p^i q^j = sum_t (-1)^t C(j,t) i^(t) q^{j-t} p^{i-t}.
  std::map<std::pair<int, int>, Rational> q_left_form() const {
    std::map<std::pair<int, int>, Rational> r;
    for (const auto& [k, c] : terms_) {
      int i = k.first, j = k.second;
      for (int t = 0; t <= std::min(i, j); ++t) {
        Integer f = binom(j, t) * falling(i, t);
        if (f == 0) continue;
        Rational add = c * Rational((t % 2) ? -f : f);
        auto key = std::make_pair(j - t, i - t);
        r[key] += add;
        if (r[key] == 0) r.erase(key);
      }
    }
    return r;
  }

  // Membership in the left ideal W * Q(p): in the q-left form w = sum_j q^j d_j(p),
  // every d_j must be divisible by Q in k[p].
  bool right_divisible_by(const Poly& Q) const {
    if (Q.is_zero()) return is_zero();
    std::map<int, Poly> rows;
    for (const auto& [k, c] : q_left_form()) rows[k.first] += Poly::monomial(k.second, c);
    for (const auto& [j, d] : rows)
      if (!d.divmod(Q).second.is_zero()) return false;
    return true;
  }

  const std::map<std::pair<int, int>, Rational>& terms() const { return terms_; }

 private:
  std::map<std::pair<int, int>, Rational> terms_;
};

inline std::string to_string(const WeylPoly& w) {
  if (w.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = w.terms().rbegin(); it != w.terms().rend(); ++it) {
    const auto& [k, c] = *it;
    Rational a = c < 0 ? Rational(-c) : c;
    if (first)
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    first = false;
    bool have_coeff = (a != 1) || (k.first == 0 && k.second == 0);
    if (have_coeff) out += to_string(a);
    if (k.first > 0) {
      if (have_coeff) out += "*";
      out += k.first == 1 ? "p" : "p^" + std::to_string(k.first);
    }
    if (k.second > 0) {
      if (have_coeff || k.first > 0) out += "*";
      out += k.second == 1 ? "q" : "q^" + std::to_string(k.second);
    }
  }
  return out;
}

// Element of M_n(W).
class WeylOp {
 public:
  WeylOp() : n_(0) {}
  explicit WeylOp(int n) : n_(n), entries_(static_cast<size_t>(n) * n) {
    if (n <= 0) throw std::invalid_argument("WeylOp: size must be positive");
  }
  static WeylOp scalar(int n, const WeylPoly& w) {
    WeylOp r(n);
    for (int i = 0; i < n; ++i) r.at(i, i) = w;
    return r;
  }

  int size() const { return n_; }
  WeylPoly& at(int i, int j) { return entries_[static_cast<size_t>(i) * n_ + j]; }
  const WeylPoly& at(int i, int j) const { return entries_[static_cast<size_t>(i) * n_ + j]; }
  bool is_zero() const {
    for (const auto& e : entries_)
      if (!e.is_zero()) return false;
    return true;
  }
  bool is_p_free() const {
    for (const auto& e : entries_)
      if (!e.is_p_free()) return false;
    return true;
  }
  bool is_p_only() const {
    for (const auto& e : entries_)
      if (!e.is_p_only()) return false;
    return true;
  }
  bool right_divisible_by(const Poly& Q) const {
    for (const auto& e : entries_)
      if (!e.right_divisible_by(Q)) return false;
    return true;
  }

  WeylOp& operator+=(const WeylOp& o) {
    check_size(o);
    for (size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
    return *this;
  }
  WeylOp& operator-=(const WeylOp& o) {
    check_size(o);
    for (size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
    return *this;
  }
  friend WeylOp operator+(WeylOp a, const WeylOp& b) { return a += b; }
  friend WeylOp operator-(WeylOp a, const WeylOp& b) { return a -= b; }
  friend WeylOp operator*(const Rational& c, WeylOp w) {
    for (auto& e : w.entries_) e = c * e;
    return w;
  }
  friend WeylOp operator*(const WeylOp& a, const WeylOp& b) {
    a.check_size(b);
    WeylOp r(a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int k = 0; k < a.n_; ++k) {
        if (a.at(i, k).is_zero()) continue;
        for (int j = 0; j < a.n_; ++j)
          if (!b.at(k, j).is_zero()) r.at(i, j) += a.at(i, k) * b.at(k, j);
      }
    return r;
  }
  bool operator==(const WeylOp& o) const { return n_ == o.n_ && entries_ == o.entries_; }

  // [w, p] in M_n(W).
  WeylOp commutator_with_p() const {
    WeylOp pid = scalar(n_, WeylPoly::p());
    return *this * pid - pid * *this;
  }

 private:
  void check_size(const WeylOp& o) const {
    if (n_ != o.n_) throw std::invalid_argument("WeylOp: size mismatch");
  }
  int n_;
  std::vector<WeylPoly> entries_;
};

inline std::string to_string(const WeylOp& w) {
  std::string out = "[";
  for (int i = 0; i < w.size(); ++i) {
    if (i) out += ",";
    out += "[";
    for (int j = 0; j < w.size(); ++j) {
      if (j) out += ", ";
      out += to_string(w.at(i, j));
    }
    out += "]";
  }
  return out + "]";
}

// A word in the free algebra on p, q with a rational coefficient.
struct WeylWord {
  Rational coeff{1};
  std::string letters;  // e.g. "qqp"
};

// Rewrites words with qp -> pq + 1 until the p-before-q normal form.
inline WeylPoly weyl_normal_form(const std::vector<WeylWord>& words) {
  WeylPoly r;
  for (const auto& w : words) {
    WeylPoly m(w.coeff);
    for (char ch : w.letters) {
      if (ch == 'p')
        m = m * WeylPoly::p();
      else if (ch == 'q')
        m = m * WeylPoly::q();
      else
        throw std::invalid_argument("weyl_normal_form: letters must be p or q");
    }
    r += m;
  }
  return r;
}

// The operator a(k) in M_n(W) of a = sum_s ((-D)^s/s!)(x)A_s(v):
//   a(k) = sum_s C(k,s) A_s(p) q^{k-s}.
// In the dense D-expansion a = sum_s D^s(x)C_s(v) this means A_s = (-1)^s s! C_s.
inline WeylOp realize(const CendElem& a, int k) {
  WeylOp r(a.size());
  if (k < 0) return r;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) {
      const PolyDV& e = a.at(i, j);
      for (int s = 0; s <= e.deg_d() && s <= k; ++s) {
        Integer c = binom(k, s) * factorial(s);
        if (s % 2) c = -c;
        r.at(i, j) += WeylPoly::from_p_poly(e.d_coeff(s), k - s, Rational(c));
      }
    }
  return r;
}

// Operator-product cross-check: a(n) b(m) = sum_s C(n,s) (a (n-s) b)(m+s).
inline bool cross_check_operator_product(const CendElem& a, const CendElem& b, int n, int m) {
  if (a.size() != b.size())
    throw std::invalid_argument("cross_check_operator_product: size mismatch");
  WeylOp lhs = realize(a, n) * realize(b, m);
  WeylOp rhs(a.size());
  for (int s = 0; s <= n; ++s) {
    Integer c = binom(n, s);
    if (c == 0) continue;
    rhs += Rational(c) * realize(nth_product(a, b, n - s), m + s);
  }
  return lhs == rhs;
}

class interpolation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A finite operator sequence b(0), ..., b(N) subject to translation
// invariance [b(n), p] = n b(n-1).
struct OperatorSequence {
  std::vector<WeylOp> ops;

  bool satisfies_invariant() const {
    for (size_t n = 1; n < ops.size(); ++n) {
      WeylOp expect = Rational(static_cast<int>(n)) * ops[n - 1];
      if (!(ops[n].commutator_with_p() == expect)) return false;
    }
    return true;
  }
};

// Reconstruction of a conformal element from its operator sequence, the
// finite substitute for the limit argument: recover
//   A_s(p) = b(s) - sum_{r<s} C(s,r) A_r(p) q^{s-r},
// each remainder must be a polynomial in p only. max_d_degree is an explicit
// contract: A_s must vanish for s > max_d_degree. The result satisfies
// realize(result, k) = b(k) for every k in the sequence.
inline CendElem interpolate_conformal(const OperatorSequence& seq, int size, int max_d_degree) {
  if (seq.ops.empty()) throw interpolation_error("empty operator sequence");
  if (static_cast<int>(seq.ops.size()) <= max_d_degree)
    throw interpolation_error("sequence shorter than the requested D-degree bound");
  if (!seq.satisfies_invariant())
    throw interpolation_error("sequence violates translation invariance");

  std::vector<WeylOp> A;  // A_s(p), entrywise p-only
  for (int s = 0; s < static_cast<int>(seq.ops.size()); ++s) {
    WeylOp rem = seq.ops[static_cast<size_t>(s)];
    for (int r = 0; r < s; ++r) {
      WeylOp shift =
          A[static_cast<size_t>(r)] * WeylOp::scalar(size, WeylPoly::q(s - r));
      rem -= Rational(binom(s, r)) * shift;
    }
    if (!rem.is_p_only())
      throw interpolation_error("remainder at step " + std::to_string(s) +
                                " is not a polynomial in p; sequence is not conformal "
                                "within the given bounds");
    if (s > max_d_degree && !rem.is_zero())
      throw interpolation_error("nonzero A_s beyond the D-degree bound");
    A.push_back(rem);
  }

  CendElem result(size);
  for (int s = 0; s < static_cast<int>(A.size()); ++s) {
    Rational c(Integer((s % 2) ? -1 : 1), factorial(s));
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) {
        Poly f = A[static_cast<size_t>(s)].at(i, j).p_poly();
        if (f.is_zero()) continue;
        PolyDV term = PolyDV(c * f);
        for (int t = 0; t < s; ++t) term = term.mul_d();
        result.at(i, j) += term;
      }
  }
  for (int k = 0; k < static_cast<int>(seq.ops.size()); ++k)
    if (!(realize(result, k) == seq.ops[static_cast<size_t>(k)]))
      throw interpolation_error("round-trip mismatch at k=" + std::to_string(k));
  return result;
}

class degree_overflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vectors in Q[t] (x) Q^n with t-degree capped; p raises degree by one
// (hard error past the cap), q differentiates.
struct TruncatedModule {
  int n = 1;
  int degree_cap = 16;

  using Vec = std::vector<Poly>;  // length n, entries in t

  Vec basis(int t_deg, int comp) const {
    Vec u(static_cast<size_t>(n));
    u[static_cast<size_t>(comp)] = Poly::monomial(t_deg);
    return u;
  }

  Poly apply_scalar(const WeylPoly& w, const Poly& f) const {
    Poly r;
    for (const auto& [k, c] : w.terms()) {
      Poly g = f.deriv(k.second);
      g = Poly::monomial(k.first) * g;
      if (g.degree() > degree_cap)
        throw degree_overflow("module degree cap " + std::to_string(degree_cap) +
                              " exceeded; raise the cap");
      r += c * g;
    }
    return r;
  }

  Vec act(const WeylOp& w, const Vec& u) const {
    if (w.size() != n || static_cast<int>(u.size()) != n)
      throw std::invalid_argument("TruncatedModule::act: size mismatch");
    Vec r(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!w.at(i, j).is_zero() && !u[static_cast<size_t>(j)].is_zero())
          r[static_cast<size_t>(i)] += apply_scalar(w.at(i, j), u[static_cast<size_t>(j)]);
    return r;
  }
};

struct TcReport {
  struct Check {
    std::string what;
    bool pass;
  };
  std::vector<Check> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Curr_n fixture: every realized operator of the matrix-unit generators is
// p-free (lands in M_n(k[q])), and realized products stay p-free.
inline TcReport tc_check_curr(int n, int k_bound) {
  TcReport rep;
  std::vector<CendElem> gens;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gens.push_back(CendElem::unit(n, i, j));
  bool p_free = true, closed = true;
  std::vector<WeylOp> realized;
  for (const auto& g : gens)
    for (int k = 0; k <= k_bound; ++k) {
      WeylOp w = realize(g, k);
      if (!w.is_p_free()) p_free = false;
      realized.push_back(w);
    }
  for (size_t i = 0; i < realized.size() && closed; ++i)
    for (size_t j = 0; j < realized.size() && closed; ++j)
      if (!(realized[i] * realized[j]).is_p_free()) closed = false;
  rep.checks.push_back({"realizations p-free", p_free});
  rep.checks.push_back({"products closed in M_n(k[q])", closed});
  return rep;
}

// Cend_{1,Q} fixture: realized operators of the generators v^j Q(v-D) lie in
// W Q(p), and realized products stay there.
inline TcReport tc_check_cend1q(const Poly& Q, int v_deg_bound, int k_bound) {
  if (Q.is_zero()) throw std::invalid_argument("tc_check_cend1q: Q must be nonzero");
  TcReport rep;
  PolyDV shifted = shift_v_minus_d(Q);
  std::vector<CendElem> gens;
  for (int j = 0; j <= v_deg_bound; ++j)
    gens.push_back(CendElem::scalar(1, PolyDV(Poly::monomial(j)) * shifted));
  bool in_ideal = true, closed = true;
  std::vector<WeylOp> realized;
  for (const auto& g : gens)
    for (int k = 0; k <= k_bound; ++k) {
      WeylOp w = realize(g, k);
      if (!w.right_divisible_by(Q)) in_ideal = false;
      realized.push_back(w);
    }
  for (size_t i = 0; i < realized.size() && closed; ++i)
    for (size_t j = 0; j < realized.size() && closed; ++j)
      if (!(realized[i] * realized[j]).right_divisible_by(Q)) closed = false;
  rep.checks.push_back({"realizations in W*Q(p)", in_ideal});
  rep.checks.push_back({"products closed in W*Q(p)", closed});
  return rep;
}

}  // namespace cendkit
