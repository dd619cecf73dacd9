#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cendkit/counterexample.hpp"

using namespace cendkit;

namespace {

Poly rand_poly(std::mt19937& rng, int max_deg) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> keep(0, 2);
  Poly p;
  for (int d = 0; d <= max_deg; ++d)
    if (keep(rng) == 0) p += Poly::monomial(d, Rational(coef(rng)));
  return p;
}

CxElem rand_cx(std::mt19937& rng, int max_k, int max_deg) {
  CxElem x;
  for (int k = 0; k <= max_k; ++k) x.add(k, rand_poly(rng, max_deg), rand_poly(rng, max_deg));
  return x;
}

// p(D, v) with D substituted by v - w, returned as a polynomial in (w, v)
// reusing the D slot for w.
PolyDV substitute_d_by_v_minus_w(const PolyDV& p) {
  PolyDV q;
  for (int d = 0; d <= p.deg_d(); ++d) {
    const Poly& f = p.d_coeff(d);
    if (f.is_zero()) continue;
    for (int t = 0; t <= d; ++t) {
      Integer c = binom(d, t);
      if (t % 2) c = -c;
      q += PolyDV::monomial(t, 0, Rational(c)) * PolyDV(Poly::monomial(d - t) * f);
    }
  }
  return q;
}

// Right-divisibility by (v-D)^2 in k[D,v]: the substitution v -> D kills the
// value and the first v-derivative.
bool divisible_by_v_minus_d_squared(const PolyDV& p) {
  auto collapse = [](const PolyDV& x) {
    Poly out;  // polynomial in D alone
    for (int d = 0; d <= x.deg_d(); ++d) {
      const Poly& f = x.d_coeff(d);
      for (int b = 0; b <= f.degree(); ++b)
        if (f[b] != 0) out += Poly::monomial(d + b, f[b]);
    }
    return out;
  };
  return collapse(p).is_zero() && collapse(p.deriv_v()).is_zero();
}

}  // namespace

TEST_CASE("embedding of the generating atoms") {
  PolyDV v2(Poly::monomial(2));
  PolyDV sq = shift_v_minus_d(Poly::monomial(2));

  CendElem m = cx_embed(CxElem::atom(Poly(Rational(1)), Poly()));
  CHECK(m.at(0, 0) == v2);
  CHECK(m.at(0, 1) == v2);
  CHECK(m.at(1, 0).is_zero());
  CHECK(m.at(1, 1) == sq);

  CHECK(cx_embed(CxElem()).is_zero());
  CHECK(cx_embed(CxElem::atom(Poly(), Poly())).is_zero());

  CendElem w = cx_embed(CxElem::atom(Poly(), Poly(Rational(1)), 1));
  CHECK(w.at(0, 0).is_zero());
  CHECK(w.at(0, 1) == shift_v_minus_d(Poly::monomial(1)) * v2 * sq);
  CHECK(w.at(1, 0).is_zero());
  CHECK(w.at(1, 1).is_zero());
}

TEST_CASE("closed product formula on atoms") {
  CxElem a10 = CxElem::atom(Poly(Rational(1)), Poly());
  CHECK(cx_product(a10, a10, 0) == CxElem::atom(Poly::monomial(2), Poly(Rational(1))));
  CHECK(cx_product(a10, a10, 1) == CxElem::atom(Poly::monomial(1, Rational(2)), Poly()));
  CHECK(cx_product(a10, CxElem(), 2).is_zero());
  CHECK(cx_product(CxElem(), a10, 0).is_zero());
}

TEST_CASE("products agree with the ambient 2x2 product") {
  std::mt19937 rng(2026);
  for (int trial = 0; trial < 6; ++trial) {
    CxElem x = rand_cx(rng, 2, 5), y = rand_cx(rng, 2, 5);
    CendElem ex = cx_embed(x), ey = cx_embed(y);
    int bound = locality_bound(ex, ey);
    for (int n = 0; n < bound; ++n)
      CHECK(cx_embed(cx_product(x, y, n)) == nth_product(ex, ey, n));
    CHECK(cx_product(x, y, bound).is_zero());
  }
}

TEST_CASE("polynomial and derivation actions stay inside the algebra") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 4; ++trial) {
    CxElem x = rand_cx(rng, 2, 4);
    Poly h = rand_poly(rng, 3);
    // h(v) . a(f,g) = a(hf, hg)
    CendElem lhs = cx_embed(h * x);
    CendElem rhs = cx_embed(x);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) rhs.at(i, j) = h * rhs.at(i, j);
    CHECK(lhs == rhs);
    CHECK(cx_embed(x.d_action()) == d_action(cx_embed(x)));
  }
}

TEST_CASE("radical: membership and two-step nilpotency") {
  CHECK(cx_radical_membership(CxElem()));
  CHECK(cx_radical_membership(CxElem::atom(Poly(), Poly::monomial(3), 2)));
  CHECK_FALSE(cx_radical_membership(CxElem::atom(Poly(Rational(1)), Poly())));

  std::mt19937 rng(11);
  for (int trial = 0; trial < 4; ++trial) {
    CxElem r, s;
    for (int k = 0; k <= 2; ++k) {
      r.add(k, Poly(), rand_poly(rng, 4));
      s.add(k, Poly(), rand_poly(rng, 4));
    }
    int bound = locality_bound(cx_embed(r), cx_embed(s)) + 2;
    CHECK(cx_radical_square_zero(r, s, bound));
  }
}

TEST_CASE("quotient map onto the rank-one corner algebra") {
  CHECK(cx_theta(CxElem::atom(Poly(Rational(1)), Poly())) == shift_v_minus_d(Poly::monomial(2)));
  CHECK(cx_theta(CxElem::atom(Poly(), Poly::monomial(2))).is_zero());
  CHECK(cx_theta(CxElem::atom(Poly::monomial(1), Poly(), 1)) ==
        Poly::monomial(1) * shift_v_minus_d(Poly::monomial(3)));

  std::mt19937 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    CxElem x = rand_cx(rng, 2, 4), y = rand_cx(rng, 2, 4);
    // homomorphism for every n
    int bound = locality_bound(cx_embed(x), cx_embed(y)) + 1;
    for (int n = 0; n < bound; ++n)
      CHECK(cx_theta(cx_product(x, y, n)) == c1_product(cx_theta(x), cx_theta(y), n));
    // kernel = radical; image divisible by (v-D)^2
    CHECK(cx_theta(x).is_zero() == cx_radical_membership(x));
    CHECK(divisible_by_v_minus_d_squared(cx_theta(x)));
  }
}

TEST_CASE("forced shape of a splitting at the unit") {
  CHECK_THROWS_AS(cx_forced_psi(0), std::invalid_argument);

  for (int K : {1, 2, 3}) {
    PsiAnsatz sol = cx_forced_psi(K);
    CHECK(static_cast<int>(sol.basis.size()) == K);
    for (const PolyDV& vec : sol.basis) {
      // Every solution is a constant combination of (v-D)^k - v^k, k = 1..K.
      PolyDV q = substitute_d_by_v_minus_w(vec);
      PolyDV rebuilt;
      bool coeffs_constant = true;
      for (int k = 1; k <= q.deg_d(); ++k) {
        const Poly& ak = q.d_coeff(k);
        if (ak.degree() > 0) coeffs_constant = false;
        if (!ak.is_zero()) rebuilt += ak[0] * psi_basis_vector(k);
      }
      CHECK(coeffs_constant);
      CHECK(vec == rebuilt);
    }
    // Each expected generator solves the constraint, so the spans agree.
    for (int k = 1; k <= K; ++k) {
      PolyDV psi = psi_basis_vector(k);
      PolyDV v2(Poly::monomial(2));
      CHECK(Rational(2) * psi == c1_product(psi, v2, 2) + c1_product(PolyDV(Rational(1)), v2 * psi, 2));
    }
  }
}

TEST_CASE("propagation: psi(f) = f psi(1) with a verified transcript") {
  PolyDV psi1 = psi_basis_vector(1) + Rational(2) * psi_basis_vector(2);
  Poly f = Poly::monomial(2, Rational(3)) + Poly::monomial(1, Rational(-1)) + Poly(Rational(5));
  PsiPropagation prop = cx_propagate_psi(psi1, f);
  CHECK(prop.all_pass());
  CHECK(prop.value == PolyDV(f) * psi1);
  CHECK(cx_propagate_psi(psi1, Poly()).value.is_zero());
  CHECK(cx_propagate_psi(psi1, Poly::variable()).value == PolyDV(Poly::variable()) * psi1);
}

TEST_CASE("witness instance leaves the constant discrepancy 1") {
  CHECK(cx_witness_discrepancy(psi_basis_vector(1)) == Rational(1));
  CHECK(cx_witness_discrepancy(psi_basis_vector(2)) == Rational(1));
  CHECK(cx_witness_discrepancy(psi_basis_vector(1) - Rational(3) * psi_basis_vector(2)) ==
        Rational(1));
}

TEST_CASE("the splitting system is infeasible; certificates replay") {
  for (int K : {1, 2, 3}) {
    ObstructionCertificate cert = cx_obstruction(K);
    CHECK(cert.constant == Rational(1));
    CHECK_FALSE(cert.tags.empty());
    CHECK(cert.tags.size() == cert.coefficients.size());
    CHECK(cert.replay());
  }
}

TEST_CASE("homogeneous control: dropping the cocycle term admits psi = 0") {
  CHECK(cx_homogeneous_feasible(1));
  CHECK(cx_homogeneous_feasible(2));
  CHECK(cx_homogeneous_feasible(3));
}
