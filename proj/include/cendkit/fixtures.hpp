#pragma once

#include "cendkit/counterexample.hpp"
#include "cendkit/lifting.hpp"

// Reusable concrete algebras for tests: current algebras with nilpotent
// radicals, a perturbed-generator setup, and the truncated non-splitting
// algebra.
namespace cendkit::fixtures {

// 1 x E_{ij} (1-based indices) in Cend_n.
inline CendElem unit_matrix(int n, int i, int j) {
  CendElem x(n);
  x.at(i - 1, j - 1) = PolyDV(Rational(1));
  return x;
}

inline CendElem identity(int n) {
  CendElem x(n);
  for (int i = 0; i < n; ++i) x.at(i, i) = PolyDV(Rational(1));
  return x;
}

// Upper-triangular 3x3 current algebra in Cend_3 with the strict-upper
// radical; C/R is a product of three copies of Curr_1. Nilpotency index 3.
struct TriangularCurrent {
  LiftContext ctx;
  CendElem e(int i, int j) const { return unit_matrix(3, i, j); }
};

inline TriangularCurrent triangular_current() {
  std::vector<CendElem> gens;
  for (int i = 1; i <= 3; ++i)
    for (int j = i; j <= 3; ++j) gens.push_back(unit_matrix(3, i, j));
  SubalgebraPresentation alg = close_subalgebra(std::move(gens), 3, 0);
  HSpan rad(3, 0, {unit_matrix(3, 1, 2), unit_matrix(3, 1, 3), unit_matrix(3, 2, 3)});
  IdealPresentation ideal{rad, nilpotency_index(rad, 10)};
  TriangularCurrent f{{3, 0, std::move(alg), std::move(ideal), identity(3)}};
  return f;
}

// C = Curr_2 + a square-zero current radical, realized in Cend_4 as
//   u(A) = [[A, 0], [0, A]],  r(B) = [[0, B], [0, 0]]  (2x2 blocks),
// so that u(A) (0) u(B) = u(AB), u/r products follow block matrix
// multiplication, r (0) r = 0, and C/R ≅ Curr_2.
struct Curr2WithRadical {
  LiftContext ctx;
  SplitInput split;

  static CendElem u(int i, int j) {
    CendElem x(4);
    x.at(i - 1, j - 1) = PolyDV(Rational(1));
    x.at(i + 1, j + 1) = PolyDV(Rational(1));
    return x;
  }
  static CendElem r(int i, int j) { return unit_matrix(4, i, j + 2); }
};

inline Curr2WithRadical curr2_with_radical() {
  std::vector<CendElem> gens, rgens;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      gens.push_back(Curr2WithRadical::u(i, j));
      gens.push_back(Curr2WithRadical::r(i, j));
      rgens.push_back(Curr2WithRadical::r(i, j));
    }
  SubalgebraPresentation alg = close_subalgebra(std::move(gens), 4, 0);
  HSpan rad(4, 0, std::move(rgens));
  IdealPresentation ideal{rad, nilpotency_index(rad, 10)};

  Curr2WithRadical f{{4, 0, std::move(alg), std::move(ideal), identity(4)}, {}};
  // One Curr_2 block; the classes carry radical perturbations on purpose.
  BlockSpec blk;
  blk.kind = BlockSpec::Kind::curr;
  blk.N = 2;
  blk.diag = {Curr2WithRadical::u(1, 1) + Curr2WithRadical::r(1, 1),
              Curr2WithRadical::u(2, 2)};
  blk.v_row = {Curr2WithRadical::u(1, 2) + Curr2WithRadical::r(1, 2)};
  blk.v_col = {Curr2WithRadical::u(2, 1)};
  f.split.unit_class = identity(4) + Curr2WithRadical::r(2, 1);
  f.split.blocks.push_back(std::move(blk));
  return f;
}

// Generator lifting in ambient Cend_2: unit e = Id, square-zero ideal
// I = k[D]{v^k E_12}, and a perturbed generator class x0 = v Id + p(v) E_12.
struct GeneratorPerturbation {
  LiftContext ctx;
  CendElem x0;        // perturbed class
  CendElem expected;  // v Id, the exact generator the lift must reach
};

inline GeneratorPerturbation generator_perturbation() {
  const int vb = 8;
  std::vector<CendElem> igens;
  for (int k = 0; k <= vb; ++k) {
    CendElem g(2);
    g.at(0, 1) = PolyDV(Poly::monomial(k));
    igens.push_back(std::move(g));
  }
  HSpan rad(2, vb, std::move(igens));
  IdealPresentation ideal{rad, nilpotency_index(rad, 5)};
  GeneratorPerturbation f{{2, vb, std::nullopt, std::move(ideal), identity(2)},
                          CendElem(2), CendElem(2)};
  f.expected = CendElem(2);
  f.expected.at(0, 0) = PolyDV(Poly::variable());
  f.expected.at(1, 1) = PolyDV(Poly::variable());
  f.x0 = f.expected;
  f.x0.at(0, 1) = PolyDV(Poly::monomial(2) + Poly::monomial(1));  // v^2 + v
  return f;
}

// Finite window of the non-splitting algebra: the span of
// (v-D)^k a(v^i, 0) and (v-D)^k a(0, v^i) for k, i <= 2, inside Cend_2.
// The presentation is deliberately marked not product-closed (the full
// algebra has unbounded v-degree); the radical part is exact.
struct TruncatedCounterexample {
  LiftContext ctx;
  SplitInput split;  // unit candidate a(1,0): fails the unit hypothesis
};

inline TruncatedCounterexample truncated_counterexample() {
  const int vb = 8;
  std::vector<CendElem> gens, rgens;
  for (int k = 0; k <= 2; ++k)
    for (int i = 0; i <= 2; ++i) {
      gens.push_back(cx_embed(CxElem::atom(Poly::monomial(i), Poly(), k)));
      CendElem r = cx_embed(CxElem::atom(Poly(), Poly::monomial(i), k));
      gens.push_back(r);
      rgens.push_back(std::move(r));
    }
  SubalgebraPresentation alg{HSpan(2, vb, std::move(gens)), false, 0};
  HSpan rad(2, vb, std::move(rgens));
  IdealPresentation ideal{rad, nilpotency_index(rad, 5)};
  TruncatedCounterexample f{{2, vb, std::move(alg), std::move(ideal), std::nullopt}, {}};
  f.split.unit_class = cx_embed(CxElem::atom(Poly(Rational(1)), Poly()));
  BlockSpec blk;
  blk.kind = BlockSpec::Kind::cend;
  blk.N = 1;
  blk.diag = {f.split.unit_class};
  f.split.blocks.push_back(std::move(blk));
  return f;
}

// Degenerate pipeline input: ambient Cend_1, zero radical, one cend block
// generated by v. Exercises the cend path with nothing to correct.
struct AmbientCend1 {
  LiftContext ctx;
  SplitInput split;
};

inline AmbientCend1 ambient_cend1() {
  const int vb = 4;
  HSpan rad = HSpan::zero(1, vb);
  IdealPresentation ideal{rad, 1};
  AmbientCend1 f{{1, vb, std::nullopt, std::move(ideal), identity(1)}, {}};
  f.split.unit_class = identity(1);
  BlockSpec blk;
  blk.kind = BlockSpec::Kind::cend;
  blk.N = 1;
  blk.diag = {identity(1)};
  CendElem v(1);
  v.at(0, 0) = PolyDV(Poly::variable());
  blk.x1_class = v;
  f.split.blocks.push_back(std::move(blk));
  return f;
}

}  // namespace cendkit::fixtures
