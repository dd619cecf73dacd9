#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cendkit/fixtures.hpp"

using namespace cendkit;
using fixtures::Curr2WithRadical;
using fixtures::identity;
using fixtures::unit_matrix;

namespace {

int iteration_count(const LiftReport& rep, const std::string& stage) {
  for (const auto& [s, n] : rep.iterations)
    if (s == stage) return n;
  return -1;
}

}  // namespace

TEST_CASE("lift_idempotent_zero on the triangular fixture") {
  auto fix = fixtures::triangular_current();
  LiftReport rep;
  CendElem e0 = fix.e(1, 1) + fix.e(2, 2) + fix.e(1, 2);
  CendElem e = lift_idempotent_zero(fix.ctx, e0, rep);
  CHECK(e == fix.e(1, 1) + fix.e(2, 2));
  CHECK(iteration_count(rep, "lift0") == 1);
  CHECK(rep.all_pass());
}

TEST_CASE("lift_idempotent_zero: trivial and failing inputs") {
  auto fix = fixtures::triangular_current();
  LiftReport rep;
  CendElem e = fix.e(1, 1);
  CHECK(lift_idempotent_zero(fix.ctx, e, rep) == e);
  CHECK(iteration_count(rep, "lift0") == 0);
  CHECK(lift_idempotent_zero(fix.ctx, CendElem(3), rep).is_zero());
  // Not idempotent modulo the ideal.
  CHECK_THROWS_AS(lift_idempotent_zero(fix.ctx, Rational(2) * fix.e(1, 1), rep), lift_error);
}

TEST_CASE("lift_idempotent_full reaches a full idempotent through operators") {
  // e0 = E_11 + v E_12 satisfies e0 (0) e0 = e0 but e0 (1) e0 = E_12 != 0.
  auto fix = fixtures::generator_perturbation();
  CendElem e0(2);
  e0.at(0, 0) = PolyDV(Rational(1));
  e0.at(0, 1) = PolyDV(Poly::variable());
  REQUIRE(nth_product(e0, e0, 0) == e0);
  REQUIRE_FALSE(is_idempotent(e0));

  LiftReport rep;
  CendElem h = lift_idempotent_full(fix.ctx, e0, rep);
  CHECK(is_idempotent(h));
  CHECK(fix.ctx.in_ideal(h - e0));
  CHECK(rep.all_pass());
}

TEST_CASE("lift_orthogonal_family on the triangular fixture") {
  auto fix = fixtures::triangular_current();

  SUBCASE("clean classes lift to themselves") {
    LiftReport rep;
    auto es = lift_orthogonal_family(fix.ctx, {fix.e(1, 1), fix.e(2, 2), fix.e(3, 3)}, rep);
    REQUIRE(es.size() == 3);
    CHECK(es[0] == fix.e(1, 1));
    CHECK(es[1] == fix.e(2, 2));
    CHECK(es[2] == fix.e(3, 3));
    CHECK(rep.all_pass());
  }

  SUBCASE("perturbed classes lift to exact orthogonal idempotents") {
    LiftReport rep;
    auto es = lift_orthogonal_family(
        fix.ctx, {fix.e(1, 1) + fix.e(1, 2), fix.e(2, 2) + fix.e(2, 3), fix.e(3, 3)}, rep);
    REQUIRE(es.size() == 3);
    for (size_t i = 0; i < es.size(); ++i)
      for (size_t j = 0; j < es.size(); ++j) {
        CendElem expect = i == j ? es[j] : CendElem(3);
        CHECK(nth_product(es[i], es[j], 0) == expect);
      }
    CHECK(rep.all_pass());
  }

  SUBCASE("size-1 family equal to the unit class") {
    LiftReport rep;
    auto es = lift_orthogonal_family(fix.ctx, {identity(3) + fix.e(1, 3)}, rep);
    REQUIRE(es.size() == 1);
    CHECK(is_idempotent(es[0]));
    CHECK(fix.ctx.in_ideal(es[0] - identity(3)));
  }

  SUBCASE("empty family") {
    LiftReport rep;
    CHECK(lift_orthogonal_family(fix.ctx, {}, rep).empty());
  }

  SUBCASE("non-orthogonal classes are rejected") {
    LiftReport rep;
    CHECK_THROWS_AS(lift_orthogonal_family(fix.ctx, {fix.e(1, 1), fix.e(1, 1)}, rep),
                    lift_error);
  }
}

TEST_CASE("lift_conformal_generator: trivial ambient case") {
  auto fix = fixtures::ambient_cend1();
  LiftReport rep;
  CendElem v(1);
  v.at(0, 0) = PolyDV(Poly::variable());
  CHECK(lift_conformal_generator(fix.ctx, v, rep) == v);
  CHECK(iteration_count(rep, "generator") == 0);
}

TEST_CASE("lift_conformal_generator removes a nilpotent perturbation") {
  auto fix = fixtures::generator_perturbation();
  // N(e, x0) = 3: one locality-reduction step, then the final correction.
  REQUIRE(locality(*fix.ctx.unit, fix.x0).value == 3);
  LiftReport rep;
  CendElem x = lift_conformal_generator(fix.ctx, fix.x0, rep);
  CHECK(x == fix.expected);
  CHECK(nth_product(*fix.ctx.unit, x, 1) == *fix.ctx.unit);
  CHECK(nth_product(x, *fix.ctx.unit, 0) == x);
  CHECK(rep.all_pass());
}

TEST_CASE("lift_conformal_generator: precondition violations") {
  auto fix = fixtures::generator_perturbation();
  LiftReport rep;
  // e (1) x = e fails mod I for x = v^2 Id.
  CendElem x(2);
  x.at(0, 0) = PolyDV(Poly::monomial(2));
  x.at(1, 1) = PolyDV(Poly::monomial(2));
  CHECK_THROWS_AS(lift_conformal_generator(fix.ctx, x, rep), lift_error);
  // x (0) e = x fails when e is a corner idempotent missing x's support.
  LiftContext corner = fix.ctx;
  corner.unit = unit_matrix(2, 1, 1);
  CendElem y(2);
  y.at(1, 1) = PolyDV(Poly::variable());
  CHECK_THROWS_AS(lift_conformal_generator(corner, y, rep), lift_error);
}

TEST_CASE("build_matrix_units on the current-with-radical fixture") {
  auto fix = fixtures::curr2_with_radical();
  LiftReport rep;
  auto diag = lift_orthogonal_family(fix.ctx, fix.split.blocks[0].diag, rep);
  MatrixUnitSystem sys = build_matrix_units(fix.ctx, diag, fix.split.blocks[0].v_row,
                                            fix.split.blocks[0].v_col, rep);
  CHECK(rep.all_pass());
  REQUIRE(sys.N == 2);
  // Diagonal units lift exactly; off-diagonal ones may carry radical tails
  // but must land in the right class.
  CHECK(sys.units[0][0] == Curr2WithRadical::u(1, 1));
  CHECK(sys.units[1][1] == Curr2WithRadical::u(2, 2));
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      CHECK(fix.ctx.in_ideal(sys.units[i - 1][j - 1] - Curr2WithRadical::u(i, j)));
}

TEST_CASE("build_matrix_units: degenerate inputs") {
  SUBCASE("N = 1") {
    auto fix = fixtures::triangular_current();
    LiftReport rep;
    MatrixUnitSystem sys = build_matrix_units(fix.ctx, {fix.e(1, 1)}, {}, {}, rep);
    CHECK(sys.N == 1);
    CHECK(sys.units[0][0] == fix.e(1, 1));
    CHECK(rep.all_pass());
  }
  SUBCASE("zero ideal, preimages already matrix units") {
    LiftContext ctx{2, 0, std::nullopt, {HSpan::zero(2, 0), 1}, identity(2)};
    LiftReport rep;
    MatrixUnitSystem sys = build_matrix_units(
        ctx, {unit_matrix(2, 1, 1), unit_matrix(2, 2, 2)}, {unit_matrix(2, 1, 2)},
        {unit_matrix(2, 2, 1)}, rep);
    CHECK(rep.all_pass());
    for (int i = 1; i <= 2; ++i)
      for (int j = 1; j <= 2; ++j) CHECK(sys.units[i - 1][j - 1] == unit_matrix(2, i, j));
  }
}

TEST_CASE("verify_cend_relations") {
  MatrixUnitSystem sys;
  sys.N = 2;
  sys.units = {{unit_matrix(2, 1, 1), unit_matrix(2, 1, 2)},
               {unit_matrix(2, 2, 1), unit_matrix(2, 2, 2)}};
  CendElem vid(2);
  vid.at(0, 0) = PolyDV(Poly::variable());
  vid.at(1, 1) = PolyDV(Poly::variable());

  IdentityReport ok = verify_cend_relations(sys, vid);
  for (const auto& c : ok.checks) CHECK(c.pass);

  // x = v^2 Id fails the n >= 2 relation.
  CendElem v2id(2);
  v2id.at(0, 0) = PolyDV(Poly::monomial(2));
  v2id.at(1, 1) = PolyDV(Poly::monomial(2));
  IdentityReport bad = verify_cend_relations(sys, v2id);
  bool high_fails = false;
  for (const auto& c : bad.checks)
    if (c.identity == "e_ij (n) x = 0 for n >= 2") {
      high_fails = !c.pass;
      CHECK_FALSE(c.witness.empty());
    }
  CHECK(high_fails);

  MatrixUnitSystem one;
  one.N = 1;
  one.units = {{identity(1)}};
  CendElem v(1);
  v.at(0, 0) = PolyDV(Poly::variable());
  for (const auto& c : verify_cend_relations(one, v).checks) CHECK(c.pass);
}

TEST_CASE("split_radical on the current-with-radical fixture") {
  auto fix = fixtures::curr2_with_radical();
  SplitResult res = split_radical(fix.ctx, fix.split);
  CHECK(res.report.all_pass());
  REQUIRE(res.semisimple_span.has_value());
  const HSpan& S = *res.semisimple_span;
  CHECK(S.rank() == 4);
  CHECK(S.contains(Curr2WithRadical::u(1, 1)));
  CHECK(S.contains(Curr2WithRadical::u(2, 2)));
  // Every generator of S is in the right class modulo the radical.
  for (const auto& g : res.semisimple_generators)
    CHECK(fix.ctx.algebra->span.contains(g));
  // Direct sum with the radical.
  CHECK(span_sum(S, fix.ctx.ideal.span).rank() == fix.ctx.algebra->span.rank());
  CHECK(S.rank() + fix.ctx.ideal.span.rank() == fix.ctx.algebra->span.rank());
}

TEST_CASE("split_radical on the triangular fixture: S = diagonal span") {
  auto fix = fixtures::triangular_current();
  SplitInput input;
  input.unit_class = identity(3) + fix.e(1, 3);
  for (int i = 1; i <= 3; ++i) {
    BlockSpec blk;
    blk.kind = BlockSpec::Kind::curr;
    blk.N = 1;
    blk.diag = {fix.e(i, i)};
    input.blocks.push_back(std::move(blk));
  }
  SplitResult res = split_radical(fix.ctx, input);
  CHECK(res.report.all_pass());
  REQUIRE(res.semisimple_span.has_value());
  CHECK(res.semisimple_span->rank() == 3);
  for (int i = 1; i <= 3; ++i) CHECK(res.semisimple_span->contains(fix.e(i, i)));
}

TEST_CASE("split_radical is idempotent: re-running on S returns S") {
  auto fix = fixtures::curr2_with_radical();
  SplitResult first = split_radical(fix.ctx, fix.split);
  REQUIRE(first.semisimple_span.has_value());

  LiftContext sctx{4, 0, close_subalgebra(first.semisimple_span->basis(), 4, 0),
                   IdealPresentation{HSpan::zero(4, 0), 1}, identity(4)};
  // Block data from the first run's own matrix units (row-major order).
  const auto& g = first.semisimple_generators;
  REQUIRE(g.size() == 4);
  SplitInput input;
  input.unit_class = g[0] + g[3];
  BlockSpec blk;
  blk.kind = BlockSpec::Kind::curr;
  blk.N = 2;
  blk.diag = {g[0], g[3]};
  blk.v_row = {g[1]};
  blk.v_col = {g[2]};
  input.blocks.push_back(std::move(blk));

  SplitResult again = split_radical(sctx, input);
  REQUIRE(again.semisimple_span.has_value());
  CHECK(again.semisimple_span->rank() == first.semisimple_span->rank());
  CHECK(again.semisimple_span->contains_span(*first.semisimple_span));
}

TEST_CASE("split_radical cend path in ambient Cend_1") {
  auto fix = fixtures::ambient_cend1();
  SplitResult res = split_radical(fix.ctx, fix.split);
  CHECK(res.report.all_pass());
  CendElem v(1);
  v.at(0, 0) = PolyDV(Poly::variable());
  bool has_v = false;
  for (const auto& g : res.semisimple_generators)
    if (g == v) has_v = true;
  CHECK(has_v);
}

TEST_CASE("split_radical rejects the truncated non-splitting algebra") {
  auto fix = fixtures::truncated_counterexample();
  try {
    split_radical(fix.ctx, fix.split);
    FAIL("expected the unit-lifting precondition to fail");
  } catch (const lift_error& ex) {
    CHECK(std::string(ex.what()).find("unit-lifting precondition failed") != std::string::npos);
  }
}
