#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cendkit/fixtures.hpp"
#include "cendkit/span.hpp"

using namespace cendkit;
using fixtures::identity;
using fixtures::unit_matrix;

namespace {

CendElem curr(int n, int i, int j) { return unit_matrix(n, i, j); }

std::vector<CendElem> curr_full(int n) {
  std::vector<CendElem> out;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) out.push_back(curr(n, i, j));
  return out;
}

}  // namespace

TEST_CASE("membership: witnesses and linearity") {
  CendElem g1 = curr(2, 1, 1), g2 = curr(2, 1, 2);
  HSpan s(2, 0, {g1, g2});

  // D-multiple of a generator, with the coefficient polynomial reported.
  auto m = s.membership(d_action(g1));
  CHECK(m.member);
  REQUIRE(m.witness.size() == 1);
  CHECK(m.witness[0].second == Poly::variable());

  CHECK(s.contains(g1 + Rational(3) * g2));
  CHECK(s.contains(d_action(g2) - g1));

  // A fresh basis direction is not a member, and adjoining it grows the rank.
  CendElem fresh = curr(2, 2, 2);
  CHECK_FALSE(s.contains(fresh));
  CHECK(HSpan(2, 0, {g1, g2, fresh}).rank() == s.rank() + 1);
}

TEST_CASE("membership: closure under rational combinations and D") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> coef(-4, 4);
  HSpan s(2, 1, {curr(2, 1, 1), curr(2, 2, 1), d_action(curr(2, 1, 2))});
  auto bas = s.basis();
  for (int t = 0; t < 10; ++t) {
    CendElem x(2);
    for (const auto& b : bas) x += Rational(coef(rng)) * b;
    CHECK(s.contains(x));
    CHECK(s.contains(d_action(x)));
  }
}

TEST_CASE("membership: v-degree bound is a hard error") {
  HSpan s(1, 1, {});
  CendElem x(1);
  x.at(0, 0) = PolyDV(Poly::monomial(2));
  CHECK_THROWS_AS((void)s.contains(x), bound_exceeded);
}

TEST_CASE("close_subalgebra: full current algebra is already closed") {
  SubalgebraPresentation p = close_subalgebra(curr_full(2), 2, 0);
  CHECK(p.closed_under_products);
  CHECK(p.span.rank() == 4);
  // Fixed point: re-closing changes nothing.
  SubalgebraPresentation q = close_subalgebra(p.span.basis(), 2, 0);
  CHECK(q.span.rank() == p.span.rank());
  CHECK(p.span.contains_span(q.span));
}

TEST_CASE("close_subalgebra: escape of the v-degree window is reported") {
  CendElem v(1);
  v.at(0, 0) = PolyDV(Poly::variable());
  // v (0) v = v^2, then v^3, ... — must hit the window.
  try {
    close_subalgebra({v}, 1, 4);
    FAIL("expected bound_exceeded");
  } catch (const bound_exceeded& ex) {
    CHECK(std::string(ex.what()).find("v-degree bound 4") != std::string::npos);
  }
}

TEST_CASE("close_subalgebra: empty input gives the zero span") {
  SubalgebraPresentation p = close_subalgebra({}, 2, 0);
  CHECK(p.span.is_zero_span());
}

TEST_CASE("verify_ideal: triangular current examples") {
  auto fix = fixtures::triangular_current();
  const SubalgebraPresentation& alg = *fix.ctx.algebra;

  CHECK(verify_ideal(fix.ctx.ideal.span, alg).ok);
  CHECK(verify_ideal(alg.span, alg).ok);  // the algebra is its own ideal

  // Span of E_12 inside full Curr_2 is not an ideal: E_21 (0) E_12 = E_22.
  SubalgebraPresentation full = close_subalgebra(curr_full(2), 2, 0);
  IdealCheck bad = verify_ideal(HSpan(2, 0, {curr(2, 1, 2)}), full);
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.witness.empty());
}

TEST_CASE("nilpotency_index") {
  HSpan upper2(2, 0, {curr(2, 1, 2)});
  CHECK(nilpotency_index(upper2, 10) == 2);
  HSpan upper3(3, 0, {curr(3, 1, 2), curr(3, 1, 3), curr(3, 2, 3)});
  CHECK(nilpotency_index(upper3, 10) == 3);
  CHECK(nilpotency_index(HSpan::zero(2, 0), 10) == 1);
  // Cap exhaustion on a non-nilpotent span.
  HSpan diag(2, 0, {curr(2, 1, 1)});
  CHECK_FALSE(nilpotency_index(diag, 5).has_value());
}

TEST_CASE("nilpotency_index boundary: (m-1)-fold span nonzero") {
  HSpan upper3(3, 0, {curr(3, 1, 2), curr(3, 1, 3), curr(3, 2, 3)});
  HSpan sq = product_span(upper3, upper3);
  CHECK_FALSE(sq.is_zero_span());  // contains E_13
  CHECK(product_span(sq, upper3).is_zero_span());
}

TEST_CASE("quotient_reduce") {
  HSpan ideal(2, 0, {curr(2, 1, 2)});
  CendElem x = curr(2, 1, 1) + d_action(curr(2, 1, 2));
  CHECK(quotient_reduce(x, ideal) == curr(2, 1, 1));
  CHECK(quotient_reduce(curr(2, 1, 2), ideal).is_zero());
  // Well-definedness: representatives agree when the difference is in I.
  CendElem y = curr(2, 1, 1) - Rational(5) * curr(2, 1, 2);
  CHECK(quotient_reduce(x, ideal) == quotient_reduce(y, ideal));
  // Idempotence.
  CHECK(quotient_reduce(quotient_reduce(x, ideal), ideal) == quotient_reduce(x, ideal));
}

TEST_CASE("pierce_decompose: unit, matrix idempotent, zero") {
  SubalgebraPresentation full = close_subalgebra(curr_full(2), 2, 0);

  PierceDecomposition by_unit = pierce_decompose(full, identity(2));
  CHECK(by_unit.verified);
  CHECK(by_unit.parts[0].rank() == 4);
  CHECK(by_unit.parts[1].is_zero_span());
  CHECK(by_unit.parts[2].is_zero_span());
  CHECK(by_unit.parts[3].is_zero_span());

  PierceDecomposition by_e11 = pierce_decompose(full, curr(2, 1, 1));
  CHECK(by_e11.verified);
  CHECK(by_e11.parts[0].contains(curr(2, 1, 1)));
  CHECK(by_e11.parts[1].contains(curr(2, 2, 1)));
  CHECK(by_e11.parts[2].contains(curr(2, 1, 2)));
  CHECK(by_e11.parts[3].contains(curr(2, 2, 2)));
  for (const auto& part : by_e11.parts) CHECK(part.rank() == 1);

  PierceDecomposition by_zero = pierce_decompose(full, CendElem(2));
  CHECK(by_zero.verified);
  CHECK(by_zero.parts[3].rank() == 4);

  CHECK_THROWS_AS(pierce_decompose(full, Rational(2) * curr(2, 1, 1)),
                  std::invalid_argument);  // not idempotent
}

TEST_CASE("span serialization order is deterministic") {
  // Same module from generators in different orders: identical canonical basis.
  std::vector<CendElem> g1{curr(2, 1, 1) + curr(2, 2, 2), curr(2, 2, 2), curr(2, 1, 2)};
  std::vector<CendElem> g2{curr(2, 1, 2), curr(2, 2, 2), curr(2, 1, 1)};
  HSpan a(2, 0, g1), b(2, 0, g2);
  REQUIRE(a.rank() == b.rank());
  auto ba = a.basis(), bb = b.basis();
  for (size_t i = 0; i < ba.size(); ++i) CHECK(ba[i] == bb[i]);
}
