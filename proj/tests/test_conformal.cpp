#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cendkit/conformal.hpp"
#include "cendkit/text.hpp"

using namespace cendkit;

namespace {

CendElem rand_elem(std::mt19937_64& rng, int n, int max_d = 3, int max_v = 4) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> keep(0, 3);
  CendElem m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      PolyDV p;
      for (int d = 0; d <= max_d; ++d)
        for (int v = 0; v <= max_v; ++v)
          if (keep(rng) == 0) p += PolyDV::monomial(d, v, Rational(coef(rng)));
      m.at(i, j) = p;
    }
  return m;
}

CendElem c1(const char* s) { return parse_element(s); }

}  // namespace

TEST_CASE("base rule: (1(x)v) (1) (1(x)v^2) = 1(x)2v^2") {
  CHECK(nth_product(c1("v"), c1("v^2"), 1) == c1("2*v^2"));
}

TEST_CASE("D (x) 1 against 1 (x) v") {
  CHECK(nth_product(c1("D"), c1("v"), 1) == c1("-v"));
}

TEST_CASE("identity matrix is a left unit at n=0") {
  std::mt19937_64 rng(23);
  for (int n : {1, 2, 3}) {
    CendElem x = rand_elem(rng, n);
    CHECK(nth_product(CendElem::identity(n), x, 0) == x);
  }
}

TEST_CASE("d_action basics and sesqui property") {
  CHECK(d_action(c1("1")) == c1("D"));
  CHECK(d_action(CendElem(1)).is_zero());
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    CendElem a = rand_elem(rng, 2), b = rand_elem(rng, 2);
    for (int n = 0; n <= 6; ++n) {
      CendElem lhs = nth_product(d_action(a), b, n);
      CendElem rhs = n == 0 ? CendElem(2) : Rational(-n) * nth_product(a, b, n - 1);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("brace product examples") {
  // {1 (0) v} = v - D in Cend_1
  CHECK(brace_product(c1("1"), c1("v"), 0) == c1("v - D"));
  // right unit behaviour: {a (0) Idd} = a for a = 1 (x) f(v)
  CHECK(brace_product(c1("v^3 + 2*v"), c1("1"), 0) == c1("v^3 + 2*v"));
  std::mt19937_64 rng(1);
  CHECK(brace_product(CendElem(2), rand_elem(rng, 2), 3).is_zero());
}

TEST_CASE("brace right-unit on full matrices") {
  std::mt19937_64 rng(31);
  for (int n : {1, 2}) {
    CendElem a = rand_elem(rng, n);
    CHECK(brace_product(a, CendElem::identity(n), 0) == a);
  }
}

TEST_CASE("locality values") {
  CHECK(locality(c1("v"), c1("v^2")).value == 3);
  CHECK(locality(c1("v"), CendElem(1)).value == 0);
  CendElem id = CendElem::identity(2);
  CHECK(locality(id, id).value == 1);
}

TEST_CASE("locality is a vanishing threshold") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    CendElem a = rand_elem(rng, 2), b = rand_elem(rng, 2);
    int N = locality(a, b).value;
    for (int m = N; m < N + 4; ++m) CHECK(nth_product(a, b, m).is_zero());
    if (N > 0) CHECK(!nth_product(a, b, N - 1).is_zero());
  }
}

TEST_CASE("identity suite passes on random triples") {
  std::mt19937_64 rng(41);
  for (int n : {1, 2}) {
    for (int trial = 0; trial < 3; ++trial) {
      CendElem a = rand_elem(rng, n), b = rand_elem(rng, n), c = rand_elem(rng, n);
      IdentityReport rep = check_conformal_identities(a, b, c);
      for (const auto& chk : rep.checks) {
        INFO(chk.identity, " ", chk.witness);
        CHECK(chk.pass);
      }
    }
  }
}

TEST_CASE("identity suite passes vacuously on zeros") {
  CendElem z(2);
  CHECK(check_conformal_identities(z, z, z).all_pass());
}

TEST_CASE("corrupted product table fails associativity with witness") {
  // 0-product replaced by the matrix anticommutator of the D-free parts.
  ProductFn corrupted = [](const CendElem& x, const CendElem& y, int n) {
    if (n != 0) return nth_product(x, y, n);
    CendElem x0 = d_component(x, 0), y0 = d_component(y, 0);
    return x0 * y0 + y0 * x0;
  };
  std::mt19937_64 rng(43);
  bool found_failure = false;
  for (int trial = 0; trial < 5 && !found_failure; ++trial) {
    CendElem a = rand_elem(rng, 2), b = rand_elem(rng, 2), c = rand_elem(rng, 2);
    IdentityReport rep = check_conformal_identities(a, b, c, corrupted);
    for (const auto& chk : rep.checks)
      if (chk.identity == "associativity" && !chk.pass) {
        found_failure = true;
        CHECK(!chk.witness.empty());
      }
  }
  CHECK(found_failure);
}

TEST_CASE("idempotents") {
  CHECK(is_idempotent(CendElem::identity(2)));
  CHECK(!is_idempotent(c1("v")));
  CHECK(is_idempotent(CendElem::unit(2, 0, 0)));
}

TEST_CASE("units") {
  std::mt19937_64 rng(47);
  std::vector<CendElem> gens;
  for (int i = 0; i < 4; ++i) gens.push_back(rand_elem(rng, 2));
  CHECK(is_unit_on(CendElem::identity(2), gens));
  CHECK(!is_unit_on(CendElem::unit(2, 0, 0), gens));
  CHECK(is_unit_on(CendElem::unit(2, 0, 0), {}));
  CHECK_THROWS_AS(is_unit_on(c1("v"), {}), std::invalid_argument);
}

TEST_CASE("locality bound dominates exact locality") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    CendElem a = rand_elem(rng, 2), b = rand_elem(rng, 2);
    CHECK(locality(a, b).value <= locality_bound(a, b));
  }
}
