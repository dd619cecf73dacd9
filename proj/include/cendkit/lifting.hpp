#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cendkit/span.hpp"
#include "cendkit/weyl.hpp"

namespace cendkit {

class lift_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Working context for the lifting pipeline: an algebra C with a nilpotent
// ideal I and optionally a unit. algebra == nullopt means "ambient mode":
// C is the whole of Cend_n and membership in C is trivially true.
struct LiftContext {
  int n = 1;
  int v_bound = 0;
  std::optional<SubalgebraPresentation> algebra;
  IdealPresentation ideal;
  std::optional<CendElem> unit;

  bool contains(const CendElem& x) const { return !algebra || algebra->span.contains(x); }
  bool in_ideal(const CendElem& x) const { return ideal.span.contains(x); }
  CendElem mod_ideal(const CendElem& x) const { return ideal.span.reduce(x); }
  int nu() const { return ideal.nilpotency_index.value_or(1); }
};

struct LiftReport {
  struct Entry {
    std::string stage;
    std::string relation;
    bool pass = true;
  };
  std::vector<Entry> entries;
  std::vector<std::pair<std::string, int>> iterations;

  void check(const std::string& stage, const std::string& relation, bool pass) {
    entries.push_back({stage, relation, pass});
  }
  void count(const std::string& stage, int n) { iterations.push_back({stage, n}); }
  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
  const Entry* first_failure() const {
    for (const auto& e : entries)
      if (!e.pass) return &e;
    return nullptr;
  }
};

namespace detail {

inline CendElem mul0(const CendElem& a, const CendElem& b) { return nth_product(a, b, 0); }

// e (0) {a (0) e}: projection onto the corner subalgebra of the
// zero-product idempotent e.
inline CendElem corner_project(const CendElem& e, const CendElem& a) {
  return mul0(e, brace_product(a, e, 0));
}

}  // namespace detail

// Newton lifting of a zero-product idempotent: given e0 with
// e0 (0) e0 = e0 modulo the ideal, iterate e <- 3 e^2 - 2 e^3 (0-products).
// Converges in at most ceil(log2(nu)) steps by nilpotency.
inline CendElem lift_idempotent_zero(const LiftContext& ctx, const CendElem& e0,
                                     LiftReport& rep, const std::string& stage = "lift0") {
  using detail::mul0;
  if (!ctx.in_ideal(mul0(e0, e0) - e0))
    throw lift_error(stage + ": input is not an idempotent modulo the ideal");
  CendElem e = e0;
  int cap = 1, iters = 0;
  for (int nu = ctx.nu(); (1 << cap) < nu;) ++cap;
  cap += 2;
  while (!(mul0(e, e) == e)) {
    if (iters++ >= cap) throw lift_error(stage + ": iteration cap exceeded (ideal not nilpotent?)");
    CendElem e2 = mul0(e, e);
    CendElem e3 = mul0(e2, e);
    e = Rational(3) * e2 - Rational(2) * e3;
  }
  rep.count(stage, iters);
  rep.check(stage, "e (0) e = e", mul0(e, e) == e);
  rep.check(stage, "e - e0 in ideal", ctx.in_ideal(e - e0));
  rep.check(stage, "e in algebra", ctx.contains(e));
  return e;
}

// Full idempotent lift: e (n) e = delta_{n,0} e for every n. Starting from
// the zero-product lift e, the operator sequence b(0) = e(0),
// b(n) = (e(1)e(0))^n satisfies [b(n), p] = n b(n-1) (a consequence of
// e (0) e = e alone), and the element it interpolates to is a full
// idempotent congruent to e modulo the ideal.
inline CendElem lift_idempotent_full(const LiftContext& ctx, const CendElem& e0,
                                     LiftReport& rep, const std::string& stage = "lift-full") {
  CendElem e = lift_idempotent_zero(ctx, e0, rep, stage + "/zero");
  if (is_idempotent(e)) {
    rep.check(stage, "zero-product lift already a full idempotent", true);
    return e;
  }
  WeylOp E0 = realize(e, 0), E1 = realize(e, 1);
  WeylOp step = E1 * E0;
  int md = e.deg_d() + e.deg_v() + 4;
  OperatorSequence seq;
  seq.ops.push_back(E0);
  WeylOp cur = WeylOp::scalar(e.size(), WeylPoly(Rational(1)));
  for (int k = 1; k <= md + 2; ++k) {
    cur = k == 1 ? step : cur * step;
    seq.ops.push_back(cur);
  }
  CendElem h = interpolate_conformal(seq, e.size(), md);
  rep.check(stage, "interpolated element is a full idempotent", is_idempotent(h));
  rep.check(stage, "h - e0 in ideal", ctx.in_ideal(h - e0));
  rep.check(stage, "h in algebra", ctx.contains(h));
  if (!is_idempotent(h)) throw lift_error(stage + ": interpolated element is not idempotent");
  return h;
}

// Lifts a family of pairwise orthogonal idempotent classes to exact pairwise
// orthogonal idempotents, inductively through corner subalgebras of the
// exact unit. Requires ctx.unit.
inline std::vector<CendElem> lift_orthogonal_family(const LiftContext& ctx,
                                                    const std::vector<CendElem>& family,
                                                    LiftReport& rep,
                                                    const std::string& stage = "orthogonal") {
  using detail::corner_project;
  using detail::mul0;
  if (!ctx.unit) throw lift_error(stage + ": context has no unit");
  const CendElem& e0 = *ctx.unit;
  if (!is_idempotent(e0)) throw lift_error(stage + ": unit is not an idempotent");
  // Hypotheses modulo the ideal.
  for (size_t i = 0; i < family.size(); ++i) {
    if (!ctx.in_ideal(mul0(family[i], family[i]) - family[i]))
      throw lift_error(stage + ": class " + std::to_string(i) + " not idempotent mod ideal");
    if (!ctx.in_ideal(brace_product(family[i], e0, 0) - family[i]))
      throw lift_error(stage + ": class " + std::to_string(i) + " not unit-normalized mod ideal");
    for (size_t j = 0; j < family.size(); ++j)
      if (i != j && !ctx.in_ideal(mul0(family[i], family[j])))
        throw lift_error(stage + ": classes " + std::to_string(i) + "," + std::to_string(j) +
                         " not orthogonal mod ideal");
  }

  // Step 1: zero-product orthogonal lifts f_i via corners of f = e0 - sum f_k.
  std::vector<CendElem> fs;
  for (size_t i = 0; i < family.size(); ++i) {
    CendElem f = e0;
    for (const auto& g : fs) f -= g;
    CendElem cand = corner_project(f, family[i]);
    CendElem fi = lift_idempotent_zero(ctx, cand, rep, stage + "/f" + std::to_string(i));
    fi = brace_product(fi, e0, 0);
    fs.push_back(fi);
  }
  for (size_t i = 0; i < fs.size(); ++i) {
    rep.check(stage, "f_" + std::to_string(i) + " lifts its class",
              ctx.in_ideal(fs[i] - family[i]));
    for (size_t j = 0; j < fs.size(); ++j)
      rep.check(stage,
                "f_" + std::to_string(i) + " (0) f_" + std::to_string(j) +
                    (i == j ? " = f" : " = 0"),
                mul0(fs[i], fs[j]) == (i == j ? fs[j] : CendElem(ctx.n)));
  }

  // Step 2: full idempotents inside each corner, conjugated back.
  std::vector<CendElem> es;
  for (size_t i = 0; i < fs.size(); ++i) {
    CendElem ei = lift_idempotent_full(ctx, fs[i], rep, stage + "/full" + std::to_string(i));
    ei = corner_project(fs[i], ei);
    es.push_back(ei);
  }
  for (size_t i = 0; i < es.size(); ++i) {
    rep.check(stage, "e_" + std::to_string(i) + " lifts its class",
              ctx.in_ideal(es[i] - family[i]));
    for (size_t j = 0; j < es.size(); ++j) {
      bool ok = true;
      int lb = locality_bound(es[i], es[j]);
      for (int k = 0; k < lb && ok; ++k) {
        CendElem expect = (k == 0 && i == j) ? es[j] : CendElem(ctx.n);
        ok = nth_product(es[i], es[j], k) == expect;
      }
      rep.check(stage,
                "e_" + std::to_string(i) + " (n) e_" + std::to_string(j) +
                    " = delta_{n,0}" + (i == j ? " e" : " 0"),
                ok);
    }
  }
  if (!rep.all_pass()) throw lift_error(stage + ": " + rep.first_failure()->relation + " failed");
  return es;
}

// Locality of (e, x) measured modulo a power-of-ideal span.
namespace detail {
inline int locality_mod(const CendElem& e, const CendElem& x, const HSpan& mod_span) {
  int last = -1;
  for (int m = 0; m < locality_bound(e, x); ++m)
    if (!mod_span.contains(nth_product(e, x, m))) last = m;
  return last + 1;
}
}  // namespace detail

// Generator lifting: given a unit e and a class x with x (0) e = x and
// e (1) x = e modulo the ideal, produce an exact preimage with both
// relations exact. Locality is decreased stepwise by
//   x <- x - (1/n)(x (1) x - x),  n = N(e,x) - 1,
// then a final correction x <- x - x (0) b with b = e (1) x - e; for
// nilpotency index > 2 the procedure runs level by level through the chain
// of quotients by ideal powers.
inline CendElem lift_conformal_generator(const LiftContext& ctx, const CendElem& x0,
                                         LiftReport& rep,
                                         const std::string& stage = "generator") {
  using detail::mul0;
  if (!ctx.unit) throw lift_error(stage + ": context has no unit");
  const CendElem& e = *ctx.unit;
  if (!ctx.in_ideal(mul0(x0, e) - x0))
    throw lift_error(stage + ": x (0) e = x fails modulo the ideal");
  if (!ctx.in_ideal(nth_product(e, x0, 1) - e))
    throw lift_error(stage + ": e (1) x = e fails modulo the ideal");

  CendElem x = mul0(x0, e);  // now x (0) e = x holds exactly
  int nu = ctx.nu();
  // Ideal powers I^k for the quotient chain; I^nu = 0.
  std::vector<HSpan> powers;  // powers[k] = I^{k+2}: the modulus at level k
  {
    HSpan p = ctx.ideal.span;
    for (int k = 2; k <= nu; ++k) {
      p = product_span(p, ctx.ideal.span);
      powers.push_back(p);
    }
  }

  int total_steps = 0;
  for (int level = 0; level < std::max(1, nu - 1); ++level) {
    const HSpan* mod = level < static_cast<int>(powers.size()) ? &powers[level] : nullptr;
    auto reduced_zero = [&](const CendElem& y) { return mod ? mod->contains(y) : y.is_zero(); };
    auto loc = [&](const CendElem& y) {
      if (!mod) return locality(e, y).value;
      return detail::locality_mod(e, y, *mod);
    };
    int N = loc(x);
    while (N >= 3) {
      int n = N - 1;
      x = x - (Rational(1) / Rational(n)) * (nth_product(x, x, 1) - x);
      ++total_steps;
      int N2 = loc(x);
      if (N2 >= N) throw lift_error(stage + ": locality failed to decrease");
      N = N2;
    }
    CendElem b = nth_product(e, x, 1) - e;
    if (!reduced_zero(b)) {
      x = x - mul0(x, b);
      ++total_steps;
    }
    if (!reduced_zero(nth_product(e, x, 1) - e))
      throw lift_error(stage + ": e (1) x = e not reached at level " + std::to_string(level));
  }
  rep.count(stage, total_steps);
  rep.check(stage, "x (0) e = x", mul0(x, e) == x);
  rep.check(stage, "e (1) x = e", nth_product(e, x, 1) == e);
  rep.check(stage, "x - x0 in ideal", ctx.in_ideal(x - x0));
  rep.check(stage, "x in algebra", ctx.contains(x));
  if (!rep.all_pass()) throw lift_error(stage + ": " + rep.first_failure()->relation + " failed");
  return x;
}

struct MatrixUnitSystem {
  int N = 0;
  std::vector<std::vector<CendElem>> units;  // units[i][j] = e_{i+1,j+1}
};

// Checks e_ij (n) e_kl = delta_{n,0} delta_{j,k} e_il for all pairs and all
// n below locality bounds.
inline bool matrix_unit_relations(const MatrixUnitSystem& sys, LiftReport& rep,
                                  const std::string& stage) {
  bool all = true;
  int n = sys.units[0][0].size();
  for (int i = 0; i < sys.N; ++i)
    for (int j = 0; j < sys.N; ++j)
      for (int k = 0; k < sys.N; ++k)
        for (int l = 0; l < sys.N; ++l) {
          const CendElem &a = sys.units[i][j], &b = sys.units[k][l];
          bool ok = true;
          for (int m = 0; m < locality_bound(a, b) && ok; ++m) {
            CendElem expect = (m == 0 && j == k) ? sys.units[i][l] : CendElem(n);
            ok = nth_product(a, b, m) == expect;
          }
          if (!ok) all = false;
          rep.check(stage,
                    "e_" + std::to_string(i + 1) + std::to_string(j + 1) + " (n) e_" +
                        std::to_string(k + 1) + std::to_string(l + 1),
                    ok);
        }
  return all;
}

// Builds a full system of conformal matrix units from exact orthogonal
// diagonal idempotents e_i and mod-ideal preimages v_1j, v_i1 of the first
// row/column units.
inline MatrixUnitSystem build_matrix_units(const LiftContext& ctx,
                                           const std::vector<CendElem>& diag,
                                           const std::vector<CendElem>& v_row,
                                           const std::vector<CendElem>& v_col, LiftReport& rep,
                                           const std::string& stage = "units") {
  using detail::mul0;
  int N = static_cast<int>(diag.size());
  if (N == 0) throw lift_error(stage + ": empty diagonal family");
  if (static_cast<int>(v_row.size()) != N - 1 || static_cast<int>(v_col.size()) != N - 1)
    throw lift_error(stage + ": need N-1 row and column preimages");
  MatrixUnitSystem sys;
  sys.N = N;
  sys.units.assign(static_cast<size_t>(N), std::vector<CendElem>(static_cast<size_t>(N),
                                                                 CendElem(ctx.n)));
  sys.units[0][0] = diag[0];
  if (N == 1) {
    matrix_unit_relations(sys, rep, stage);
    return sys;
  }

  // Corner-normalize the preimages and build the correction series.
  std::vector<CendElem> f_row(static_cast<size_t>(N - 1), CendElem(ctx.n));
  std::vector<CendElem> f_col(static_cast<size_t>(N - 1), CendElem(ctx.n));
  for (int j = 2; j <= N; ++j) {
    CendElem v1j = mul0(mul0(diag[0], v_row[static_cast<size_t>(j - 2)]),
                        diag[static_cast<size_t>(j - 1)]);
    CendElem vj1 = mul0(mul0(diag[static_cast<size_t>(j - 1)], v_col[static_cast<size_t>(j - 2)]),
                        diag[0]);
    CendElem a = mul0(v1j, vj1) - diag[0];
    if (!ctx.in_ideal(a))
      throw lift_error(stage + ": v_1" + std::to_string(j) + " (0) v_" + std::to_string(j) +
                       "1 - e_1 is not in the ideal");
    // b = -a + a(0)a - ... (finite by nilpotency); a + b + a(0)b = 0.
    CendElem b(ctx.n), term = Rational(-1) * a;
    int guard = 0;
    while (!term.is_zero()) {
      if (guard++ > ctx.nu() + 2) throw lift_error(stage + ": correction series does not stop");
      b += term;
      term = Rational(-1) * mul0(term, a);
    }
    rep.check(stage, "a + b + a(0)b = 0 (j=" + std::to_string(j) + ")",
              (a + b + mul0(a, b)).is_zero());
    f_row[static_cast<size_t>(j - 2)] = v1j;
    f_col[static_cast<size_t>(j - 2)] = vj1 + mul0(vj1, b);
  }

  // Intermediate relations for the f's.
  for (int j = 2; j <= N; ++j) {
    const CendElem& f1j = f_row[static_cast<size_t>(j - 2)];
    const CendElem& fj1 = f_col[static_cast<size_t>(j - 2)];
    rep.check(stage, "e_1 (0) f_1" + std::to_string(j) + " = f", mul0(diag[0], f1j) == f1j);
    rep.check(stage, "f_" + std::to_string(j) + "1 (0) e_1 = f", mul0(fj1, diag[0]) == fj1);
    rep.check(stage, "f_1" + std::to_string(j) + " (0) f_" + std::to_string(j) + "1 = e_1",
              mul0(f1j, fj1) == diag[0]);
  }

  // h_j via operator interpolation: b(0) = (f_j1 (0) f_1j)(0),
  // b(n) = (f_j1(1) f_1j(0))^n; then e_1j = f_1j (0) h_j.
  for (int j = 2; j <= N; ++j) {
    const CendElem& f1j = f_row[static_cast<size_t>(j - 2)];
    const CendElem& fj1 = f_col[static_cast<size_t>(j - 2)];
    CendElem cj = mul0(fj1, f1j);
    WeylOp step = realize(fj1, 1) * realize(f1j, 0);
    int md = cj.deg_d() + cj.deg_v() + f1j.deg_d() + f1j.deg_v() + 4;
    OperatorSequence seq;
    seq.ops.push_back(realize(cj, 0));
    WeylOp cur = step;
    for (int k = 1; k <= md + 2; ++k) {
      if (k > 1) cur = cur * step;
      seq.ops.push_back(cur);
    }
    CendElem hj = interpolate_conformal(seq, ctx.n, md);
    rep.check(stage, "h_" + std::to_string(j) + " - e_" + std::to_string(j) + " in ideal",
              ctx.in_ideal(hj - diag[static_cast<size_t>(j - 1)]));
    rep.check(stage, "h_" + std::to_string(j) + " in algebra", ctx.contains(hj));
    sys.units[0][static_cast<size_t>(j - 1)] = mul0(f1j, hj);
    sys.units[static_cast<size_t>(j - 1)][0] = fj1;
  }
  for (int i = 2; i <= N; ++i)
    for (int j = 2; j <= N; ++j)
      sys.units[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] =
          mul0(f_col[static_cast<size_t>(i - 2)], sys.units[0][static_cast<size_t>(j - 1)]);

  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      rep.check(stage,
                "e_" + std::to_string(i + 1) + std::to_string(j + 1) + " lifts its class",
                ctx.in_ideal(sys.units[static_cast<size_t>(i)][static_cast<size_t>(j)] -
                             (i == j ? diag[static_cast<size_t>(i)]
                                     : (i == 0   ? v_row[static_cast<size_t>(j - 1)]
                                        : j == 0 ? v_col[static_cast<size_t>(i - 1)]
                                                 : sys.units[static_cast<size_t>(i)]
                                                            [static_cast<size_t>(j)]))));
    }
  matrix_unit_relations(sys, rep, stage);
  if (!rep.all_pass()) throw lift_error(stage + ": " + rep.first_failure()->relation + " failed");
  return sys;
}

// Defining relations of Cend_N against a matrix-unit system and a
// generator candidate x:
//   e_ij (0) x = x (0) e_ij;  e_ij (1) x = e_ij;  e_ij (n) x = 0 (n >= 2);
//   x (n) e_ij = 0 (n >= 1);  sum_i e_ii (0) x = sum_i x (0) e_ii = x.
inline IdentityReport verify_cend_relations(const MatrixUnitSystem& sys, const CendElem& x) {
  IdentityReport out;
  int n = x.size();
  auto add = [&](const std::string& what, bool ok, const std::string& witness) {
    out.checks.push_back({what, ok, ok ? "" : witness});
  };
  bool commute = true, one = true, high = true, right = true;
  std::string w_commute, w_one, w_high, w_right;
  for (int i = 0; i < sys.N; ++i)
    for (int j = 0; j < sys.N; ++j) {
      const CendElem& u = sys.units[static_cast<size_t>(i)][static_cast<size_t>(j)];
      if (commute && !(nth_product(u, x, 0) == nth_product(x, u, 0))) {
        commute = false;
        w_commute = "i=" + std::to_string(i + 1) + " j=" + std::to_string(j + 1);
      }
      if (one && !(nth_product(u, x, 1) == u)) {
        one = false;
        w_one = "i=" + std::to_string(i + 1) + " j=" + std::to_string(j + 1);
      }
      for (int m = 2; m < locality_bound(u, x) && high; ++m)
        if (!nth_product(u, x, m).is_zero()) {
          high = false;
          w_high = "i=" + std::to_string(i + 1) + " j=" + std::to_string(j + 1) +
                   " n=" + std::to_string(m);
        }
      for (int m = 1; m < locality_bound(x, u) && right; ++m)
        if (!nth_product(x, u, m).is_zero()) {
          right = false;
          w_right = "i=" + std::to_string(i + 1) + " j=" + std::to_string(j + 1) +
                    " n=" + std::to_string(m);
        }
    }
  add("e_ij (0) x = x (0) e_ij", commute, w_commute);
  add("e_ij (1) x = e_ij", one, w_one);
  add("e_ij (n) x = 0 for n >= 2", high, w_high);
  add("x (n) e_ij = 0 for n >= 1", right, w_right);
  CendElem left_sum(n), right_sum(n);
  for (int i = 0; i < sys.N; ++i) {
    left_sum += nth_product(sys.units[static_cast<size_t>(i)][static_cast<size_t>(i)], x, 0);
    right_sum += nth_product(x, sys.units[static_cast<size_t>(i)][static_cast<size_t>(i)], 0);
  }
  add("sum e_ii (0) x = x", left_sum == x, "");
  add("sum x (0) e_ii = x", right_sum == x, "");
  return out;
}

// One diagonal block of C/R, with the data needed to rebuild it in C.
struct BlockSpec {
  enum class Kind { curr, cend } kind = Kind::curr;
  int N = 1;
  std::vector<CendElem> diag;   // classes of the diagonal matrix units
  std::vector<CendElem> v_row;  // classes of e_1j, j = 2..N
  std::vector<CendElem> v_col;  // classes of e_i1, i = 2..N
  std::optional<CendElem> x1_class;  // class of v e_11 (cend blocks)
};

struct SplitInput {
  CendElem unit_class;  // a unit of C modulo the radical
  std::vector<BlockSpec> blocks;
};

struct SplitResult {
  std::vector<CendElem> semisimple_generators;
  std::optional<HSpan> semisimple_span;  // absent in ambient mode
  LiftReport report;
};

// The splitting pipeline: verify the unit hypothesis mod R, lift the unit
// to a full idempotent, take the Pierce corner, lift the block idempotents,
// rebuild each block (matrix units; plus the v-generator for cend blocks),
// and verify the direct-sum equalities S + R = C, S ∩ R = 0, S closed.
inline SplitResult split_radical(const LiftContext& ctx, const SplitInput& input) {
  using detail::corner_project;
  using detail::mul0;
  SplitResult res;
  LiftReport& rep = res.report;
  const HSpan& R = ctx.ideal.span;

  // Stage 1: the pipeline's hypothesis — the supplied class is a unit of C/R.
  {
    const CendElem& u = input.unit_class;
    for (int m = 0; m < locality_bound(u, u); ++m) {
      CendElem expect = m == 0 ? u : CendElem(ctx.n);
      if (!R.contains(nth_product(u, u, m) - expect))
        throw lift_error(
            "unit-lifting precondition failed: supplied class is not an idempotent of C "
            "modulo the radical (n=" + std::to_string(m) + ")");
    }
    if (ctx.algebra) {
      for (const auto& xg : ctx.algebra->span.basis())
        if (!R.contains(mul0(u, xg) - xg))
          throw lift_error(
              "unit-lifting precondition failed: supplied class is not a unit of C modulo "
              "the radical (C/R has no unit on this presentation)");
    }
    rep.check("hypothesis", "unit class verified mod radical", true);
  }

  // Stage 2: full idempotent lift of the unit.
  LiftContext base = ctx;
  CendElem e = lift_idempotent_full(base, input.unit_class, rep, "unit");

  // Stage 3: Pierce corner (the unital part).
  std::optional<SubalgebraPresentation> corner_alg;
  if (ctx.algebra) {
    PierceDecomposition dec = pierce_decompose(*ctx.algebra, e);
    rep.check("pierce", "four corners independent and spanning", dec.verified);
    std::vector<CendElem> cg;
    for (const auto& a : ctx.algebra->span.basis()) cg.push_back(corner_project(e, a));
    corner_alg = close_subalgebra(std::move(cg), ctx.n, ctx.v_bound);
  }
  LiftContext corner_ctx = ctx;
  corner_ctx.algebra = corner_alg;
  corner_ctx.unit = e;
  if (corner_alg) {
    // The corner's share of the radical: projections of radical basis elements.
    std::vector<CendElem> rg;
    for (const auto& r : R.basis()) rg.push_back(corner_project(e, r));
    corner_ctx.ideal.span = HSpan(ctx.n, ctx.v_bound, std::move(rg));
  }

  // Stage 4: orthogonal block unit idempotents.
  std::vector<CendElem> block_units;
  for (const auto& b : input.blocks) {
    CendElem s(ctx.n);
    for (const auto& d : b.diag) s += d;
    block_units.push_back(corner_project(e, s));
  }
  std::vector<CendElem> eb = lift_orthogonal_family(corner_ctx, block_units, rep, "blocks");

  // Stage 5: rebuild each block.
  for (size_t bi = 0; bi < input.blocks.size(); ++bi) {
    const BlockSpec& blk = input.blocks[bi];
    std::string tag = "block" + std::to_string(bi);
    // Block corner context.
    LiftContext blk_ctx = corner_ctx;
    blk_ctx.unit = eb[bi];
    if (corner_ctx.algebra) {
      std::vector<CendElem> cg, rg;
      for (const auto& a : corner_ctx.algebra->span.basis())
        cg.push_back(corner_project(eb[bi], a));
      blk_ctx.algebra = close_subalgebra(std::move(cg), ctx.n, ctx.v_bound);
      for (const auto& r : corner_ctx.ideal.span.basis())
        rg.push_back(corner_project(eb[bi], r));
      blk_ctx.ideal.span = HSpan(ctx.n, ctx.v_bound, std::move(rg));
    }
    auto project = [&](const CendElem& y) { return corner_project(eb[bi], y); };
    std::vector<CendElem> diag;
    for (const auto& d : blk.diag) diag.push_back(project(d));
    std::vector<CendElem> dlift = lift_orthogonal_family(blk_ctx, diag, rep, tag + "/diag");
    std::vector<CendElem> vr, vc;
    for (const auto& v : blk.v_row) vr.push_back(project(v));
    for (const auto& v : blk.v_col) vc.push_back(project(v));
    MatrixUnitSystem sys = build_matrix_units(blk_ctx, dlift, vr, vc, rep, tag + "/units");
    for (const auto& row : sys.units)
      for (const auto& u : row) res.semisimple_generators.push_back(u);
    if (blk.kind == BlockSpec::Kind::cend) {
      if (!blk.x1_class) throw lift_error(tag + ": cend block needs the generator class");
      LiftContext gen_ctx = blk_ctx;
      gen_ctx.unit = sys.units[0][0];
      CendElem x1 =
          lift_conformal_generator(gen_ctx, project(*blk.x1_class), rep, tag + "/generator");
      CendElem x(ctx.n);
      for (int i = 0; i < sys.N; ++i)
        x += mul0(mul0(sys.units[static_cast<size_t>(i)][0], x1),
                  sys.units[0][static_cast<size_t>(i)]);
      IdentityReport rel = verify_cend_relations(sys, x);
      for (const auto& c : rel.checks) rep.check(tag + "/relations", c.identity, c.pass);
      res.semisimple_generators.push_back(x);
    }
  }

  // Stage 6: the three span equalities (skipped in ambient mode, where C has
  // no finite window).
  if (ctx.algebra) {
    SubalgebraPresentation closed =
        close_subalgebra(res.semisimple_generators, ctx.n, ctx.v_bound);
    HSpan S(ctx.n, ctx.v_bound, res.semisimple_generators);
    rep.check("sum", "S closed under products",
              closed.span.rank() == S.rank() && S.contains_span(closed.span));
    HSpan sum = span_sum(S, R);
    rep.check("sum", "S + R = C",
              sum.rank() == ctx.algebra->span.rank() && ctx.algebra->span.contains_span(sum) &&
                  sum.contains_span(ctx.algebra->span));
    rep.check("sum", "S ∩ R = 0", S.rank() + R.rank() == sum.rank());
    res.semisimple_span = std::move(S);
  }
  if (!rep.all_pass())
    throw lift_error("split_radical: " + rep.first_failure()->stage + ": " +
                     rep.first_failure()->relation + " failed");
  return res;
}

}  // namespace cendkit
