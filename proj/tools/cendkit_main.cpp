// Command-line front end: products, braces, locality, identity suites,
// operator realization and cross-checks, span membership, lifting pipelines
// on the built-in fixtures, and the non-splitting verification suite.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "cendkit/fixtures.hpp"
#include "cendkit/text.hpp"

using json = nlohmann::ordered_json;
using namespace cendkit;

namespace {

// Elements are given inline or as @path-to-file.
std::string read_arg(const std::string& s) {
  if (s.empty() || s[0] != '@') return s;
  std::ifstream in(s.substr(1));
  if (!in) throw CLI::ValidationError("cannot read file: " + s.substr(1));
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string out = buf.str();
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  return out;
}

CendElem parse_arg(const std::string& s) { return parse_element(read_arg(s)); }

struct Output {
  bool as_json = false;
  json j;
  std::string text;

  void kv(const std::string& key, const json& value, const std::string& line) {
    j[key] = value;
    if (!line.empty()) text += line + "\n";
  }
  void emit() const {
    if (as_json)
      std::cout << j.dump(2) << "\n";
    else
      std::cout << text;
  }
};

json report_to_json(const IdentityReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"identity", c.identity}, {"pass", c.pass}, {"witness", c.witness}});
  return {{"schema", "identity-report-v1"}, {"checks", checks}};
}

std::string report_to_text(const IdentityReport& rep) {
  std::string out;
  for (const auto& c : rep.checks) {
    out += c.identity + ": " + (c.pass ? "pass" : "FAIL");
    if (!c.pass) out += " (" + c.witness + ")";
    out += "\n";
  }
  return out;
}

json lift_report_to_json(const LiftReport& rep) {
  json stages = json::array(), iters = json::array();
  for (const auto& e : rep.entries)
    stages.push_back({{"stage", e.stage}, {"relation", e.relation}, {"pass", e.pass}});
  for (const auto& [s, n] : rep.iterations) iters.push_back({{"stage", s}, {"count", n}});
  return {{"schema", "lift-report-v1"},
          {"stages", stages},
          {"iterations", iters},
          {"all_pass", rep.all_pass()}};
}

std::string lift_report_to_text(const LiftReport& rep) {
  std::string out;
  for (const auto& [s, n] : rep.iterations)
    out += s + ": " + std::to_string(n) + " iteration(s)\n";
  for (const auto& e : rep.entries)
    out += "[" + e.stage + "] " + e.relation + ": " + (e.pass ? "pass" : "FAIL") + "\n";
  return out;
}

CendElem random_element(std::mt19937& rng, int n, int max_d, int max_v) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> keep(0, 3);
  CendElem x(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int d = 0; d <= max_d; ++d)
        for (int v = 0; v <= max_v; ++v)
          if (keep(rng) == 0) x.at(i, j) += PolyDV::monomial(d, v, Rational(coef(rng)));
  return x;
}

Poly random_v_poly(std::mt19937& rng, int max_deg) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> keep(0, 2);
  Poly p;
  for (int d = 0; d <= max_deg; ++d)
    if (keep(rng) == 0) p += Poly::monomial(d, Rational(coef(rng)));
  return p;
}

CxElem random_cx(std::mt19937& rng, int max_k, int max_deg) {
  CxElem x;
  for (int k = 0; k <= max_k; ++k)
    x.add(k, random_v_poly(rng, max_deg), random_v_poly(rng, max_deg));
  return x;
}

std::string poly_in_d_to_string(const Poly& p) {
  PolyDV q;
  for (int d = 0; d <= p.degree(); ++d)
    if (p[d] != 0) q += PolyDV::monomial(d, 0, p[d]);
  return to_string(q);
}

int run(int argc, char** argv) {
  CLI::App app{"Exact symbolic kernel for conformal endomorphism algebras"};
  app.require_subcommand(1);
  bool as_json = false;
  unsigned seed = 42;
  app.add_flag("--json", as_json, "JSON output");
  app.add_option("--seed", seed, "seed for randomized sweeps");

  // product / brace
  std::string arg_a, arg_b;
  int opt_n = 0, opt_k = 0;
  auto* product = app.add_subcommand("product", "n-th product of two elements");
  product->add_option("--n", opt_n, "product index")->required();
  product->add_option("a", arg_a)->required();
  product->add_option("b", arg_b)->required();

  auto* brace = app.add_subcommand("brace", "brace product of two elements");
  brace->add_option("--n", opt_n, "product index")->required();
  brace->add_option("a", arg_a)->required();
  brace->add_option("b", arg_b)->required();

  auto* loc = app.add_subcommand("locality", "locality N(a, b)");
  loc->add_option("a", arg_a)->required();
  loc->add_option("b", arg_b)->required();

  // identities
  std::vector<std::string> triple;
  int id_count = 5, id_size = 1, id_max_d = 3, id_max_v = 4;
  auto* ident = app.add_subcommand("identities", "full identity suite on a triple");
  // Repeated single-value option: CLI11 would split a bracketed positional
  // like "[[v,0],[0,v]]" on commas, so elements are passed one per flag.
  ident->add_option("-e,--elem", triple, "element (give three, or none for a randomized sweep)")
      ->allow_extra_args(false);
  ident->add_option("--count", id_count, "random triples to sweep");
  ident->add_option("--size", id_size, "matrix size for random triples");
  ident->add_option("--max-d", id_max_d, "D-degree bound for random triples");
  ident->add_option("--max-v", id_max_v, "v-degree bound for random triples");

  // realize / crosscheck
  auto* real = app.add_subcommand("realize", "operator a(k) in the matrix Weyl algebra");
  real->add_option("--k", opt_k, "operator index")->required();
  real->add_option("a", arg_a)->required();

  int cc_max = 4;
  auto* cross = app.add_subcommand("crosscheck",
                                   "operator products against conformal products");
  cross->add_option("a", arg_a)->required();
  cross->add_option("b", arg_b)->required();
  cross->add_option("--max", cc_max, "check all n, m up to this bound");

  // span membership
  int span_vb = 0;
  std::vector<std::string> span_gens;
  auto* span = app.add_subcommand("span", "membership in a Q[D]-span");
  span->add_option("--vb", span_vb, "v-degree window")->required();
  span->add_option("x", arg_a, "candidate element")->required();
  span->add_option("-g,--gen", span_gens, "generator (repeatable)")
      ->required()
      ->allow_extra_args(false);

  // lift / split on built-in fixtures
  std::string fixture = "triangular", lift_op = "zero", arg_x;
  auto* lift = app.add_subcommand("lift", "lifting operations on built-in fixtures");
  lift->add_option("op", lift_op, "zero | full | generator | units")->required();
  lift->add_option("--fixture", fixture, "triangular | perturbation | curr2");
  lift->add_option("x", arg_x, "input element (defaults per fixture)");

  auto* split = app.add_subcommand("split", "radical splitting pipeline on a fixture");
  split->add_option("--fixture", fixture, "triangular | curr2 | cend1 | truncated")
      ->required();

  // counterexample suite
  auto* cx = app.add_subcommand("counterexample", "non-splitting verification suite");
  cx->require_subcommand(1);
  int cx_count = 25, cx_K = 3;
  auto* cxc = cx->add_subcommand("verify-closure", "product law matches the embedding");
  cxc->add_option("--count", cx_count, "randomized pairs");
  auto* cxr = cx->add_subcommand("verify-radical", "radical membership and nilpotency");
  cxr->add_option("--count", cx_count, "randomized pairs");
  auto* cxt = cx->add_subcommand("verify-theta", "quotient homomorphism properties");
  cxt->add_option("--count", cx_count, "randomized pairs");
  auto* cxf = cx->add_subcommand("forced-psi", "forced shape of a splitting at the unit");
  cxf->add_option("--K", cx_K, "degree bound")->required();
  auto* cxo = cx->add_subcommand("obstruction", "infeasibility certificate");
  cxo->add_option("--K", cx_K, "degree bound")->required();

  auto all_subs = [](const CLI::App*) { return true; };
  for (CLI::App* s : app.get_subcommands(all_subs)) {
    s->fallthrough();  // allow the global --json / --seed after a subcommand
    for (CLI::App* t : s->get_subcommands(all_subs)) t->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are reported as exit 2
  }
  Output out;
  out.as_json = as_json;

  if (*product || *brace) {
    CendElem a = parse_arg(arg_a), b = parse_arg(arg_b);
    if (a.size() != b.size()) throw CLI::ValidationError("element sizes differ");
    CendElem r = *product ? nth_product(a, b, opt_n) : brace_product(a, b, opt_n);
    out.kv("schema", "element-v1", "");
    out.kv("value", to_string(r), to_string(r));
    out.emit();
    return 0;
  }
  if (*loc) {
    CendElem a = parse_arg(arg_a), b = parse_arg(arg_b);
    if (a.size() != b.size()) throw CLI::ValidationError("element sizes differ");
    LocalityValue l = locality(a, b);
    out.kv("schema", "locality-v1", "");
    out.kv("value", l.value, std::to_string(l.value));
    out.kv("bound", locality_bound(a, b), "");
    out.emit();
    return 0;
  }
  if (*ident) {
    bool all = true;
    json reports = json::array();
    std::string text;
    auto run_triple = [&](const CendElem& a, const CendElem& b, const CendElem& c) {
      IdentityReport rep = check_conformal_identities(a, b, c);
      reports.push_back(report_to_json(rep));
      text += report_to_text(rep);
      for (const auto& ch : rep.checks) all = all && ch.pass;
    };
    if (!triple.empty()) {
      if (triple.size() != 3) throw CLI::ValidationError("identities needs exactly 3 elements");
      run_triple(parse_arg(triple[0]), parse_arg(triple[1]), parse_arg(triple[2]));
    } else {
      std::mt19937 rng(seed);
      for (int t = 0; t < id_count; ++t)
        run_triple(random_element(rng, id_size, id_max_d, id_max_v),
                   random_element(rng, id_size, id_max_d, id_max_v),
                   random_element(rng, id_size, id_max_d, id_max_v));
    }
    out.j = {{"schema", "identity-suite-v1"}, {"all_pass", all}, {"reports", reports}};
    out.text = text + (all ? "all identities hold\n" : "identity failure\n");
    out.emit();
    return all ? 0 : 1;
  }
  if (*real) {
    WeylOp w = realize(parse_arg(arg_a), opt_k);
    out.kv("schema", "weyl-operator-v1", "");
    out.kv("value", to_string(w), to_string(w));
    out.emit();
    return 0;
  }
  if (*cross) {
    CendElem a = parse_arg(arg_a), b = parse_arg(arg_b);
    if (a.size() != b.size()) throw CLI::ValidationError("element sizes differ");
    bool all = true;
    json fails = json::array();
    for (int n = 0; n <= cc_max; ++n)
      for (int m = 0; m <= cc_max; ++m)
        if (!cross_check_operator_product(a, b, n, m)) {
          all = false;
          fails.push_back({{"n", n}, {"m", m}});
        }
    out.j = {{"schema", "crosscheck-v1"}, {"all_pass", all}, {"failures", fails}};
    out.text = all ? "operator products agree\n" : "operator product mismatch\n";
    out.emit();
    return all ? 0 : 1;
  }
  if (*span) {
    std::vector<CendElem> gens;
    CendElem x = parse_arg(arg_a);
    for (const auto& g : span_gens) gens.push_back(parse_arg(g));
    for (const auto& g : gens)
      if (g.size() != x.size()) throw CLI::ValidationError("element sizes differ");
    HSpan s(x.size(), span_vb, std::move(gens));
    auto m = s.membership(x);
    json wit = json::array();
    std::string wtext;
    for (const auto& [row, p] : m.witness) {
      wit.push_back({{"row", row}, {"coefficient", poly_in_d_to_string(p)}});
      wtext += "  row " + std::to_string(row) + ": " + poly_in_d_to_string(p) + "\n";
    }
    out.j = {{"schema", "span-membership-v1"},
             {"member", m.member},
             {"rank", s.rank()},
             {"witness", wit}};
    out.text = std::string(m.member ? "member" : "not a member") + " (rank " +
               std::to_string(s.rank()) + ")\n" + wtext;
    out.emit();
    return m.member ? 0 : 1;
  }
  if (*lift) {
    LiftReport rep;
    std::string result;
    if (lift_op == "zero" || lift_op == "full") {
      auto fix = fixtures::triangular_current();
      CendElem e0 = arg_x.empty()
                        ? fix.e(1, 1) + fix.e(2, 2) + fix.e(1, 2)
                        : parse_arg(arg_x);
      CendElem e = lift_op == "zero" ? lift_idempotent_zero(fix.ctx, e0, rep)
                                     : lift_idempotent_full(fix.ctx, e0, rep);
      result = to_string(e);
    } else if (lift_op == "generator") {
      auto fix = fixtures::generator_perturbation();
      CendElem x0 = arg_x.empty() ? fix.x0 : parse_arg(arg_x);
      result = to_string(lift_conformal_generator(fix.ctx, x0, rep));
    } else if (lift_op == "units") {
      auto fix = fixtures::curr2_with_radical();
      auto diag = lift_orthogonal_family(fix.ctx, fix.split.blocks[0].diag, rep);
      MatrixUnitSystem sys = build_matrix_units(fix.ctx, diag, fix.split.blocks[0].v_row,
                                                fix.split.blocks[0].v_col, rep);
      for (const auto& row : sys.units)
        for (const auto& u : row) result += to_string(u) + "\n";
    } else {
      throw CLI::ValidationError("unknown lift op: " + lift_op);
    }
    out.j = lift_report_to_json(rep);
    out.j["result"] = result;
    out.text = lift_report_to_text(rep) + result + "\n";
    out.emit();
    return rep.all_pass() ? 0 : 1;
  }
  if (*split) {
    LiftContext ctx{1, 0, std::nullopt, IdealPresentation{HSpan::zero(1, 0), 1}, std::nullopt};
    SplitInput input;
    if (fixture == "triangular") {
      auto fix = fixtures::triangular_current();
      ctx = fix.ctx;
      input.unit_class = fixtures::identity(3) + fix.e(1, 3);
      for (int i = 1; i <= 3; ++i) {
        BlockSpec blk;
        blk.N = 1;
        blk.diag = {fix.e(i, i)};
        input.blocks.push_back(std::move(blk));
      }
    } else if (fixture == "curr2") {
      auto fix = fixtures::curr2_with_radical();
      ctx = fix.ctx;
      input = fix.split;
    } else if (fixture == "cend1") {
      auto fix = fixtures::ambient_cend1();
      ctx = fix.ctx;
      input = fix.split;
    } else if (fixture == "truncated") {
      auto fix = fixtures::truncated_counterexample();
      ctx = fix.ctx;
      input = fix.split;
    } else {
      throw CLI::ValidationError("unknown fixture: " + fixture);
    }
    SplitResult res = split_radical(ctx, input);  // throws lift_error on failure
    out.j = lift_report_to_json(res.report);
    json gens = json::array();
    for (const auto& g : res.semisimple_generators) gens.push_back(to_string(g));
    out.j["semisimple_generators"] = gens;
    out.text = lift_report_to_text(res.report);
    for (const auto& g : res.semisimple_generators) out.text += to_string(g) + "\n";
    out.emit();
    return res.report.all_pass() ? 0 : 1;
  }
  if (*cx) {
    std::mt19937 rng(seed);
    json checks = json::array();
    bool all = true;
    auto check = [&](const std::string& name, bool pass) {
      checks.push_back({{"name", name}, {"pass", pass}});
      all = all && pass;
    };
    if (*cxc) {
      for (int t = 0; t < cx_count; ++t) {
        CxElem x = random_cx(rng, 2, 5), y = random_cx(rng, 2, 5);
        CendElem ex = cx_embed(x), ey = cx_embed(y);
        bool ok = true;
        for (int n = 0; n < locality_bound(ex, ey); ++n)
          ok = ok && cx_embed(cx_product(x, y, n)) == nth_product(ex, ey, n);
        check("pair " + std::to_string(t), ok);
      }
    } else if (*cxr) {
      check("a(0,g) is radical", cx_radical_membership(CxElem::atom(Poly(), Poly::monomial(2))));
      check("a(1,0) is not radical",
            !cx_radical_membership(CxElem::atom(Poly(Rational(1)), Poly())));
      for (int t = 0; t < cx_count; ++t) {
        CxElem r, s;
        for (int k = 0; k <= 2; ++k) {
          r.add(k, Poly(), random_v_poly(rng, 4));
          s.add(k, Poly(), random_v_poly(rng, 4));
        }
        int bound = locality_bound(cx_embed(r), cx_embed(s)) + 2;
        check("radical square zero " + std::to_string(t), cx_radical_square_zero(r, s, bound));
      }
    } else if (*cxt) {
      for (int t = 0; t < cx_count; ++t) {
        CxElem x = random_cx(rng, 2, 4), y = random_cx(rng, 2, 4);
        bool hom = true;
        for (int n = 0; n < locality_bound(cx_embed(x), cx_embed(y)) + 1; ++n)
          hom = hom && cx_theta(cx_product(x, y, n)) == c1_product(cx_theta(x), cx_theta(y), n);
        check("homomorphism " + std::to_string(t), hom);
        check("kernel = radical " + std::to_string(t),
              cx_theta(x).is_zero() == cx_radical_membership(x));
      }
    } else if (*cxf) {
      PsiAnsatz sol = cx_forced_psi(cx_K);
      check("dimension = K", static_cast<int>(sol.basis.size()) == cx_K);
      HSpan expected(1, sol.window.Vb, [&] {
        std::vector<CendElem> g;
        for (int k = 1; k <= cx_K; ++k) {
          CendElem e(1);
          e.at(0, 0) = psi_basis_vector(k);
          g.push_back(e);
        }
        return g;
      }());
      for (size_t i = 0; i < sol.basis.size(); ++i) {
        CendElem e(1);
        e.at(0, 0) = sol.basis[i];
        check("solution " + std::to_string(i) + " has the forced form", expected.contains(e));
      }
      json basis = json::array();
      for (const auto& b : sol.basis) basis.push_back(to_string(b));
      out.j = {{"schema", "forced-psi-v1"},
               {"K", cx_K},
               {"dimension", sol.basis.size()},
               {"basis", basis},
               {"checks", checks}};
      out.text = "dimension " + std::to_string(sol.basis.size()) + "\n";
      for (const auto& b : sol.basis) out.text += to_string(b) + "\n";
      out.emit();
      return all ? 0 : 1;
    } else if (*cxo) {
      ObstructionCertificate cert = cx_obstruction(cx_K);
      json rows = json::array();
      for (size_t i = 0; i < cert.tags.size(); ++i)
        rows.push_back({{"a", cert.tags[i].a},
                        {"b", cert.tags[i].b},
                        {"n", cert.tags[i].n},
                        {"alpha", cert.tags[i].alpha},
                        {"beta", cert.tags[i].beta},
                        {"coefficient", to_string(cert.coefficients[i])}});
      bool replay = cert.replay();
      out.j = {{"schema", "obstruction-certificate-v1"},
               {"K", cert.K},
               {"rows", rows},
               {"constant", to_string(cert.constant)},
               {"replay", replay}};
      out.text = "infeasible: 0 = " + to_string(cert.constant) + " from " +
                 std::to_string(cert.tags.size()) + " row(s); replay " +
                 (replay ? "ok" : "FAILED") + "\n";
      out.emit();
      return replay ? 0 : 1;
    }
    out.j = {{"schema", "cx-transcript-v1"}, {"all_pass", all}, {"checks", checks}};
    out.text = all ? "verified\n" : "verification failure\n";
    out.emit();
    return all ? 0 : 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const bound_exceeded& e) {
    std::cerr << "window error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const lift_error& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
