#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "starcycle/common.hpp"
#include "starcycle/errors.hpp"
#include "starcycle/multipoly.hpp"
#include "starcycle/system.hpp"

using namespace starcycle;

namespace {

MultiPoly V(const std::string& n) { return MultiPoly::var(n); }

FUSystem load_a() { return parse_fu_system_file(FIXTURES_DIR "/commonA.txt"); }
FUSystem load_b() { return parse_fu_system_file(FIXTURES_DIR "/commonB.txt"); }

MultiPoly random_poly(std::mt19937& rng, int max_deg) {
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> nterms(1, 5);
  std::uniform_int_distribution<int> deg(0, max_deg);
  MultiPoly p;
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    int c = coef(rng);
    if (c == 0) c = 1;
    MultiPoly term = MultiPoly::integer(c);
    int budget = deg(rng);
    for (const auto* v : {"f", "u"}) {
      if (budget <= 0) break;
      std::uniform_int_distribution<int> e(0, budget);
      int ev = e(rng);
      for (int k = 0; k < ev; ++k) term = term * V(v);
      budget -= ev;
    }
    p = p + term;
  }
  return p;
}

}  // namespace

TEST_CASE("problem assembly follows the defining formulas") {
  std::mt19937 rng(5);
  for (int i = 0; i < 15; ++i) {
    FUSystem a{random_poly(rng, 4), random_poly(rng, 4), {}};
    FUSystem b{random_poly(rng, 4), random_poly(rng, 4), {}};
    CommonProblem cp = build_problem(a, b);
    CHECK(cp.h == a.P * b.Q - b.P * a.Q);
    CHECK(cp.j[0] == cp.h.diff("f") * a.P + cp.h.diff("u") * a.Q);
    CHECK(cp.j[1] == cp.h.diff("f") * b.P + cp.h.diff("u") * b.Q);
    // swapping the systems negates h
    CommonProblem sw = build_problem(b, a);
    CHECK(sw.h == -cp.h);
  }
}

TEST_CASE("degenerate assemblies") {
  FUSystem a{V("f"), V("u"), {}};
  CommonProblem same = build_problem(a, a);
  CHECK(same.h.is_zero());

  FUSystem one{MultiPoly::integer(1), MultiPoly(), {}};
  FUSystem other{MultiPoly(), MultiPoly::integer(1), {}};
  CommonProblem cp = build_problem(one, other);
  CHECK(cp.h == MultiPoly::integer(1));
  CHECK(cp.j[0].is_zero());
  CHECK(cp.j[1].is_zero());
}

TEST_CASE("worked pair has the expected extreme coefficients") {
  CommonProblem cp = build_problem(load_a(), load_b());
  auto cf = cp.h.coeffs_wrt("f");
  REQUIRE(cf.size() == 9);
  MultiPoly u = V("u");
  CHECK(cf[8] == -V("rho") * u);
  CHECK(cf[0] == (V("sigma") - u * u) *
                     (V("lambda") * u - u * u + MultiPoly::integer(1)));
}

TEST_CASE("elimination on a linear toy pair") {
  CommonProblem cp;
  cp.h = V("f") - V("u");
  cp.j[0] = V("f") + V("u");
  cp.j[1] = cp.j[0];
  ConditionPair pair = condition_polys(cp, 1);
  bool up = pair.g_f == MultiPoly::integer(2) * V("f");
  bool down = pair.g_f == MultiPoly::integer(-2) * V("f");
  CHECK((up || down));
  CHECK_FALSE(pair.degenerate_u);
}

TEST_CASE("constant inputs use the degenerate conventions") {
  CommonProblem cp;
  cp.h = V("f") * V("f") + MultiPoly::integer(1);  // constant in u
  cp.j[0] = V("u") + V("f");
  cp.j[1] = cp.j[0];
  ConditionPair pair = condition_polys(cp, 1);
  CHECK(pair.degenerate_u);
  CHECK_FALSE(pair.degenerate_f);
}

TEST_CASE("a shared invariant line forces both resultants to vanish") {
  MultiPoly f = V("f"), u = V("u");
  // both systems keep f - u = 0 invariant by construction
  FUSystem a{f * f + (f - u), f * f, {}};
  FUSystem b{u * f, u * f - MultiPoly::integer(2) * (f - u), {}};
  CommonProblem cp = build_problem(a, b);
  CHECK(exact_div(cp.h, f - u).has_value());
  for (int i : {1, 2}) {
    CurveReport cr = verify_common_curve(i == 1 ? a : b, i == 1 ? b : a,
                                         f - u, {});
    CHECK(cr.common);
    ConditionPair pair = condition_polys(cp, i);
    CHECK(pair.g_f.is_zero());
    CHECK(pair.g_u.is_zero());
  }
}

TEST_CASE("parameter conditions are the nonzero coefficients") {
  MultiPoly lam = V("lambda"), f = V("f");
  auto conds = parameter_conditions((lam - MultiPoly::integer(2)) * f, "f");
  REQUIRE(conds.size() == 1);
  CHECK(conds[0] == lam - MultiPoly::integer(2));
  CHECK(parameter_conditions(MultiPoly(), "f").empty());
}

TEST_CASE("the worked pair accepts only the known assignment") {
  CommonProblem cp = build_problem(load_a(), load_b());
  ParamReport good = verify_params(
      cp, {{"rho", 1}, {"lambda", 2}, {"sigma", 1}});
  CHECK(good.necessary_condition_met);
  CHECK_FALSE(good.degenerate);

  ParamReport bad = verify_params(
      cp, {{"rho", 0}, {"lambda", 0}, {"sigma", 0}});
  CHECK_FALSE(bad.necessary_condition_met);
}

TEST_CASE("identically matching systems report the degenerate flag") {
  FUSystem a{V("f") * V("c"), V("u"), {}};
  FUSystem b{V("f"), V("u"), {}};
  CommonProblem cp = build_problem(a, b);
  ParamReport rep = verify_params(cp, {{"c", 1}});
  CHECK(rep.degenerate);
  CHECK(rep.necessary_condition_met);
}

TEST_CASE("verification is stable under scaling a system") {
  FUSystem a = load_a(), b = load_b();
  Rational s(3, 7);
  FUSystem a_scaled{a.P * s, a.Q * s, {}};
  CommonProblem cp = build_problem(a, b);
  CommonProblem cps = build_problem(a_scaled, b);
  for (auto assignment :
       {std::map<std::string, Rational>{{"rho", 1}, {"lambda", 2}, {"sigma", 1}},
        std::map<std::string, Rational>{{"rho", 2}, {"lambda", 1}, {"sigma", 3}}}) {
    ParamReport r1 = verify_params(cp, assignment);
    ParamReport r2 = verify_params(cps, assignment);
    CHECK(r1.necessary_condition_met == r2.necessary_condition_met);
  }
}

TEST_CASE("candidate curve verification on the worked pair") {
  FUSystem a = load_a(), b = load_b();
  std::map<std::string, Rational> at = {{"rho", 1}, {"lambda", 2}, {"sigma", 1}};
  MultiPoly f = V("f"), u = V("u");
  MultiPoly curve = f.pow(3) - u * u + MultiPoly::integer(1);
  CurveReport good = verify_common_curve(a, b, curve, at);
  CHECK(good.common);
  REQUIRE(good.cofactor_a.has_value());
  REQUIRE(good.cofactor_b.has_value());
  // re-check the reported cofactors by arithmetic
  std::map<std::string, MultiPoly> bind = {{"rho", MultiPoly::integer(1)},
                                           {"lambda", MultiPoly::integer(2)},
                                           {"sigma", MultiPoly::integer(1)}};
  MultiPoly lie_a = curve.diff("f") * a.P.subst(bind) +
                    curve.diff("u") * a.Q.subst(bind);
  CHECK(lie_a == *good.cofactor_a * curve);

  // the other factor of h is invariant for one system only
  MultiPoly other = V("rho") * f.pow(4) - f.pow(4) -
                    MultiPoly::integer(3) * f.pow(3) - V("sigma") * f + f +
                    MultiPoly::integer(2);
  CurveReport badr = verify_common_curve(a, b, other, at);
  CHECK_FALSE(badr.common);

  CHECK_THROWS_AS(
      (void)verify_common_curve(a, b, MultiPoly::integer(1) + f - f, at),
      ZeroSurface);
}

TEST_CASE("small condition systems solve by elimination") {
  MultiPoly lam = V("lambda"), sig = V("sigma");
  auto sols = solve_conditions(
      {lam - MultiPoly::integer(2), sig - MultiPoly::integer(1)},
      {"lambda", "sigma"});
  REQUIRE(sols.size() == 1);
  CHECK(sols[0].at("lambda") == 2);
  CHECK(sols[0].at("sigma") == 1);

  auto quad = solve_conditions({lam * lam - MultiPoly::integer(4)}, {"lambda"});
  REQUIRE(quad.size() == 2);
  CHECK(((quad[0].at("lambda") == 2 && quad[1].at("lambda") == -2) ||
         (quad[0].at("lambda") == -2 && quad[1].at("lambda") == 2)));

  // coupled pair: lambda*sigma - 2 = 0, lambda + sigma - 3 = 0
  auto pairs = solve_conditions(
      {lam * sig - MultiPoly::integer(2), lam + sig - MultiPoly::integer(3)},
      {"lambda", "sigma"});
  REQUIRE(pairs.size() == 2);
  for (const auto& s : pairs) {
    CHECK(s.at("lambda") * s.at("sigma") == 2);
    CHECK(s.at("lambda") + s.at("sigma") == 3);
  }
}
