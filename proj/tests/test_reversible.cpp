#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "starcycle/errors.hpp"
#include "starcycle/multipoly.hpp"
#include "starcycle/reversible.hpp"
#include "starcycle/system.hpp"
#include "starcycle/systems.hpp"

using namespace starcycle;

namespace {

MultiPoly V(const std::string& n) { return MultiPoly::var(n); }

MultiPoly W() { return MultiPoly::integer(1) - V("u") * V("u"); }

// A(x^2, y) / x B(x^2, y) system with random polynomial A, B.
PlanarSystem random_reversible(std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> nterms(1, 4);
  std::uniform_int_distribution<int> deg(0, 2);
  auto rand_even = [&](bool odd_x) {
    MultiPoly p;
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
      int c = coef(rng);
      if (c == 0) c = 1;
      MultiPoly term = MultiPoly::integer(c);
      int ex = deg(rng), ey = deg(rng);
      if (!odd_x && ex == 0 && ey == 0) ey = 1;  // keep the origin fixed
      for (int k = 0; k < 2 * ex; ++k) term = term * V("x");
      for (int k = 0; k < ey; ++k) term = term * V("y");
      if (odd_x) term = term * V("x");
      p = p + term;
    }
    return p;
  };
  PlanarSystem sys;
  sys.X = rand_even(false);
  sys.Y = rand_even(true);
  return sys;
}

}  // namespace

TEST_CASE("quintic family yields the known curve candidate") {
  PlanarSystem sys = parse_system_file(FIXTURES_DIR "/quintic.txt");
  AlgebraicCurveResult res = reversible_H(sys);
  REQUIRE_FALSE(res.continuum);
  MultiPoly f = V("f"), u = V("u"), w = W();
  MultiPoly a1 = V("a1"), a2 = V("a2"), b1 = V("b1"), b2 = V("b2"),
            b3 = V("b3"), b4 = V("b4"), b5 = V("b5");
  MultiPoly expected = -a1 * b2 +
                       (w * (a2 * b1 - a1 * b4) - a1 * b5 * u * u) * f * f +
                       w * w * a2 * b3 * f.pow(4);
  CHECK(res.h_fu == expected);
  // the stripped content carries the u^2 f^3-type monomial factor
  CHECK(res.h_fu * res.stripped ==
        strip_content(res.h_fu * res.stripped).first * res.stripped);
  CHECK_FALSE(res.stripped.is_zero());
}

TEST_CASE("reversible centers are detected as continua") {
  PlanarSystem sys = parse_system_file(FIXTURES_DIR "/revcenter.txt");
  AlgebraicCurveResult res = reversible_pipeline(sys);
  CHECK(res.continuum);
  CHECK_FALSE(res.curve_xy.has_value());

  std::mt19937 rng(17);
  for (int i = 0; i < 25; ++i) {
    PlanarSystem rr = random_reversible(rng);
    if (rr.X.is_zero() || rr.Y.is_zero()) continue;
    CHECK(reversible_H(rr).continuum);
  }
}

TEST_CASE("known algebraic limit cycle comes out of the quintic member") {
  PlanarSystem sys = parse_system_file(FIXTURES_DIR "/cla.txt");
  AlgebraicCurveResult res = reversible_H(sys);
  REQUIRE_FALSE(res.continuum);
  MultiPoly f = V("f"), u = V("u"), w = W();
  MultiPoly target = w * w * f.pow(4) +
                     MultiPoly::integer(2) * f * f * u * u -
                     MultiPoly::integer(1);
  CHECK(exact_div(res.h_fu, target).has_value());
}

TEST_CASE("curve conversion reproduces the printed Cartesian curves") {
  MultiPoly f = V("f"), u = V("u"), w = W();
  MultiPoly x = V("x"), y = V("y");

  MultiPoly c1 = curve_to_cartesian(w * w * f.pow(4) +
                                    MultiPoly::integer(2) * f * f * u * u -
                                    MultiPoly::integer(1));
  MultiPoly t1 = x.pow(4) + MultiPoly::integer(2) * y * y -
                 MultiPoly::integer(1);
  CHECK(c1 == strip_content(t1).first);

  MultiPoly b2 = V("b2");
  MultiPoly c2 = curve_to_cartesian(
      MultiPoly::integer(2) * w * w * f.pow(4) +
      MultiPoly::integer(4) * (MultiPoly::integer(2) * u * u -
                               MultiPoly::integer(1)) * f * f + b2);
  MultiPoly t2 = MultiPoly::integer(2) * x.pow(4) +
                 MultiPoly::integer(4) * y * y -
                 MultiPoly::integer(4) * x * x + b2;
  CHECK(c2 == strip_content(t2).first);

  CHECK(curve_to_cartesian(f - MultiPoly::integer(1)) ==
        x * x + y * y - MultiPoly::integer(1));

  CHECK_THROWS_AS((void)curve_to_cartesian(MultiPoly()), ZeroInput);
}

TEST_CASE("full pipeline on the two quintic members") {
  PlanarSystem cla = parse_system_file(FIXTURES_DIR "/cla.txt");
  AlgebraicCurveResult r1 = reversible_pipeline(cla);
  REQUIRE(r1.curve_xy.has_value());
  MultiPoly x = V("x"), y = V("y");
  CHECK(*r1.curve_xy == x.pow(4) + MultiPoly::integer(2) * y * y -
                            MultiPoly::integer(1));
  REQUIRE(r1.cofactor.has_value());
  CHECK(*r1.cofactor == MultiPoly::integer(-4) * y * y);
  CHECK(r1.sign_note == "<=0");

  PlanarSystem cla2 = parse_system_file(FIXTURES_DIR "/cla2.txt");
  PlanarSystem bound = cla2.bind({{"b2", -1}});
  AlgebraicCurveResult r2 = reversible_pipeline(bound);
  REQUIRE(r2.curve_xy.has_value());
  CHECK(*r2.curve_xy == MultiPoly::integer(2) * x.pow(4) +
                            MultiPoly::integer(4) * y * y -
                            MultiPoly::integer(4) * x * x -
                            MultiPoly::integer(1));
  REQUIRE(r2.cofactor.has_value());
  CHECK(*r2.cofactor == MultiPoly::integer(8) * y * y);
  CHECK(r2.sign_note == ">=0");
}

TEST_CASE("output curves are even in x") {
  std::mt19937 rng(23);
  int nontrivial = 0;
  while (nontrivial < 10) {
    PlanarSystem sys = random_reversible(rng);
    // perturb the reversible structure so a curve (not a continuum) appears
    sys.Y = sys.Y + V("y") * V("y");
    if (sys.X.is_zero() || sys.Y.is_zero()) continue;
    AlgebraicCurveResult res;
    try {
      res = reversible_pipeline(sys);
    } catch (const Error&) {
      continue;
    }
    if (!res.curve_xy) continue;
    CHECK(res.curve_xy->negate_var("x") == *res.curve_xy);
    CHECK(res.curve_xy->is_even_in("x"));
    ++nontrivial;
  }
  PlanarSystem cla = parse_system_file(FIXTURES_DIR "/cla.txt");
  AlgebraicCurveResult rc = reversible_pipeline(cla);
  CHECK(rc.curve_xy->is_even_in("x"));
}

TEST_CASE("integrated limit cycle lies on the output curve") {
  PlanarSystem cla = parse_system_file(FIXTURES_DIR "/cla.txt");
  AlgebraicCurveResult res = reversible_pipeline(cla);
  REQUIRE(res.curve_xy.has_value());
  CompiledPoly curve(*res.curve_xy, {"x", "y"});
  CompiledPoly cx(res.curve_xy->diff("x"), {"x", "y"});
  CompiledPoly cy(res.curve_xy->diff("y"), {"x", "y"});

  Sys3D s3 = build_3d(cla);
  double delta = 1e-3;
  double u0 = -1.0 + delta;
  // radius of the curve point at angle asin(u0): solve the quadratic in r^2
  double w0 = 1.0 - u0 * u0;
  double r2 = (-u0 * u0 + std::sqrt(u0 * u0 * u0 * u0 + w0 * w0)) / (w0 * w0);
  double f0 = std::sqrt(r2);
  Trajectory tr = integrate_heteroclinic(s3, f0, 0.0, delta, 1e-10);
  REQUIRE(tr.reached_plus);
  REQUIRE(tr.samples.size() >= 50);
  std::mt19937 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, tr.samples.size() - 1);
  for (int k = 0; k < 50; ++k) {
    const auto& s = tr.samples[pick(rng)];
    double fv = s[1], gv = s[2], uv = s[3];
    double vv = std::sqrt(std::max(0.0, 1.0 - uv * uv));
    double r = fv + vv * gv;
    double xx = r * vv, yy = r * uv;
    std::vector<double> pt = {xx, yy};
    double grad = std::hypot(cx(pt), cy(pt));
    CHECK(std::abs(curve(pt)) < 1e-6 * (1.0 + grad));
  }
}

TEST_CASE("parameter substitution commutes with the curve construction") {
  PlanarSystem quintic = parse_system_file(FIXTURES_DIR "/quintic.txt");
  std::map<std::string, Rational> values = {
      {"a1", Rational(-2)}, {"a2", Rational(1, 2)}, {"b1", 3},
      {"b2", Rational(-1)}, {"b3", 2},              {"b4", Rational(5, 3)},
      {"b5", Rational(-3, 4)}};
  AlgebraicCurveResult sym = reversible_H(quintic);
  AlgebraicCurveResult bound = reversible_H(quintic.bind(values));
  std::map<std::string, MultiPoly> binding;
  for (const auto& [k, v] : values) binding.emplace(k, MultiPoly::constant(v));
  CHECK(strip_content(sym.h_fu.subst(binding)).first == bound.h_fu);
}
